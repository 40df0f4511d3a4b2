#pragma once

// Umbrella header for the residue-symbol engine.

#include "coeff.hpp"
#include "errors.hpp"
#include "finite_trace.hpp"
#include "format.hpp"
#include "forms.hpp"
#include "fractions.hpp"
#include "groebner.hpp"
#include "linalg.hpp"
#include "parse.hpp"
#include "projective.hpp"
#include "residue.hpp"
#include "ring.hpp"
#include "verify.hpp"
