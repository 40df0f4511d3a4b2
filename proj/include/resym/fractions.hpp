#pragma once

#include <utility>
#include <vector>

#include "errors.hpp"
#include "forms.hpp"
#include "groebner.hpp"
#include "residue.hpp"
#include "ring.hpp"

namespace resym {

/// Generalized fraction [nu; t_1^(b_1), ..., t_r^(b_r)]: a local cohomology
/// class with a differential-form numerator of degree r (or r-1 before the
/// exterior-derivative action) and positive exponents on a zero-dimensional
/// denominator sequence.
struct GenFraction {
    DiffForm numerator;
    DenomTuple denoms;
    std::vector<int> exponents;

    const ContextPtr& ctx() const { return numerator.ctx(); }

    /// The actual denominators t_i^(b_i).
    std::vector<Poly> powered_denoms() const {
        std::vector<Poly> out;
        out.reserve(denoms.denoms.size());
        for (std::size_t i = 0; i < denoms.denoms.size(); ++i) out.push_back(denoms.denoms[i].pow(exponents[i]));
        return out;
    }
};

inline GenFraction make_fraction(DiffForm numerator, DenomTuple denoms, std::vector<int> exponents) {
    require_same_context(numerator.ctx(), denoms.ctx());
    require(exponents.size() == denoms.denoms.size(), ErrorCode::LengthMismatch,
            "one exponent per denominator required");
    for (int b : exponents) require(b >= 1, ErrorCode::BadArgument, "exponents must be positive");
    const int r = static_cast<int>(numerator.ctx()->fiber_dim());
    require(numerator.degree() == r || numerator.degree() == r - 1, ErrorCode::DegreeMismatch,
            "fraction numerator must have degree r or r-1");
    return GenFraction{std::move(numerator), std::move(denoms), std::move(exponents)};
}

/// Zero test: every coefficient of the numerator lies in (t^b), decided by
/// Groebner membership.
inline bool fraction_is_zero(const GenFraction& fr) {
    const int r = static_cast<int>(fr.ctx()->fiber_dim());
    require(fr.numerator.degree() == r, ErrorCode::DegreeMismatch, "zero test needs a degree-r numerator");
    GroebnerBasis gb = buchberger(fr.powered_denoms(), MonomialOrder::natural(*fr.ctx()));
    for (const auto& [idx, c] : fr.numerator.components())
        if (!in_ideal(c, gb)) return false;
    return true;
}

/// Multiplies the numerator by prod t_i^(g_i - b_i); the class (and its
/// residue) is unchanged.
inline GenFraction fraction_rescale(const GenFraction& fr, const std::vector<int>& gamma) {
    require(gamma.size() == fr.exponents.size(), ErrorCode::LengthMismatch, "gamma length mismatch");
    Poly factor = Poly::constant(fr.ctx(), Coeff(1));
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        require(gamma[i] >= fr.exponents[i], ErrorCode::NotDominating, "gamma must dominate the exponents");
        factor = factor * fr.denoms.denoms[i].pow(gamma[i] - fr.exponents[i]);
    }
    return GenFraction{fr.numerator.scaled_by(factor), fr.denoms, gamma};
}

/// The exterior-derivative action on classes with (r-1)-form numerators:
///   [eta; t^k] -> [d eta; t^k] - sum_j k_j [dt_j ^ eta; ..., t_j^(k_j+1), ...]
/// returned as the exact formal combination.
inline std::vector<GenFraction> d_fraction(const GenFraction& fr) {
    const ContextPtr& ctx = fr.ctx();
    const int r = static_cast<int>(ctx->fiber_dim());
    require(fr.numerator.degree() == r - 1, ErrorCode::DegreeMismatch,
            "exterior-derivative action needs a degree r-1 numerator");
    std::vector<GenFraction> out;
    DiffForm deta = exterior_derivative(fr.numerator);
    if (!deta.is_zero()) out.push_back(GenFraction{deta, fr.denoms, fr.exponents});
    for (std::size_t j = 0; j < fr.denoms.denoms.size(); ++j) {
        DiffForm dt = DiffForm::zero(ctx, 1);
        for (std::size_t v = 0; v < ctx->nvars(); ++v)
            dt.add_component({static_cast<int>(v)}, fr.denoms.denoms[j].derivative(v));
        DiffForm num = wedge(dt, fr.numerator).scaled(Coeff(-fr.exponents[j]));
        if (num.is_zero()) continue;
        std::vector<int> exps = fr.exponents;
        exps[j] += 1;
        out.push_back(GenFraction{std::move(num), fr.denoms, std::move(exps)});
    }
    return out;
}

/// Residue of the class: the residue symbol against the powered denominators.
inline ResidueValue residue_of_fraction(const GenFraction& fr) {
    const int r = static_cast<int>(fr.ctx()->fiber_dim());
    require(fr.numerator.degree() == r, ErrorCode::DegreeMismatch, "residue needs a degree-r numerator");
    return residue_symbol(fr.numerator, make_denom_tuple(fr.powered_denoms()));
}

namespace detail {

/// Rewrites fr against the target generating sequence `t` of the same ideal:
/// finds M with t_i^M in (powered denominators of fr), expresses each t_i^M
/// through Groebner cofactors and applies the transformation determinant.
inline GenFraction rewrite_against(const GenFraction& fr, const DenomTuple& t, int min_exponent) {
    const ContextPtr& ctx = fr.ctx();
    std::vector<Poly> powered = fr.powered_denoms();
    GroebnerBasis gb = buchberger(powered, MonomialOrder::natural(*ctx));
    int M = min_exponent;
    std::vector<std::vector<Poly>> u;
    for (;; ++M) {
        require(M <= 512, ErrorCode::NoCommonRefinement, "no common refinement found");
        u.clear();
        bool ok = true;
        for (const auto& ti : t.denoms) {
            auto [rem, w] = normal_form(ti.pow(M), gb);
            if (!rem.is_zero()) {
                ok = false;
                break;
            }
            u.push_back(w.cofactors);
        }
        if (ok) break;
    }
    Poly det = poly_det(u, ctx);
    return GenFraction{fr.numerator.scaled_by(det), t, std::vector<int>(t.denoms.size(), M)};
}

} // namespace detail

/// Equality of classes. Identical denominator sequences are rescaled to the
/// componentwise maximum; sequences generating the same ideal are first
/// rewritten against a shared generating sequence through cofactors and the
/// transformation determinant. Distinct ideals have no common refinement.
inline bool fraction_equal(const GenFraction& a, const GenFraction& b) {
    require_same_context(a.ctx(), b.ctx());
    const int r = static_cast<int>(a.ctx()->fiber_dim());
    require(a.numerator.degree() == r && b.numerator.degree() == r, ErrorCode::DegreeMismatch,
            "equality needs degree-r numerators");
    if (a.denoms.denoms == b.denoms.denoms) {
        std::vector<int> gamma(a.exponents.size());
        for (std::size_t i = 0; i < gamma.size(); ++i) gamma[i] = std::max(a.exponents[i], b.exponents[i]);
        GenFraction ra = fraction_rescale(a, gamma), rb = fraction_rescale(b, gamma);
        return fraction_is_zero(GenFraction{ra.numerator - rb.numerator, ra.denoms, gamma});
    }
    GroebnerBasis ga = buchberger(a.denoms.denoms, MonomialOrder::natural(*a.ctx()));
    GroebnerBasis gbb = buchberger(b.denoms.denoms, MonomialOrder::natural(*a.ctx()));
    require(ga.basis == gbb.basis, ErrorCode::NoCommonRefinement,
            "denominator sequences generate different ideals");
    int m0 = 1;
    for (int e : a.exponents) m0 = std::max(m0, e);
    for (int e : b.exponents) m0 = std::max(m0, e);
    GenFraction ra = detail::rewrite_against(a, b.denoms, m0);
    GenFraction rb = detail::rewrite_against(b, b.denoms, m0);
    std::vector<int> gamma(ra.exponents.size());
    for (std::size_t i = 0; i < gamma.size(); ++i) gamma[i] = std::max(ra.exponents[i], rb.exponents[i]);
    ra = fraction_rescale(ra, gamma);
    rb = fraction_rescale(rb, gamma);
    return fraction_is_zero(GenFraction{ra.numerator - rb.numerator, ra.denoms, gamma});
}

} // namespace resym
