#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "coeff.hpp"
#include "forms.hpp"
#include "ring.hpp"

namespace resym {

/// Canonical text form: terms sorted descending in the context's natural
/// order, coefficients as "p" or "p/q", monomials as "x^2*y". Uses only
/// grammar tokens, so parse(format(p)) == p.
inline std::string poly_to_string(const Poly& p) {
    if (p.is_zero()) return "0";
    const auto& ctx = *p.ctx();
    MonomialOrder order = MonomialOrder::natural(ctx);
    std::vector<std::pair<Exponent, Coeff>> terms(p.terms().begin(), p.terms().end());
    std::sort(terms.begin(), terms.end(), [&](const auto& a, const auto& b) { return order.less(b.first, a.first); });
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms) {
        Coeff abs = c;
        bool neg = c < 0;
        if (neg) abs = -abs;
        std::string mono;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += ctx.vars[i];
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        std::string coeff_str = coeff_to_string(abs);
        std::string term;
        if (mono.empty())
            term = coeff_str;
        else if (coeff_str == "1")
            term = mono;
        else
            term = coeff_str + "*" + mono;
        if (first) {
            out += (neg ? "-" : "") + term;
            first = false;
        } else {
            out += (neg ? " - " : " + ") + term;
        }
    }
    return out;
}

inline std::string form_to_string(const DiffForm& f) {
    if (f.degree() == 0) return poly_to_string(f.component({}));
    if (f.is_zero()) return "0";
    const auto& ctx = *f.ctx();
    std::string out;
    bool first = true;
    for (const auto& [idx, c] : f.components()) {
        std::string basis;
        for (int i : idx) {
            if (!basis.empty()) basis += "/\\";
            basis += "d(" + ctx.vars[static_cast<std::size_t>(i)] + ")";
        }
        std::string coeff = poly_to_string(c);
        std::string term;
        if (coeff == "1")
            term = basis;
        else if (coeff == "-1")
            term = "-" + basis;
        else if (c.nterms() > 1)
            term = "(" + coeff + ")*" + basis;
        else
            term = coeff + "*" + basis;
        if (first) {
            out += term;
            first = false;
        } else if (!term.empty() && term[0] == '-') {
            out += " - " + term.substr(1);
        } else {
            out += " + " + term;
        }
    }
    return out;
}

inline std::string residue_value_to_string(const Poly& value) {
    if (value.is_constant()) return coeff_to_string(value.constant_value());
    return poly_to_string(value);
}

} // namespace resym
