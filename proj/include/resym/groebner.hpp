#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "ring.hpp"

namespace resym {

/// Constructive ideal-membership witness: target = sum cofactors[j] * f_j
/// over the original generator list. The identity is re-multiplied and
/// checked at construction sites.
struct CofactorWitness {
    Poly target;
    std::vector<Poly> cofactors;
};

/// Reduced Groebner basis with transition data: every basis element carries
/// the cofactor vector expressing it over the original generators.
struct GroebnerBasis {
    ContextPtr ctx;
    MonomialOrder order;
    std::vector<Poly> gens;
    std::vector<Poly> basis;                    // reduced, monic, sorted by leading monomial
    std::vector<std::vector<Poly>> transition;  // basis[i] = sum transition[i][j] * gens[j]

    std::vector<Exponent> leading_monomials() const {
        std::vector<Exponent> lm;
        lm.reserve(basis.size());
        for (const auto& g : basis) lm.push_back(g.leading_term(order).first);
        return lm;
    }
};

namespace detail {

struct TrackedPoly {
    Poly p;
    std::vector<Poly> cof; // over the original generators
};

inline void check_combination(const Poly& target, const std::vector<Poly>& cof, const std::vector<Poly>& gens) {
    Poly acc = Poly::zero(target.ctx());
    for (std::size_t j = 0; j < gens.size(); ++j) acc = acc + cof[j] * gens[j];
    require(acc == target, ErrorCode::Internal, "cofactor identity violated");
}

// Full reduction of `t` by `red`: no monomial of the remainder is divisible
// by any leading monomial of `red`. The quantity t.p - sum t.cof[j] * gens[j]
// is invariant under each step.
inline void reduce_tracked(TrackedPoly& t, const std::vector<TrackedPoly>& red, const MonomialOrder& order) {
    const ContextPtr& ctx = t.p.ctx();
    bool changed = true;
    while (changed && !t.p.is_zero()) {
        changed = false;
        // reduce the largest reducible monomial
        // (scanning from the leading side keeps termination obvious)
        std::vector<std::pair<Exponent, Coeff>> terms(t.p.terms().begin(), t.p.terms().end());
        std::sort(terms.begin(), terms.end(),
                  [&](const auto& a, const auto& b) { return order.less(b.first, a.first); });
        for (const auto& [mono, coeff] : terms) {
            for (const auto& g : red) {
                auto [glm, glc] = g.p.leading_term(order);
                if (!exp_divides(glm, mono)) continue;
                Coeff f = ctx->field.div(coeff, glc);
                Poly factor = Poly::monomial(ctx, exp_sub(mono, glm), f);
                t.p = t.p - factor * g.p;
                for (std::size_t j = 0; j < t.cof.size(); ++j) t.cof[j] = t.cof[j] - factor * g.cof[j];
                changed = true;
                break;
            }
            if (changed) break;
        }
    }
}

} // namespace detail

/// Buchberger's algorithm (normal selection strategy, coprimality criterion)
/// producing a reduced basis with verified transition data.
inline GroebnerBasis buchberger(const std::vector<Poly>& gens, const MonomialOrder& order) {
    require(!gens.empty(), ErrorCode::BadArgument, "empty generator list");
    const ContextPtr& ctx = gens.front().ctx();
    for (const auto& g : gens) require_same_context(ctx, g.ctx());

    std::vector<detail::TrackedPoly> G;
    auto unit_cof = [&](std::size_t j) {
        std::vector<Poly> c(gens.size(), Poly::zero(ctx));
        c[j] = Poly::constant(ctx, Coeff(1));
        return c;
    };
    for (std::size_t j = 0; j < gens.size(); ++j) {
        if (gens[j].is_zero()) continue;
        detail::TrackedPoly t{gens[j], unit_cof(j)};
        detail::reduce_tracked(t, G, order);
        if (!t.p.is_zero()) G.push_back(std::move(t));
    }
    require(!G.empty(), ErrorCode::BadArgument, "all generators are zero");

    // pair queue keyed by (lcm degree, i, j): normal strategy
    using PairKey = std::tuple<int, std::size_t, std::size_t>;
    std::set<PairKey> pairs;
    auto push_pairs = [&](std::size_t k) {
        for (std::size_t i = 0; i < k; ++i) {
            auto lmi = G[i].p.leading_term(order).first;
            auto lmk = G[k].p.leading_term(order).first;
            pairs.insert({total_degree(exp_lcm(lmi, lmk)), i, k});
        }
    };
    for (std::size_t k = 1; k < G.size(); ++k) push_pairs(k);

    while (!pairs.empty()) {
        auto [deg, i, j] = *pairs.begin();
        pairs.erase(pairs.begin());
        auto [lmi, lci] = G[i].p.leading_term(order);
        auto [lmj, lcj] = G[j].p.leading_term(order);
        Exponent lcm = exp_lcm(lmi, lmj);
        if (lcm == exp_add(lmi, lmj)) continue; // coprime criterion
        Poly mi = Poly::monomial(ctx, exp_sub(lcm, lmi), ctx->field.inv(lci));
        Poly mj = Poly::monomial(ctx, exp_sub(lcm, lmj), ctx->field.inv(lcj));
        detail::TrackedPoly s;
        s.p = mi * G[i].p - mj * G[j].p;
        s.cof.assign(gens.size(), Poly::zero(ctx));
        for (std::size_t k2 = 0; k2 < gens.size(); ++k2) s.cof[k2] = mi * G[i].cof[k2] - mj * G[j].cof[k2];
        detail::reduce_tracked(s, G, order);
        if (!s.p.is_zero()) {
            G.push_back(std::move(s));
            push_pairs(G.size() - 1);
        }
    }

    // minimalize: drop elements whose leading monomial is divisible by another's
    std::vector<detail::TrackedPoly> minimal;
    for (std::size_t i = 0; i < G.size(); ++i) {
        auto lmi = G[i].p.leading_term(order).first;
        bool redundant = false;
        for (std::size_t j = 0; j < G.size() && !redundant; ++j) {
            if (i == j) continue;
            auto lmj = G[j].p.leading_term(order).first;
            if (exp_divides(lmj, lmi) && (lmj != lmi || j < i)) redundant = true;
        }
        if (!redundant) minimal.push_back(G[i]);
    }

    // interreduce tails and make monic
    std::vector<detail::TrackedPoly> reduced;
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        std::vector<detail::TrackedPoly> others;
        for (std::size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        detail::TrackedPoly t = minimal[i];
        auto [lm, lc] = t.p.leading_term(order);
        Poly head = Poly::monomial(ctx, lm, lc);
        detail::TrackedPoly tail{t.p - head, t.cof};
        detail::reduce_tracked(tail, others, order);
        t.p = tail.p + head;
        t.cof = tail.cof;
        Coeff inv = ctx->field.inv(lc);
        t.p = t.p.scaled(inv);
        for (auto& c : t.cof) c = c.scaled(inv);
        reduced.push_back(std::move(t));
    }
    std::sort(reduced.begin(), reduced.end(), [&](const auto& a, const auto& b) {
        return order.less(a.p.leading_term(order).first, b.p.leading_term(order).first);
    });

    GroebnerBasis gb;
    gb.ctx = ctx;
    gb.order = order;
    gb.gens = gens;
    for (auto& t : reduced) {
        detail::check_combination(t.p, t.cof, gens);
        gb.basis.push_back(std::move(t.p));
        gb.transition.push_back(std::move(t.cof));
    }
    return gb;
}

/// Remainder of p modulo the basis plus a witness for p - remainder over the
/// original generators.
inline std::pair<Poly, CofactorWitness> normal_form(const Poly& p, const GroebnerBasis& gb) {
    require_same_context(p.ctx(), gb.ctx);
    std::vector<detail::TrackedPoly> red;
    red.reserve(gb.basis.size());
    for (std::size_t i = 0; i < gb.basis.size(); ++i) red.push_back({gb.basis[i], gb.transition[i]});
    detail::TrackedPoly t{p, std::vector<Poly>(gb.gens.size(), Poly::zero(gb.ctx))};
    detail::reduce_tracked(t, red, gb.order);
    CofactorWitness w{p - t.p, t.cof};
    for (auto& c : w.cofactors) c = -c; // p - rem = sum cofactors * gens
    detail::check_combination(w.target, w.cofactors, gb.gens);
    return {t.p, w};
}

inline Poly reduce(const Poly& p, const GroebnerBasis& gb) { return normal_form(p, gb).first; }

inline bool in_ideal(const Poly& p, const GroebnerBasis& gb) { return reduce(p, gb).is_zero(); }

/// Fiber-block zero-dimensionality certificate: for each fiber variable the
/// minimal e with T_i^e among the leading monomials, absent when some fiber
/// variable has no pure-power leading monomial. The unit ideal (leading
/// monomial 1, empty subscheme) certifies with all exponents zero.
inline std::optional<std::vector<int>> certify_zero_dimensional(const GroebnerBasis& gb) {
    const auto& ctx = *gb.ctx;
    std::vector<int> exps(ctx.fiber_dim(), -1);
    for (const auto& lm : gb.leading_monomials())
        if (total_degree(lm) == 0) return std::vector<int>(ctx.fiber_dim(), 0);
    for (const auto& lm : gb.leading_monomials()) {
        int support_var = -1;
        bool pure = true;
        for (std::size_t i = 0; i < lm.size(); ++i) {
            if (lm[i] == 0) continue;
            if (support_var != -1 || ctx.is_base_var(i)) {
                pure = false;
                break;
            }
            support_var = static_cast<int>(i);
        }
        if (!pure || support_var < 0) continue;
        std::size_t fi = static_cast<std::size_t>(support_var) - ctx.base_block;
        int e = lm[static_cast<std::size_t>(support_var)];
        if (exps[fi] < 0 || e < exps[fi]) exps[fi] = e;
    }
    for (int e : exps)
        if (e < 0) return std::nullopt;
    return exps;
}

/// Zero-dimensional quotient with standard-monomial basis and per-variable
/// multiplication matrices (entries are base-block polynomials).
struct QuotientAlgebra {
    GroebnerBasis gb;
    std::vector<Exponent> std_monomials;   // fiber-supported, order-ascending
    std::vector<PolyMat> mult_matrices;    // one per fiber variable
    std::size_t rank = 0;

    std::size_t monomial_index(const Exponent& e) const {
        auto it = index_.find(e);
        require(it != index_.end(), ErrorCode::Internal, "monomial outside the standard basis");
        return it->second;
    }

    std::map<Exponent, std::size_t> index_;
};

namespace detail {

/// Splits a normal form into std-basis coordinates with base-ring entries.
inline std::vector<Poly> coordinates(const Poly& nf, const QuotientAlgebra& q) {
    const ContextPtr& ctx = q.gb.ctx;
    std::vector<Poly> coords(q.rank, Poly::zero(ctx));
    for (const auto& [e, c] : nf.terms()) {
        Exponent fiber(e.size(), 0), base(e.size(), 0);
        for (std::size_t i = 0; i < e.size(); ++i)
            (ctx->is_fiber_var(i) ? fiber[i] : base[i]) = e[i];
        std::size_t idx = q.monomial_index(fiber);
        coords[idx].add_term(base, c);
    }
    return coords;
}

} // namespace detail

inline QuotientAlgebra quotient_algebra(const GroebnerBasis& gb) {
    const auto& ctx = *gb.ctx;
    auto cert = certify_zero_dimensional(gb);
    require(cert.has_value(), ErrorCode::NotZeroDimensional,
            "ideal is not certified zero-dimensional over the fiber block");
    auto lms = gb.leading_monomials();
    if (ctx.base_block > 0) {
        for (const auto& lm : lms)
            for (std::size_t i = 0; i < ctx.base_block; ++i)
                require(lm[i] == 0, ErrorCode::NotCertifiedFree,
                        "leading monomial involves a base variable; freeness not certified");
    }

    QuotientAlgebra q;
    q.gb = gb;

    // enumerate fiber monomials under the pure-power staircase
    const std::size_t r = ctx.fiber_dim();
    std::vector<Exponent> monos;
    Exponent cur(ctx.nvars(), 0);
    std::function<void(std::size_t)> walk = [&](std::size_t fi) {
        if (fi == r) {
            for (const auto& lm : lms)
                if (exp_divides(lm, cur)) return;
            monos.push_back(cur);
            return;
        }
        std::size_t v = ctx.base_block + fi;
        for (int e = 0; e < (*cert)[fi]; ++e) {
            cur[v] = e;
            walk(fi + 1);
        }
        cur[v] = 0;
    };
    walk(0);
    std::sort(monos.begin(), monos.end(), [&](const Exponent& a, const Exponent& b) { return gb.order.less(a, b); });
    q.std_monomials = std::move(monos);
    q.rank = q.std_monomials.size();
    for (std::size_t i = 0; i < q.rank; ++i) q.index_[q.std_monomials[i]] = i;

    for (std::size_t fi = 0; fi < r; ++fi) {
        std::size_t v = ctx.base_block + fi;
        PolyMat m(q.rank, gb.ctx);
        for (std::size_t j = 0; j < q.rank; ++j) {
            Poly prod = Poly::monomial(gb.ctx, q.std_monomials[j], Coeff(1)) * Poly::variable(gb.ctx, v);
            Poly nf = reduce(prod, gb);
            auto col = detail::coordinates(nf, q);
            for (std::size_t i = 0; i < q.rank; ++i) m.at(i, j) = col[i];
        }
        q.mult_matrices.push_back(std::move(m));
    }
    for (std::size_t i = 0; i < q.mult_matrices.size(); ++i)
        for (std::size_t j = i + 1; j < q.mult_matrices.size(); ++j)
            require(q.mult_matrices[i] * q.mult_matrices[j] == q.mult_matrices[j] * q.mult_matrices[i],
                    ErrorCode::Internal, "multiplication matrices fail to commute");
    return q;
}

/// Trace of multiplication by c on the standard-monomial basis; lies in the
/// base ring (a constant when the ring is absolute).
inline Poly canonical_trace(const QuotientAlgebra& q, const Poly& c) {
    require_same_context(c.ctx(), q.gb.ctx);
    Poly nf = reduce(c, q.gb);
    Poly tr = Poly::zero(q.gb.ctx);
    for (std::size_t j = 0; j < q.rank; ++j) {
        Poly prod = Poly::monomial(q.gb.ctx, q.std_monomials[j], Coeff(1)) * nf;
        auto col = detail::coordinates(reduce(prod, q.gb), q);
        tr = tr + col[j];
    }
    return tr;
}

} // namespace resym
