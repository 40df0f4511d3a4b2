#pragma once

#include <utility>
#include <vector>

#include "errors.hpp"
#include "forms.hpp"
#include "groebner.hpp"
#include "residue.hpp"
#include "ring.hpp"

namespace resym {

/// Complete-intersection presentation of a finite flat map: S = E/(f) with
/// E = k[u][T], d relations for d fiber variables, certified finite free
/// over the base R = k[u] by a block-order Groebner basis.
struct FinitePresentation {
    ContextPtr ctx; // base_block > 0
    std::vector<Poly> relations;
    GroebnerBasis gb;
    QuotientAlgebra quotient;
};

inline FinitePresentation make_finite_presentation(std::vector<Poly> relations) {
    require(!relations.empty(), ErrorCode::BadArgument, "empty relation list");
    const ContextPtr& ctx = relations.front().ctx();
    for (const auto& f : relations) require_same_context(ctx, f.ctx());
    require(ctx->base_block > 0, ErrorCode::BadArgument, "presentation requires a base block");
    require(relations.size() == ctx->fiber_dim(), ErrorCode::BadArgument,
            "need exactly one relation per fiber variable");
    FinitePresentation p;
    p.ctx = ctx;
    p.relations = std::move(relations);
    p.gb = buchberger(p.relations, MonomialOrder::natural(*ctx));
    p.quotient = quotient_algebra(p.gb); // throws NotCertifiedFree when uncertified
    return p;
}

/// tr_{S/R}(s): canonical trace on the relative quotient algebra, a
/// polynomial in the base variables.
inline Poly trace_function(const FinitePresentation& pres, const Poly& s) {
    require_same_context(s.ctx(), pres.ctx);
    return canonical_trace(pres.quotient, s);
}

/// The Kunz-Lipman trace of differential forms along the finite map: write
/// df_1 ^ ... ^ df_d ^ eta = sum_K x_K dT ^ du_K and return
/// sum_K Res[x_K dT; f] du_K, an n-form on the base variables.
inline DiffForm klt_trace(const FinitePresentation& pres, const DiffForm& eta) {
    const ContextPtr& ctx = pres.ctx;
    require_same_context(eta.ctx(), ctx);
    const std::size_t d = ctx->fiber_dim();
    const std::size_t m = ctx->base_block;
    require(eta.degree() == static_cast<int>(m), ErrorCode::DegreeMismatch,
            "eta must be a lift of a top relative form: degree = base dimension");

    DiffForm big = eta;
    for (std::size_t j = d; j-- > 0;) {
        DiffForm df(ctx, 1);
        for (std::size_t v = 0; v < ctx->nvars(); ++v)
            df.add_component({static_cast<int>(v)}, pres.relations[j].derivative(v));
        big = wedge(df, big);
    }

    IndexTuple fiber;
    for (std::size_t i = m; i < ctx->nvars(); ++i) fiber.push_back(static_cast<int>(i));

    TransformWitness tw = to_pure_powers(make_denom_tuple(pres.relations));

    DiffForm out = DiffForm::zero(ctx, static_cast<int>(m));
    for (const auto& [idx, c] : big.components()) {
        // keep components carrying the full dT block
        IndexTuple base_part;
        bool has_all_fiber = true;
        {
            std::size_t fk = 0;
            for (int i : idx) {
                if (ctx->is_fiber_var(static_cast<std::size_t>(i))) {
                    if (fk >= fiber.size() || fiber[fk] != i) {
                        has_all_fiber = false;
                        break;
                    }
                    ++fk;
                } else {
                    base_part.push_back(i);
                }
            }
            if (fk != fiber.size()) has_all_fiber = false;
        }
        if (!has_all_fiber) continue;
        // c dx_idx = x_K dT ^ du_K with x_K = sign * c, the sign of sorting
        // the concatenation (fiber..., K...) into idx
        IndexTuple concat = fiber;
        concat.insert(concat.end(), base_part.begin(), base_part.end());
        auto [merged, sign] = detail::merge_tuples(concat, {});
        require(merged == idx && sign != 0, ErrorCode::Internal, "component decomposition failed");
        Poly x = sign < 0 ? -c : c;
        Poly rho = residue_with_witness(x, tw).value;
        out.add_component(base_part, rho);
    }
    return out;
}

} // namespace resym
