#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "forms.hpp"
#include "groebner.hpp"
#include "linalg.hpp"
#include "ring.hpp"

namespace resym {

/// Ordered denominator sequence (f_1, ..., f_r); length must equal the fiber
/// dimension and the generated ideal must be zero-dimensional over the fiber
/// block. Order is significant (alternation law).
struct DenomTuple {
    std::vector<Poly> denoms;

    const ContextPtr& ctx() const {
        require(!denoms.empty(), ErrorCode::BadArgument, "empty denominator tuple");
        return denoms.front().ctx();
    }
};

inline DenomTuple make_denom_tuple(std::vector<Poly> denoms) {
    require(!denoms.empty(), ErrorCode::BadArgument, "empty denominator tuple");
    const ContextPtr& ctx = denoms.front().ctx();
    for (const auto& f : denoms) require_same_context(ctx, f.ctx());
    require(denoms.size() == ctx->fiber_dim(), ErrorCode::LengthMismatch,
            "need as many denominators as fiber variables");
    return DenomTuple{std::move(denoms)};
}

/// Element of the base ring produced by a residue computation: a field
/// constant when the ring is absolute, a base-block polynomial otherwise.
struct ResidueValue {
    Poly value;

    Coeff as_constant() const { return value.constant_value(); }
};

/// Witness for the transformation law: target_i = sum_j u[i][j] * source_j,
/// with det_u the exact determinant of u. Checked at construction.
struct TransformWitness {
    std::vector<std::vector<Poly>> u;
    Poly det_u;
    std::vector<Poly> source;
    std::vector<Poly> target;
};

namespace detail {

/// Extracts the coefficient of dT_1 ^ ... ^ dT_r in a top-fiber-degree form;
/// components carrying base differentials vanish in the relative module and
/// are ignored.
inline Poly relative_top_coefficient(const DiffForm& w) {
    const auto& ctx = *w.ctx();
    const int r = static_cast<int>(ctx.fiber_dim());
    require(w.degree() == r, ErrorCode::DegreeMismatch, "form is not of top fiber degree");
    IndexTuple fiber;
    for (std::size_t i = ctx.base_block; i < ctx.nvars(); ++i) fiber.push_back(static_cast<int>(i));
    return w.component(fiber);
}

/// Monic univariate eliminant of the fiber variable `var` in the ideal:
/// the minimal polynomial over a field base, the Cayley-Hamilton
/// characteristic polynomial over a polynomial base.
inline Poly eliminant(const QuotientAlgebra& q, std::size_t var) {
    const ContextPtr& ctx = q.gb.ctx;
    if (q.rank == 0) return Poly::constant(ctx, Coeff(1)); // unit ideal, empty subscheme
    if (ctx->base_block == 0) {
        // minimal polynomial via first linear dependence among powers
        std::vector<std::vector<Coeff>> rows; // NF of var^k in std coordinates
        for (int k = 0;; ++k) {
            Poly nf = reduce(Poly::variable(ctx, var, k), q.gb);
            std::vector<Coeff> v(q.rank, Coeff(0));
            for (const auto& [e, c] : nf.terms()) v[q.monomial_index(e)] = c;
            // solve rows^T x = v
            if (k > 0) {
                Mat A(q.rank, rows.size());
                for (std::size_t j = 0; j < rows.size(); ++j)
                    for (std::size_t i = 0; i < q.rank; ++i) A.at(i, j) = rows[j][i];
                if (auto x = solve(A, v, ctx->field)) {
                    Poly p = Poly::variable(ctx, var, k);
                    for (std::size_t j = 0; j < x->size(); ++j)
                        p = p - Poly::variable(ctx, var, static_cast<int>(j)).scaled((*x)[j]);
                    return p;
                }
            }
            rows.push_back(std::move(v));
            require(k <= static_cast<int>(q.rank), ErrorCode::Internal, "minimal polynomial search overran the rank");
        }
    }
    // relative case: characteristic polynomial of the multiplication matrix
    std::size_t fi = var - ctx->base_block;
    auto coeffs = berkowitz_charpoly(q.mult_matrices[fi], ctx);
    Poly p = Poly::zero(ctx);
    const int n = static_cast<int>(coeffs.size()) - 1;
    for (int k = 0; k <= n; ++k) {
        require(coeffs[static_cast<std::size_t>(k)].is_base_only(), ErrorCode::Internal,
                "characteristic polynomial has fiber-variable coefficients");
        p = p + coeffs[static_cast<std::size_t>(k)] * Poly::variable(ctx, var, n - k);
    }
    return p;
}

} // namespace detail

/// Coefficient extraction residue: for w = g dT_1 ^ ... ^ dT_r and positive
/// alpha, the coefficient of T^(alpha - 1) in g, base coefficients passing
/// through.
inline ResidueValue residue_monomial(const DiffForm& w, const std::vector<int>& alpha) {
    const ContextPtr& ctx = w.ctx();
    const std::size_t r = ctx->fiber_dim();
    require(alpha.size() == r, ErrorCode::LengthMismatch, "alpha length must equal fiber dimension");
    for (int a : alpha) require(a >= 1, ErrorCode::BadArgument, "alpha entries must be positive");
    Poly g = detail::relative_top_coefficient(w);
    Poly out = g;
    for (std::size_t i = 0; i < r; ++i)
        out = out.coefficient_in_var(ctx->base_block + i, alpha[i] - 1);
    require(out.is_base_only(), ErrorCode::Internal, "extracted residue has fiber variables");
    return ResidueValue{out};
}

/// Expresses, for each fiber variable, a monic univariate eliminant as an
/// explicit combination of the denominators; cofactors come from Groebner
/// transition data.
inline TransformWitness to_pure_powers(const DenomTuple& d) {
    const ContextPtr& ctx = d.ctx();
    GroebnerBasis gb = buchberger(d.denoms, MonomialOrder::natural(*ctx));
    QuotientAlgebra q = quotient_algebra(gb); // throws NotZeroDimensional / NotCertifiedFree
    TransformWitness w;
    w.source = d.denoms;
    const std::size_t r = ctx->fiber_dim();
    for (std::size_t fi = 0; fi < r; ++fi) {
        std::size_t var = ctx->base_block + fi;
        Poly p = detail::eliminant(q, var);
        auto [rem, witness] = normal_form(p, gb);
        require(rem.is_zero(), ErrorCode::Internal, "eliminant is not in the denominator ideal");
        w.target.push_back(std::move(p));
        w.u.push_back(std::move(witness.cofactors));
    }
    std::vector<std::vector<Poly>> rows = w.u;
    w.det_u = poly_det(rows, ctx);
    for (std::size_t i = 0; i < r; ++i) {
        Poly acc = Poly::zero(ctx);
        for (std::size_t j = 0; j < r; ++j) acc = acc + w.u[i][j] * w.source[j];
        require(acc == w.target[i], ErrorCode::Internal, "transformation witness identity violated");
    }
    return w;
}

namespace detail {

/// Iterated univariate residue against monic eliminants p_i(T_i) with
/// base-ring coefficients; innermost step is the last fiber variable:
/// divide by p_r, read off the coefficient of T_r^(deg p_r - 1), recurse.
inline Poly iterated_monic_residue(Poly numerator, const std::vector<Poly>& eliminants, const ContextPtr& ctx) {
    const std::size_t r = ctx->fiber_dim();
    for (std::size_t k = r; k-- > 0;) {
        std::size_t var = ctx->base_block + k;
        const Poly& p = eliminants[k];
        int deg = p.degree_in(var);
        auto [quot, rem] = divmod_in_var(numerator, p, var);
        numerator = rem.coefficient_in_var(var, deg - 1);
    }
    require(numerator.is_base_only(), ErrorCode::Internal, "residue value has fiber variables");
    return numerator;
}

} // namespace detail

/// Residue of a numerator coefficient against a precomputed witness.
inline ResidueValue residue_with_witness(const Poly& g, const TransformWitness& tw) {
    const ContextPtr& ctx = g.ctx();
    Poly numerator = tw.det_u * g;
    return ResidueValue{detail::iterated_monic_residue(std::move(numerator), tw.target, ctx)};
}

/// The residue symbol Res[w; f_1, ..., f_r]: transformation law onto monic
/// univariate eliminants followed by iterated coefficient extraction.
inline ResidueValue residue_symbol(const DiffForm& w, const DenomTuple& d) {
    const ContextPtr& ctx = w.ctx();
    require_same_context(ctx, d.ctx());
    Poly g = detail::relative_top_coefficient(w);
    TransformWitness tw = to_pure_powers(d);
    return residue_with_witness(g, tw);
}

inline ResidueValue residue_symbol(const DiffForm& w, std::vector<Poly> denoms) {
    return residue_symbol(w, make_denom_tuple(std::move(denoms)));
}

/// Tate's construction for a zero-dimensional presentation C = k[T]/(f):
/// divided differences h with f_i(X) - f_i(Y) = sum_j h_ij (X_j - Y_j),
/// the Bezoutian Delta = det(h), its reduced class in C (x) C, and the
/// canonical generator lambda of Hom(C, k) solved from Delta-bar.
struct TatePresentation {
    std::vector<Poly> relations;
    ContextPtr ctx;          // k[T]
    ContextPtr ctx_xy;       // k[X, Y], doubled
    std::vector<std::vector<Poly>> h;
    Poly delta;              // det(h) in k[X, Y]
    Poly delta_bar;          // normal form of delta mod (f(X), f(Y))
    Poly jac_class;          // normal form of det(df_i/dT_j) in C
    Poly mult_image;         // m(delta_bar), reduced in C; equals jac_class
    GroebnerBasis gb;        // of (f) in k[T]
    QuotientAlgebra quotient;
    std::vector<Coeff> lambda_values; // lambda on the standard-monomial basis
};

namespace detail {

inline std::vector<Coeff> std_coordinates_abs(const Poly& nf, const QuotientAlgebra& q) {
    std::vector<Coeff> v(q.rank, Coeff(0));
    for (const auto& [e, c] : nf.terms()) v[q.monomial_index(e)] = c;
    return v;
}

} // namespace detail

inline TatePresentation tate_presentation(const std::vector<Poly>& f) {
    require(!f.empty(), ErrorCode::BadArgument, "empty relation list");
    const ContextPtr& ctx = f.front().ctx();
    require(ctx->base_block == 0, ErrorCode::BadArgument, "Tate presentations require an absolute ring");
    const std::size_t n = ctx->nvars();
    require(f.size() == n, ErrorCode::BadArgument, "need exactly one relation per variable");

    TatePresentation t;
    t.relations = f;
    t.ctx = ctx;
    t.gb = buchberger(f, MonomialOrder::natural(*ctx));
    t.quotient = quotient_algebra(t.gb);

    std::vector<std::string> xy;
    for (const auto& v : ctx->vars) xy.push_back(v + "#x");
    for (const auto& v : ctx->vars) xy.push_back(v + "#y");
    t.ctx_xy = make_context(ctx->field, xy, 0);

    auto embed = [&](const Poly& p, std::size_t offset) {
        std::vector<Poly> images(n);
        for (std::size_t i = 0; i < n; ++i) images[i] = Poly::variable(t.ctx_xy, offset + i);
        return p.substitute(images, t.ctx_xy);
    };

    // successive single-variable substitution: replace X_j by Y_j one index
    // at a time and divide exactly by X_j - Y_j
    t.h.assign(n, std::vector<Poly>(n, Poly::zero(t.ctx_xy)));
    for (std::size_t i = 0; i < n; ++i) {
        Poly current = embed(f[i], 0); // f_i(X)
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Poly> images(2 * n);
            for (std::size_t k2 = 0; k2 < 2 * n; ++k2) images[k2] = Poly::variable(t.ctx_xy, k2);
            images[j] = Poly::variable(t.ctx_xy, n + j); // X_j -> Y_j
            Poly next = current.substitute(images, t.ctx_xy);
            t.h[i][j] = exact_divide_linear(current - next, j, n + j);
            current = std::move(next);
        }
        // current is now f_i(Y)
        Poly acc = Poly::zero(t.ctx_xy);
        for (std::size_t j = 0; j < n; ++j)
            acc = acc + t.h[i][j] * (Poly::variable(t.ctx_xy, j) - Poly::variable(t.ctx_xy, n + j));
        require(acc == embed(f[i], 0) - embed(f[i], n), ErrorCode::Internal,
                "divided-difference identity violated");
    }
    // diagonal consistency: h_ij(X, X) = df_i/dX_j
    {
        std::vector<Poly> diag(2 * n);
        for (std::size_t k2 = 0; k2 < n; ++k2) {
            diag[k2] = Poly::variable(t.ctx_xy, k2);
            diag[n + k2] = Poly::variable(t.ctx_xy, k2);
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                require(t.h[i][j].substitute(diag, t.ctx_xy) == embed(f[i].derivative(j), 0),
                        ErrorCode::Internal, "divided differences disagree with partial derivatives");
    }

    t.delta = poly_det(t.h, t.ctx_xy);

    std::vector<Poly> doubled;
    for (const auto& fi : f) doubled.push_back(embed(fi, 0));
    for (const auto& fi : f) doubled.push_back(embed(fi, n));
    GroebnerBasis gb_xy = buchberger(doubled, MonomialOrder::degrevlex());
    t.delta_bar = reduce(t.delta, gb_xy);

    // multiplication image and Jacobian class
    {
        std::vector<Poly> back(2 * n);
        for (std::size_t k2 = 0; k2 < n; ++k2) {
            back[k2] = Poly::variable(ctx, k2);
            back[n + k2] = Poly::variable(ctx, k2);
        }
        t.mult_image = reduce(t.delta_bar.substitute(back, ctx), t.gb);
        std::vector<std::vector<Poly>> jac(n, std::vector<Poly>(n, Poly::zero(ctx)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) jac[i][j] = f[i].derivative(j);
        t.jac_class = reduce(poly_det(jac, ctx), t.gb);
        require(t.mult_image == t.jac_class, ErrorCode::Internal,
                "m(Delta-bar) does not reduce to the Jacobian class");
    }

    // lambda = t^{-1}(1): with Delta-bar = sum d_ab X^a Y^b over the standard
    // basis, t(phi) = sum_ab d_ab phi(b_b) b_a; solve t(lambda) = 1.
    {
        const auto& q = t.quotient;
        const std::size_t N = q.rank;
        Mat A(N, N);
        for (const auto& [e, c] : t.delta_bar.terms()) {
            Exponent ex(n, 0), ey(n, 0);
            for (std::size_t k2 = 0; k2 < n; ++k2) {
                ex[k2] = e[k2];
                ey[k2] = e[n + k2];
            }
            std::size_t a = q.monomial_index(ex);
            std::size_t b = q.monomial_index(ey);
            A.at(a, b) = ctx->field.add(A.at(a, b), c);
        }
        std::vector<Coeff> one(N, Coeff(0));
        Poly unit = reduce(Poly::constant(ctx, Coeff(1)), t.gb);
        auto onev = detail::std_coordinates_abs(unit, q);
        for (std::size_t i = 0; i < N; ++i) one[i] = onev[i];
        auto sol = solve(A, one, ctx->field);
        require(sol.has_value(), ErrorCode::Internal, "Tate system is singular");
        t.lambda_values = *sol;
    }
    return t;
}

/// lambda(c), evaluated through the solved linear functional. Agrees with
/// Res[b dT; f] for any lift b of c; the test suites assert that identity.
inline Coeff tate_lambda(const TatePresentation& t, const Poly& c) {
    require_same_context(c.ctx(), t.ctx);
    Poly nf = reduce(c, t.gb);
    auto v = detail::std_coordinates_abs(nf, t.quotient);
    Coeff acc(0);
    for (std::size_t i = 0; i < v.size(); ++i)
        acc = t.ctx->field.add(acc, t.ctx->field.mul(v[i], t.lambda_values[i]));
    return acc;
}

/// tr_{C/A} via Tate: lambda(m(Delta-bar) * c).
inline Coeff trace_via_tate(const TatePresentation& t, const Poly& c) {
    return tate_lambda(t, t.mult_image * c);
}

/// Gram matrix of the residue pairing (b_i, b_j) -> Res[b_i b_j dT; f] over
/// the standard-monomial basis, with its exact determinant.
struct GramMatrix {
    std::vector<Exponent> basis;
    Mat entries;
    Coeff det;
};

inline GramMatrix residue_pairing_gram(const DenomTuple& d) {
    const ContextPtr& ctx = d.ctx();
    require(ctx->base_block == 0, ErrorCode::BadArgument, "residue pairing requires an absolute ring");
    GroebnerBasis gb = buchberger(d.denoms, MonomialOrder::natural(*ctx));
    QuotientAlgebra q = quotient_algebra(gb);
    TransformWitness tw = to_pure_powers(d);

    GramMatrix g;
    g.basis = q.std_monomials;
    g.entries = Mat(q.rank, q.rank);
    for (std::size_t i = 0; i < q.rank; ++i)
        for (std::size_t j = i; j < q.rank; ++j) {
            Poly prod = Poly::monomial(ctx, q.std_monomials[i], Coeff(1)) *
                        Poly::monomial(ctx, q.std_monomials[j], Coeff(1));
            g.entries.at(i, j) = residue_with_witness(prod, tw).as_constant();
            g.entries.at(j, i) = g.entries.at(i, j);
        }
    g.det = determinant(g.entries, ctx->field);
    return g;
}

} // namespace resym
