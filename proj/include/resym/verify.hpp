#pragma once

#include <cstdint>
#include <chrono>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"
#include "finite_trace.hpp"
#include "format.hpp"
#include "forms.hpp"
#include "fractions.hpp"
#include "groebner.hpp"
#include "projective.hpp"
#include "residue.hpp"
#include "ring.hpp"

namespace resym {

/// Bounds for randomized instance generation; generation is deterministic in
/// the seed (and trial index), independent of platform.
struct InstanceSpec {
    int fiber_n = 2;      // <= 3
    int base_m = 1;       // <= 2
    int degree_bound = 3; // 2 <= D <= 4
    CoeffField field = CoeffField::rationals();
    std::uint64_t seed = 0;
};

struct TrialFailure {
    std::uint64_t trial = 0;
    std::string instance;
    std::string lhs;
    std::string rhs;
};

struct VerifyReport {
    std::string rule;
    std::uint64_t attempted = 0;
    std::uint64_t passed = 0;
    std::uint64_t failed = 0;
    std::uint64_t skipped = 0;
    std::vector<TrialFailure> failures;
    double wall_ms = 0.0;
};

/// splitmix64; stable across platforms, one stream per (seed, rule, trial).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [lo, hi], inclusive.
    long long range(long long lo, long long hi) {
        return lo + static_cast<long long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool chance(int percent) { return range(0, 99) < percent; }

    Coeff coeff(const CoeffField& f, bool nonzero = false) {
        for (;;) {
            Coeff c;
            if (f.is_rationals()) {
                long long num = range(-4, 4);
                long long den = range(1, 3);
                c = Coeff(Integer(num), Integer(den));
            } else {
                c = f.normalize(Coeff(Integer(range(0, static_cast<long long>(f.modulus()) - 1))));
            }
            if (!nonzero || !c.is_zero()) return c;
        }
    }

private:
    std::uint64_t state_;
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt, std::uint64_t trial) {
    std::uint64_t h = seed ^ (salt * 0x9e3779b97f4a7c15ull);
    h ^= trial + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

/// FNV-1a; rule salts must not depend on the standard library's string hash.
inline std::uint64_t stable_hash(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace gen {

/// Random sparse polynomial of total degree <= maxdeg with <= nterms terms.
inline Poly sparse_poly(Rng& rng, const ContextPtr& ctx, int maxdeg, int nterms, bool nonzero = false) {
    for (;;) {
        Poly p = Poly::zero(ctx);
        for (int t = 0; t < nterms; ++t) {
            Exponent e(ctx->nvars(), 0);
            int budget = static_cast<int>(rng.range(0, maxdeg));
            for (std::size_t i = 0; i < ctx->nvars() && budget > 0; ++i) {
                int d = static_cast<int>(rng.range(0, budget));
                e[i] = d;
                budget -= d;
            }
            p.add_term(std::move(e), rng.coeff(ctx->field));
        }
        if (!nonzero || !p.is_zero()) return p;
    }
}

/// Shape-constrained zero-dimensional complete intersection:
/// f_i = T_i^(d_i) + g_i with 2 <= d_i <= D and deg g_i < d_i. The leading
/// forms are pure powers, so the certificate always succeeds; it is still
/// re-checked. Over a base block, g_i may involve base variables and is
/// retried until the block-order basis certifies freeness.
inline DenomTuple zero_dim_ci(Rng& rng, const ContextPtr& ctx, int degree_bound) {
    const std::size_t r = ctx->fiber_dim();
    for (int attempt = 0;; ++attempt) {
        std::vector<Poly> f;
        for (std::size_t i = 0; i < r; ++i) {
            std::size_t v = ctx->base_block + i;
            int d = static_cast<int>(rng.range(2, degree_bound));
            Poly head = Poly::variable(ctx, v, d);
            // tail of fiber degree < d; couple fiber variables sparingly
            Poly tail = Poly::zero(ctx);
            int terms = static_cast<int>(rng.range(1, 2));
            for (int t = 0; t < terms; ++t) {
                Exponent e(ctx->nvars(), 0);
                int fdeg = static_cast<int>(rng.range(0, d - 1));
                // distribute fiber degree, biased toward the own variable;
                // repeated certification failures force the separated shape
                while (fdeg-- > 0) {
                    std::size_t pick = (attempt >= 8 || !rng.chance(30))
                                           ? i
                                           : static_cast<std::size_t>(rng.range(0, static_cast<long long>(r) - 1));
                    e[ctx->base_block + pick] += 1;
                }
                for (std::size_t b = 0; b < ctx->base_block; ++b) e[b] = static_cast<int>(rng.range(0, 1));
                tail.add_term(std::move(e), rng.coeff(ctx->field));
            }
            f.push_back(head + tail);
        }
        try {
            GroebnerBasis gb = buchberger(f, MonomialOrder::natural(*ctx));
            quotient_algebra(gb); // re-certification, throws when not certified
            return DenomTuple{std::move(f)};
        } catch (const Error&) {
            require(attempt < 64, ErrorCode::Internal, "instance generation failed to certify");
        }
    }
}

} // namespace gen

inline DenomTuple gen_zero_dim_ci(const InstanceSpec& spec, const ContextPtr& ctx, std::uint64_t trial = 0) {
    Rng rng(mix_seed(spec.seed, 0x67656eull, trial));
    return gen::zero_dim_ci(rng, ctx, spec.degree_bound);
}

namespace detail_verify {

inline ContextPtr abs_ctx(const InstanceSpec& spec, int nvars) {
    static const char* names[] = {"x", "y", "z", "w"};
    std::vector<std::string> vars;
    for (int i = 0; i < nvars; ++i) vars.emplace_back(names[i]);
    return make_context(spec.field, std::move(vars), 0);
}

inline ContextPtr rel_ctx(const InstanceSpec& spec, int base_m, int fiber_n) {
    static const char* base_names[] = {"u", "v"};
    static const char* fiber_names[] = {"T", "S", "W"};
    std::vector<std::string> vars;
    for (int i = 0; i < base_m; ++i) vars.emplace_back(base_names[i]);
    for (int i = 0; i < fiber_n; ++i) vars.emplace_back(fiber_names[i]);
    return make_context(spec.field, std::move(vars), static_cast<std::size_t>(base_m));
}

inline DiffForm top_fiber_form(const Poly& g) {
    const auto& ctx = *g.ctx();
    IndexTuple fiber;
    for (std::size_t i = ctx.base_block; i < ctx.nvars(); ++i) fiber.push_back(static_cast<int>(i));
    return DiffForm::from_component(g, fiber);
}

inline std::string tuple_str(const std::vector<Poly>& fs) {
    std::string s = "[";
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (i) s += ", ";
        s += poly_to_string(fs[i]);
    }
    return s + "]";
}

inline int permutation_sign(const std::vector<std::size_t>& perm) {
    int sign = 1;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) sign = -sign;
    return sign;
}

using TrialFn = std::function<void(Rng&, std::uint64_t, VerifyReport&)>;

inline void record(VerifyReport& rep, std::uint64_t trial, bool ok, const std::string& instance,
                   const std::string& lhs, const std::string& rhs) {
    ++rep.attempted;
    if (ok) {
        ++rep.passed;
    } else {
        ++rep.failed;
        rep.failures.push_back({trial, instance, lhs, rhs});
    }
}

// ---- individual rules -------------------------------------------------

inline void trial_r1(const InstanceSpec& spec, Rng& rng, std::uint64_t trial, VerifyReport& rep) {
    int n = std::min(spec.fiber_n, 2);
    ContextPtr ctx = abs_ctx(spec, n);
    DenomTuple t = gen::zero_dim_ci(rng, ctx, spec.degree_bound);
    Poly g = gen::sparse_poly(rng, ctx, 2, 3);
    DiffForm w = top_fiber_form(g);

    // polynomial-entry transformation matrix; retry until (s) certifies
    for (int attempt = 0; attempt < 16; ++attempt) {
        std::vector<std::vector<Poly>> u(static_cast<std::size_t>(n), std::vector<Poly>(static_cast<std::size_t>(n)));
        std::vector<Poly> s(static_cast<std::size_t>(n), Poly::zero(ctx));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Poly entry = (i == j) ? Poly::constant(ctx, rng.coeff(ctx->field, true))
                                      : gen::sparse_poly(rng, ctx, 1, 1);
                u[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = entry;
                s[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i)] + entry * t.denoms[static_cast<std::size_t>(j)];
            }
        try {
            DenomTuple st = make_denom_tuple(s);
            to_pure_powers(st); // certifies zero-dimensionality of (s)
            Poly det = poly_det(u, ctx);
            ResidueValue lhs = residue_symbol(w, t);
            ResidueValue rhs = residue_symbol(w.scaled_by(det), st);
            record(rep, trial, lhs.value == rhs.value,
                   "t=" + tuple_str(t.denoms) + " s=" + tuple_str(s) + " g=" + poly_to_string(g),
                   poly_to_string(lhs.value), poly_to_string(rhs.value));
            // alternation corollary under a random permutation
            std::vector<std::size_t> perm(static_cast<std::size_t>(n));
            std::iota(perm.begin(), perm.end(), 0u);
            for (std::size_t i = perm.size(); i > 1; --i)
                std::swap(perm[i - 1], perm[static_cast<std::size_t>(rng.range(0, static_cast<long long>(i) - 1))]);
            std::vector<Poly> permuted;
            for (std::size_t i = 0; i < perm.size(); ++i) permuted.push_back(t.denoms[perm[i]]);
            ResidueValue lp = residue_symbol(w, make_denom_tuple(permuted));
            Poly expected = permutation_sign(perm) > 0 ? lhs.value : -lhs.value;
            record(rep, trial, lp.value == expected, "alternation t=" + tuple_str(t.denoms),
                   poly_to_string(lp.value), poly_to_string(expected));
            return;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NotZeroDimensional) throw;
        }
    }
    ++rep.attempted;
    ++rep.skipped;
}

inline void trial_r2(const InstanceSpec& spec, Rng& rng, std::uint64_t trial, VerifyReport& rep) {
    // split cover X' = k disjoint copies of X; rank function constant = k
    int n = std::min(spec.fiber_n, 2);
    ContextPtr ctx = abs_ctx(spec, n);
    DenomTuple t = gen::zero_dim_ci(rng, ctx, spec.degree_bound);
    Poly g = gen::sparse_poly(rng, ctx, 2, 3);
    DiffForm w = top_fiber_form(g);
    int k = static_cast<int>(rng.range(2, 3));
    ResidueValue scaled = residue_symbol(w.scaled(Coeff(k)), t);
    Poly acc = Poly::zero(ctx);
    for (int i = 0; i < k; ++i) acc = acc + residue_symbol(w, t).value;
    record(rep, trial, scaled.value == acc, "k=" + std::to_string(k) + " t=" + tuple_str(t.denoms),
           poly_to_string(scaled.value), poly_to_string(acc));
}

inline void trial_r3(const InstanceSpec& spec, Rng& rng, std::uint64_t trial, VerifyReport& rep) {
    // graph immersion: ambient k[x_1..x_{d+r}], X cut by s_j = x_j - h_j(rest)
    int d = 1;
    int r = std::min(spec.fiber_n, 2);
    ContextPtr P = abs_ctx(spec, d + r);
    std::vector<std::string> rest_names(P->vars.begin() + d, P->vars.end());
    ContextPtr X = make_context(spec.field, rest_names, 0);

    std::vector<Poly> images(P->nvars()); // the restriction map i*
    std::vector<Poly> s;
    for (int j = 0; j < d; ++j) {
        Poly h = gen::sparse_poly(rng, X, 2, 2);
        s.push_back(Poly::variable(P, static_cast<std::size_t>(j)) - transport(h, P));
        images[static_cast<std::size_t>(j)] = h;
    }
    DenomTuple tX = gen::zero_dim_ci(rng, X, spec.degree_bound);
    std::vector<Poly> denomsP = s;
    for (const auto& f : tX.denoms) denomsP.push_back(transport(f, P));

    // nu: random r-form on the ambient ring (shuffle, take an r-subset)
    DiffForm nu = DiffForm::zero(P, r);
    for (int c = 0; c < 2; ++c) {
        std::vector<int> all(P->nvars());
        std::iota(all.begin(), all.end(), 0);
        for (std::size_t i = all.size(); i > 1; --i)
            std::swap(all[i - 1], all[static_cast<std::size_t>(rng.range(0, static_cast<long long>(i) - 1))]);
        IndexTuple idx(all.begin(), all.begin() + r);
        std::sort(idx.begin(), idx.end());
        nu.add_component(idx, gen::sparse_poly(rng, P, 2, 2));
    }

    DiffForm ds = DiffForm::from_poly(Poly::constant(P, Coeff(1)));
    for (const auto& sj : s) {
        DiffForm d1(P, 1);
        for (std::size_t v = 0; v < P->nvars(); ++v) d1.add_component({static_cast<int>(v)}, sj.derivative(v));
        ds = wedge(ds, d1);
    }
    ResidueValue lhs = residue_symbol(wedge(ds, nu), make_denom_tuple(denomsP));
    ResidueValue rhs = residue_symbol(pullback(nu, images, X), tX);
    record(rep, trial, lhs.value == transport(rhs.value, P),
           "s=" + tuple_str(s) + " t=" + tuple_str(tX.denoms), poly_to_string(lhs.value),
           poly_to_string(rhs.value));
}

inline void trial_r4(const InstanceSpec& spec, Rng& rng, std::uint64_t trial, VerifyReport& rep) {
    // tower: base dimension 1 (u), fiber dimension e <= 2
    int e = std::min(spec.fiber_n, 2);
    ContextPtr rel = rel_ctx(spec, 1, e);
    ContextPtr base = make_context(spec.field, {rel->vars[0]}, 0);
    ContextPtr abs = make_context(spec.field, rel->vars, 0);

    DenomTuple v = gen::zero_dim_ci(rng, rel, spec.degree_bound);
    int sdeg = static_cast<int>(rng.range(1, spec.degree_bound));
    Poly s_base = Poly::variable(base, 0, sdeg) + gen::sparse_poly(rng, base, sdeg - 1, 2);

    Poly gmu = gen::sparse_poly(rng, rel, 2, 3);
    DiffForm mu = top_fiber_form(gmu);
    Poly hnu = gen::sparse_poly(rng, base, 2, 2);
    DiffForm nu = DiffForm::from_component(hnu, {0});

    // iterated side
    Poly inner = residue_symbol(mu, v).value; // base-only polynomial in rel
    DiffForm outer_form = DiffForm::from_component(transport(inner, base) * hnu, {0});
    ResidueValue lhs = residue_symbol(outer_form, make_denom_tuple({s_base}));

    // wedge side: mu ^ f* nu with denominators (v..., s)
    DiffForm wedge_form = transitivity_wedge(transport(nu, rel), mu);
    std::vector<Poly> denoms;
    for (const auto& f : v.denoms) denoms.push_back(transport(f, abs));
    denoms.push_back(transport(s_base, abs));
    ResidueValue rhs = residue_symbol(transport(wedge_form, abs), make_denom_tuple(denoms));

    record(rep, trial, transport(lhs.value, abs) == rhs.value,
           "v=" + tuple_str(v.denoms) + " s=" + poly_to_string(s_base) + " mu=" + poly_to_string(gmu) +
               " nu=" + poly_to_string(hnu),
           poly_to_string(lhs.value), poly_to_string(rhs.value));
}

inline void trial_r5(const InstanceSpec& spec, Rng& rng, std::uint64_t trial, VerifyReport& rep) {
    int n = std::min(spec.fiber_n, 2);
    ContextPtr rel = rel_ctx(spec, 1, n);
    DenomTuple f = gen::zero_dim_ci(rng, rel, spec.degree_bound);
    Poly g = gen::sparse_poly(rng, rel, 2, 3);
    DiffForm w = top_fiber_form(g);
    Poly rho = residue_symbol(w, f).value;

    std::vector<std::string> fiber_names(rel->vars.begin() + 1, rel->vars.end());
    ContextPtr abs = make_context(spec.field, fiber_names, 0);
    for (long long a : {0ll, 1ll, -1ll, 2ll}) {
        std::vector<Poly> images(rel->nvars());
        images[0] = Poly::constant(abs, Coeff(a));
        std::vector<Poly> fs;
        for (const auto& fi : f.denoms) fs.push_back(fi.substitute(images, abs));
        try {
            DenomTuple fa = make_denom_tuple(fs);
            ResidueValue specialized = residue_symbol(top_fiber_form(g.substitute(images, abs)), fa);
            Poly expected = rho.substitute(images, abs);
            record(rep, trial, specialized.value == expected,
                   "f=" + tuple_str(f.denoms) + " a=" + std::to_string(a), poly_to_string(specialized.value),
                   poly_to_string(expected));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NotZeroDimensional && e.code() != ErrorCode::NotCertifiedFree) throw;
            ++rep.attempted;
            ++rep.skipped;
        }
    }
}

inline void trial_r6(const InstanceSpec& spec, Rng& rng, std::uint64_t trial, VerifyReport& rep) {
    int n = std::min(spec.fiber_n, 2);
    ContextPtr ctx = abs_ctx(spec, n);
    DenomTuple f = gen::zero_dim_ci(rng, ctx, spec.degree_bound);
    Poly phi = gen::sparse_poly(rng, ctx, 2, 3);
    DiffForm df = DiffForm::from_poly(phi);
    for (const auto& fi : f.denoms) df = wedge(df, exterior_derivative(DiffForm::from_poly(fi)));
    ResidueValue lhs = residue_symbol(df, f);
    QuotientAlgebra q = quotient_algebra(buchberger(f.denoms, MonomialOrder::natural(*ctx)));
    Poly rhs = canonical_trace(q, phi);
    record(rep, trial, lhs.value == rhs, "f=" + tuple_str(f.denoms) + " phi=" + poly_to_string(phi),
           poly_to_string(lhs.value), poly_to_string(rhs));
}

inline void trial_r7(const InstanceSpec& spec, Rng&, std::uint64_t trial, VerifyReport& rep) {
    // exhaustive over exponent tuples with entries <= 3 for this fiber count
    int n = std::min(spec.fiber_n, 3);
    ContextPtr ctx = abs_ctx(spec, n);
    std::vector<int> alpha(static_cast<std::size_t>(n), 1);
    std::function<void(int)> walk = [&](int pos) {
        if (pos == n) {
            std::vector<Poly> denoms;
            for (int i = 0; i < n; ++i)
                denoms.push_back(Poly::variable(ctx, static_cast<std::size_t>(i), alpha[static_cast<std::size_t>(i)]));
            Poly one = Poly::constant(ctx, Coeff(1));
            ResidueValue res = residue_symbol(top_fiber_form(one), make_denom_tuple(denoms));
            bool all_one = std::all_of(alpha.begin(), alpha.end(), [](int a) { return a == 1; });
            Poly expected = all_one ? one : Poly::zero(ctx);
            // the coefficient-extraction route must agree
            ResidueValue direct = residue_monomial(top_fiber_form(one), alpha);
            bool ok = res.value == expected && direct.value == expected;
            record(rep, trial, ok, "alpha=" + tuple_str(denoms), poly_to_string(res.value),
                   poly_to_string(expected));
            return;
        }
        for (int a = 1; a <= 3; ++a) {
            alpha[static_cast<std::size_t>(pos)] = a;
            walk(pos + 1);
        }
    };
    walk(0);
}

inline void trial_r8(const InstanceSpec& spec, Rng& rng, std::uint64_t trial, VerifyReport& rep) {
    int n = std::min(spec.fiber_n, 2);
    ContextPtr ctx = abs_ctx(spec, n);
    DenomTuple f = gen::zero_dim_ci(rng, ctx, spec.degree_bound);
    Poly numer = Poly::zero(ctx);
    for (const auto& fi : f.denoms) numer = numer + gen::sparse_poly(rng, ctx, 2, 2) * fi;
    ResidueValue res = residue_symbol(top_fiber_form(numer), f);
    record(rep, trial, res.value.is_zero(), "f=" + tuple_str(f.denoms) + " numer=" + poly_to_string(numer),
           poly_to_string(res.value), "0");
    Poly g = gen::sparse_poly(rng, ctx, 2, 2);
    ResidueValue res2 = residue_symbol(top_fiber_form(numer * g), f);
    record(rep, trial, res2.value.is_zero(), "multiplied by g=" + poly_to_string(g),
           poly_to_string(res2.value), "0");
}

inline void trial_r9(const InstanceSpec& spec, Rng& rng, std::uint64_t trial, VerifyReport& rep) {
    int n = std::min(spec.fiber_n, 2);
    ContextPtr ctx = abs_ctx(spec, n);
    DenomTuple t = gen::zero_dim_ci(rng, ctx, spec.degree_bound);
    std::vector<int> beta;
    for (int i = 0; i < n; ++i) beta.push_back(static_cast<int>(rng.range(1, 3)));

    DiffForm eta = DiffForm::zero(ctx, n - 1);
    if (n == 1) {
        eta = DiffForm::from_poly(gen::sparse_poly(rng, ctx, 2, 2));
    } else {
        for (int i = 0; i < n; ++i) eta.add_component({i}, gen::sparse_poly(rng, ctx, 2, 2));
    }
    GenFraction fr = make_fraction(eta, t, beta);

    // residue of the exterior-derivative image vanishes
    Poly total = Poly::zero(ctx);
    for (const auto& piece : d_fraction(fr)) total = total + residue_of_fraction(piece).value;
    record(rep, trial, total.is_zero(), "t=" + tuple_str(t.denoms), poly_to_string(total), "0");

    // the (R9) identity itself
    Poly lhs = residue_of_fraction(GenFraction{exterior_derivative(eta), t, beta}).value;
    Poly rhs = Poly::zero(ctx);
    for (std::size_t j = 0; j < t.denoms.size(); ++j) {
        DiffForm dt(ctx, 1);
        for (std::size_t v = 0; v < ctx->nvars(); ++v) dt.add_component({static_cast<int>(v)}, t.denoms[j].derivative(v));
        std::vector<int> shifted = beta;
        shifted[j] += 1;
        rhs = rhs + Coeff(beta[j]) * residue_of_fraction(GenFraction{wedge(dt, eta), t, shifted}).value;
    }
    record(rep, trial, lhs == rhs, "R9 identity t=" + tuple_str(t.denoms), poly_to_string(lhs),
           poly_to_string(rhs));

    // fraction calculus invariants: rescaling and equality of classes
    {
        Poly g = gen::sparse_poly(rng, ctx, 2, 2);
        GenFraction top = make_fraction(top_fiber_form(g), t, beta);
        std::vector<int> gamma = beta;
        for (auto& ge : gamma) ge += static_cast<int>(rng.range(0, 1));
        GenFraction rescaled = fraction_rescale(top, gamma);
        bool same_res = residue_of_fraction(top).value == residue_of_fraction(rescaled).value;
        bool equal_class = fraction_equal(top, rescaled);
        Poly in_ideal_numer = top.powered_denoms()[0] * g;
        GenFraction zero{top_fiber_form(in_ideal_numer), t, beta};
        bool zero_ok = fraction_is_zero(zero) && residue_of_fraction(zero).value.is_zero();
        record(rep, trial, same_res && equal_class && zero_ok, "fraction calc t=" + tuple_str(t.denoms),
               same_res ? "ok" : "rescale residue drifted", zero_ok ? "ok" : "zero test failed");
    }
}

inline void trial_r10(const InstanceSpec& spec, Rng& rng, std::uint64_t trial, VerifyReport& rep) {
    int d = std::min(spec.fiber_n, 2);
    ContextPtr rel = rel_ctx(spec, 1, d);
    ContextPtr base = make_context(spec.field, {rel->vars[0]}, 0);
    ContextPtr abs = make_context(spec.field, rel->vars, 0);

    DenomTuple f = gen::zero_dim_ci(rng, rel, spec.degree_bound);
    FinitePresentation pres = make_finite_presentation(f.denoms);

    int tdeg = static_cast<int>(rng.range(1, spec.degree_bound));
    Poly t_base = Poly::variable(base, 0, tdeg) + gen::sparse_poly(rng, base, tdeg - 1, 2);

    DiffForm eta(rel, 1);
    for (std::size_t v = 0; v < rel->nvars(); ++v) eta.add_component({static_cast<int>(v)}, gen::sparse_poly(rng, rel, 2, 2));

    // trace side
    DiffForm traced = klt_trace(pres, eta);
    Poly traced_coeff = transport(traced.component({0}), base);
    ResidueValue rhs = residue_symbol(DiffForm::from_component(traced_coeff, {0}), make_denom_tuple({t_base}));

    // restriction side on the ambient polynomial ring
    DiffForm big = transport(eta, abs);
    for (std::size_t j = f.denoms.size(); j-- > 0;)
        big = wedge(exterior_derivative(DiffForm::from_poly(transport(f.denoms[j], abs))), big);
    std::vector<Poly> denoms;
    for (const auto& fi : f.denoms) denoms.push_back(transport(fi, abs));
    denoms.push_back(transport(t_base, abs));
    ResidueValue lhs = residue_symbol(big, make_denom_tuple(denoms));

    record(rep, trial, lhs.value == transport(rhs.value, abs),
           "f=" + tuple_str(f.denoms) + " t=" + poly_to_string(t_base), poly_to_string(lhs.value),
           poly_to_string(rhs.value));

    // trace formula: klt(s . h*nu) = tr(s) nu
    Poly s = gen::sparse_poly(rng, rel, 2, 3);
    Poly nu_coeff = gen::sparse_poly(rng, base, 2, 2);
    DiffForm h_nu = DiffForm::from_component(transport(nu_coeff, rel), {0});
    DiffForm lhs_form = klt_trace(pres, h_nu.scaled_by(s));
    Poly expected = trace_function(pres, s) * transport(nu_coeff, rel);
    record(rep, trial, lhs_form.component({0}) == expected, "trace formula s=" + poly_to_string(s),
           form_to_string(lhs_form), poly_to_string(expected));
}

inline void trial_jacobian(const InstanceSpec& spec, Rng& rng, std::uint64_t trial, VerifyReport& rep) {
    int n = std::min(spec.fiber_n, 2);
    ContextPtr ctx = abs_ctx(spec, n);
    DenomTuple f = gen::zero_dim_ci(rng, ctx, spec.degree_bound);
    std::vector<std::vector<Poly>> jac(static_cast<std::size_t>(n), std::vector<Poly>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                f.denoms[static_cast<std::size_t>(i)].derivative(static_cast<std::size_t>(j));
    ResidueValue res = residue_symbol(top_fiber_form(poly_det(jac, ctx)), f);
    QuotientAlgebra q = quotient_algebra(buchberger(f.denoms, MonomialOrder::natural(*ctx)));
    Poly expected = Poly::constant(ctx, Coeff(static_cast<long long>(q.rank)));
    record(rep, trial, res.value == expected, "f=" + tuple_str(f.denoms), poly_to_string(res.value),
           poly_to_string(expected));
}

inline void trial_tate(const InstanceSpec& spec, Rng& rng, std::uint64_t trial, VerifyReport& rep) {
    int n = std::min(spec.fiber_n, 2);
    ContextPtr ctx = abs_ctx(spec, n);
    DenomTuple f = gen::zero_dim_ci(rng, ctx, spec.degree_bound);
    TatePresentation pres = tate_presentation(f.denoms); // checks m(Delta-bar) = jac internally
    QuotientAlgebra q = quotient_algebra(buchberger(f.denoms, MonomialOrder::natural(*ctx)));

    Poly c = gen::sparse_poly(rng, ctx, 2, 3);
    Coeff tr_tate = trace_via_tate(pres, c);
    Poly tr_canon = canonical_trace(q, c);
    record(rep, trial, Poly::constant(ctx, tr_tate) == tr_canon, "f=" + tuple_str(f.denoms),
           coeff_to_string(tr_tate), poly_to_string(tr_canon));

    // lambda equals the residue formula, independent of the lift
    Poly lift = reduce(c, pres.gb);
    for (const auto& fi : f.denoms) lift = lift + gen::sparse_poly(rng, ctx, 1, 1) * fi;
    Coeff lam = tate_lambda(pres, c);
    ResidueValue res = residue_symbol(top_fiber_form(lift), f);
    record(rep, trial, Poly::constant(ctx, lam) == res.value, "lambda lift f=" + tuple_str(f.denoms),
           coeff_to_string(lam), poly_to_string(res.value));
}

inline void trial_pairing(const InstanceSpec& spec, Rng& rng, std::uint64_t trial, VerifyReport& rep) {
    int n = std::min(spec.fiber_n, 2);
    ContextPtr ctx = abs_ctx(spec, n);
    DenomTuple f = gen::zero_dim_ci(rng, ctx, spec.degree_bound);
    GramMatrix g = residue_pairing_gram(f);
    record(rep, trial, !g.det.is_zero(), "f=" + tuple_str(f.denoms), "det=" + coeff_to_string(g.det),
           "nonzero");
}

inline void trial_sum(const InstanceSpec& spec, Rng& rng, std::uint64_t trial, VerifyReport& rep) {
    // disjoint-support additivity with a grid of split points
    int n = std::min(spec.fiber_n, 2);
    ContextPtr ctx = abs_ctx(spec, n);
    const CoeffField& F = ctx->field;
    std::vector<std::vector<Coeff>> roots(static_cast<std::size_t>(n));
    std::vector<Poly> f;
    for (int i = 0; i < n; ++i) {
        int k = static_cast<int>(rng.range(2, 3));
        std::vector<Coeff>& rs = roots[static_cast<std::size_t>(i)];
        while (static_cast<int>(rs.size()) < k) {
            Coeff c = F.is_rationals() ? Coeff(Integer(rng.range(-3, 3)))
                                       : F.normalize(Coeff(Integer(rng.range(0, static_cast<long long>(F.modulus()) - 1))));
            if (std::find(rs.begin(), rs.end(), c) == rs.end()) rs.push_back(c);
        }
        Poly prod = Poly::constant(ctx, Coeff(1));
        for (const auto& a : rs)
            prod = prod * (Poly::variable(ctx, static_cast<std::size_t>(i)) - Poly::constant(ctx, a));
        f.push_back(prod);
    }
    Poly g = gen::sparse_poly(rng, ctx, 2, 3);
    ResidueValue total = residue_symbol(top_fiber_form(g), make_denom_tuple(f));

    // sum of local residues over the grid of simple points
    Coeff acc(0);
    std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
    std::function<void(int)> walk = [&](int pos) {
        if (pos == n) {
            std::vector<Poly> point(static_cast<std::size_t>(n));
            Coeff denom(1);
            for (int i = 0; i < n; ++i) {
                const Coeff& a = roots[static_cast<std::size_t>(i)][pick[static_cast<std::size_t>(i)]];
                point[static_cast<std::size_t>(i)] = Poly::constant(ctx, a);
                Poly deriv = f[static_cast<std::size_t>(i)].derivative(static_cast<std::size_t>(i));
                denom = F.mul(denom, deriv.substitute(point, ctx).constant_value());
            }
            Coeff val = g.substitute(point, ctx).constant_value();
            acc = F.add(acc, F.div(val, denom));
            return;
        }
        for (std::size_t j = 0; j < roots[static_cast<std::size_t>(pos)].size(); ++j) {
            pick[static_cast<std::size_t>(pos)] = j;
            walk(pos + 1);
        }
    };
    walk(0);
    record(rep, trial, total.value == Poly::constant(ctx, acc), "f=" + tuple_str(f) + " g=" + poly_to_string(g),
           poly_to_string(total.value), coeff_to_string(acc));
}

inline void trial_cech(const InstanceSpec& spec, Rng& rng, std::uint64_t trial, VerifyReport& rep) {
    const CoeffField& F = spec.field;
    int r = static_cast<int>(rng.range(1, 2));
    ContextPtr ctx = abs_ctx(spec, r);

    std::vector<int> alpha;
    for (int i = 0; i < r; ++i) alpha.push_back(static_cast<int>(rng.range(1, 3)));
    CechCochain cls = fraction_to_cech_class(F, r, alpha);
    Coeff integral = pn_integral(cls);

    std::vector<Poly> denoms;
    for (int i = 0; i < r; ++i) denoms.push_back(Poly::variable(ctx, static_cast<std::size_t>(i)));
    GenFraction fr = make_fraction(top_fiber_form(Poly::constant(ctx, Coeff(1))), make_denom_tuple(denoms), alpha);
    Coeff affine = residue_of_fraction(fr).value.constant_value();
    record(rep, trial, integral == affine, "alpha class", coeff_to_string(integral), coeff_to_string(affine));

    bool all_one = std::all_of(alpha.begin(), alpha.end(), [](int a) { return a == 1; });
    auto [is_zero, witness] = class_is_zero(cls);
    record(rep, trial, is_zero == !all_one, "coboundary decision", is_zero ? "zero" : "nonzero",
           all_one ? "nonzero" : "zero");

    int d = static_cast<int>(rng.range(-4, 4));
    std::size_t h0 = cohomology_dim(r, d, 0);
    std::size_t hr = cohomology_dim(r, d, r);
    std::size_t expected_h0 = 0, expected_hr = 0;
    if (d >= 0) expected_h0 = detail::pattern_count(r, CechSubset{}, d);
    if (d <= -r - 1) {
        CechSubset full;
        for (int i = 0; i <= r; ++i) full.push_back(i);
        expected_hr = detail::pattern_count(r, full, d);
    }
    record(rep, trial, h0 == expected_h0 && hr == expected_hr, "dims d=" + std::to_string(d),
           std::to_string(h0) + "," + std::to_string(hr),
           std::to_string(expected_h0) + "," + std::to_string(expected_hr));

    // random low-level cochain: d after d vanishes; integral unchanged by d x
    if (r >= 2) {
        CechCochain c = make_cochain(F, r, -r - 1, 0);
        for (int i = 0; i <= r; ++i) {
            std::vector<int> e(static_cast<std::size_t>(r) + 1, 0);
            e[static_cast<std::size_t>(i)] = -r - 1 - 2;
            e[static_cast<std::size_t>((i + 1) % (r + 1))] = 2;
            c.add_term({i}, e, rng.coeff(F));
        }
        CechCochain dc = coboundary(c);
        record(rep, trial, coboundary(dc).is_zero(), "d after d", "", "0");
    }
    {
        CechCochain x = make_cochain(F, r, -r - 1, r - 1);
        CechSubset facet;
        for (int i = 0; i < r; ++i) facet.push_back(i);
        std::vector<int> e(static_cast<std::size_t>(r) + 1, 0);
        e[0] = -r - 1 - 1;
        e[static_cast<std::size_t>(r)] = 1;
        x.add_term(facet, e, rng.coeff(F));
        CechCochain shifted = cls;
        for (const auto& [s, lp] : coboundary(x).entries)
            for (const auto& [ee, cc] : lp) shifted.add_term(s, ee, cc);
        record(rep, trial, pn_integral(shifted) == integral, "integral mod coboundaries",
               coeff_to_string(pn_integral(shifted)), coeff_to_string(integral));
    }
}

} // namespace detail_verify

/// Cross-oracle agreement on an (R6)-shaped instance: (a) transformation law
/// + coefficient extraction, (b) Tate-lambda expansion, (c) multiplication-
/// matrix trace.
inline bool cross_oracle_residue(const DenomTuple& f, const Poly& phi) {
    const ContextPtr& ctx = f.ctx();
    std::vector<std::vector<Poly>> jac(f.denoms.size(), std::vector<Poly>(f.denoms.size()));
    for (std::size_t i = 0; i < f.denoms.size(); ++i)
        for (std::size_t j = 0; j < f.denoms.size(); ++j) jac[i][j] = f.denoms[i].derivative(j);
    Poly numer = phi * poly_det(jac, ctx);

    ResidueValue path_a = residue_symbol(detail_verify::top_fiber_form(numer), f);
    TatePresentation pres = tate_presentation(f.denoms);
    Coeff path_b = tate_lambda(pres, numer);
    QuotientAlgebra q = quotient_algebra(buchberger(f.denoms, MonomialOrder::natural(*ctx)));
    Poly path_c = canonical_trace(q, phi);
    return path_a.value == Poly::constant(ctx, path_b) && path_a.value == path_c;
}

/// Runs one of the named conformance rules for the given number of trials;
/// failures are data, not errors, and carry reproducible instances.
inline VerifyReport run_rule(const std::string& rule, std::uint64_t trials, const InstanceSpec& spec) {
    using namespace detail_verify;
    VerifyReport rep;
    rep.rule = rule;
    auto t0 = std::chrono::steady_clock::now();
    std::uint64_t salt = stable_hash(rule);

    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        Rng rng(mix_seed(spec.seed, salt, trial));
        if (rule == "R1") trial_r1(spec, rng, trial, rep);
        else if (rule == "R2") trial_r2(spec, rng, trial, rep);
        else if (rule == "R3") trial_r3(spec, rng, trial, rep);
        else if (rule == "R4") trial_r4(spec, rng, trial, rep);
        else if (rule == "R5") trial_r5(spec, rng, trial, rep);
        else if (rule == "R6") trial_r6(spec, rng, trial, rep);
        else if (rule == "R7") { trial_r7(spec, rng, trial, rep); break; } // exhaustive
        else if (rule == "R8") trial_r8(spec, rng, trial, rep);
        else if (rule == "R9") trial_r9(spec, rng, trial, rep);
        else if (rule == "R10") trial_r10(spec, rng, trial, rep);
        else if (rule == "jacobian") trial_jacobian(spec, rng, trial, rep);
        else if (rule == "tate") trial_tate(spec, rng, trial, rep);
        else if (rule == "pairing") trial_pairing(spec, rng, trial, rep);
        else if (rule == "sum") trial_sum(spec, rng, trial, rep);
        else if (rule == "cech") trial_cech(spec, rng, trial, rep);
        else fail(ErrorCode::BadArgument, "unknown rule '" + rule + "'");
    }
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

inline const std::vector<std::string>& all_rules() {
    static const std::vector<std::string> rules = {"R1", "R2", "R3", "R4",  "R5",   "R6",      "R7",  "R8",
                                                   "R9", "R10", "jacobian", "tate", "pairing", "sum", "cech"};
    return rules;
}

} // namespace resym
