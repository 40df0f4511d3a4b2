#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "coeff.hpp"
#include "errors.hpp"

namespace resym {

/// Exponent vector; one entry per ring variable, all entries >= 0.
using Exponent = std::vector<int>;

inline int total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

inline Exponent exp_add(const Exponent& a, const Exponent& b) {
    Exponent r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

/// Componentwise difference; valid only when b divides a.
inline Exponent exp_sub(const Exponent& a, const Exponent& b) {
    Exponent r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline bool exp_divides(const Exponent& a, const Exponent& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline Exponent exp_lcm(const Exponent& a, const Exponent& b) {
    Exponent r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

/// Polynomial ring k[vars]. The first `base_block` variables form the base
/// block (the "u" variables); the rest are fiber variables ("T"). Absolute
/// rings have base_block == 0.
struct RingContext {
    CoeffField field;
    std::vector<std::string> vars;
    std::size_t base_block = 0;

    std::size_t nvars() const { return vars.size(); }
    std::size_t fiber_dim() const { return vars.size() - base_block; }
    bool is_base_var(std::size_t i) const { return i < base_block; }
    bool is_fiber_var(std::size_t i) const { return i >= base_block; }

    int var_index(const std::string& name) const {
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == name) return static_cast<int>(i);
        return -1;
    }

    bool operator==(const RingContext& o) const {
        return field == o.field && vars == o.vars && base_block == o.base_block;
    }
    bool operator!=(const RingContext& o) const { return !(*this == o); }
};

using ContextPtr = std::shared_ptr<const RingContext>;

inline ContextPtr make_context(CoeffField field, std::vector<std::string> vars, std::size_t base_block = 0) {
    require(base_block <= vars.size(), ErrorCode::BadArgument, "base_block exceeds variable count");
    std::set<std::string> seen;
    for (const auto& v : vars)
        require(seen.insert(v).second, ErrorCode::BadArgument, "duplicate variable name '" + v + "'");
    auto ctx = std::make_shared<RingContext>();
    ctx->field = std::move(field);
    ctx->vars = std::move(vars);
    ctx->base_block = base_block;
    return ctx;
}

inline void require_same_context(const ContextPtr& a, const ContextPtr& b) {
    require(a && b && (a == b || *a == *b), ErrorCode::ContextMismatch, "ring contexts differ");
}

/// Total multiplicative monomial well-order. Block orders compare the fiber
/// block first (degrevlex), then the base block (degrevlex), which makes
/// "finite free over the base" visible as fiber-pure leading monomials.
struct MonomialOrder {
    enum class Kind { degrevlex, lex, block };

    Kind kind = Kind::degrevlex;
    std::size_t split = 0; // block only: first `split` vars are the base block

    static MonomialOrder degrevlex() { return {Kind::degrevlex, 0}; }
    static MonomialOrder lex() { return {Kind::lex, 0}; }
    static MonomialOrder block(std::size_t split) { return {Kind::block, split}; }

    /// Natural order for a context: block when a base block is present.
    static MonomialOrder natural(const RingContext& ctx) {
        return ctx.base_block == 0 ? degrevlex() : block(ctx.base_block);
    }

    bool less(const Exponent& a, const Exponent& b) const {
        switch (kind) {
            case Kind::lex: {
                for (std::size_t i = 0; i < a.size(); ++i)
                    if (a[i] != b[i]) return a[i] < b[i];
                return false;
            }
            case Kind::degrevlex:
                return drl_less(a, b, 0, a.size());
            case Kind::block: {
                if (int c = drl_cmp(a, b, split, a.size()); c != 0) return c < 0;
                return drl_less(a, b, 0, split);
            }
        }
        return false;
    }

    bool operator==(const MonomialOrder& o) const { return kind == o.kind && split == o.split; }

private:
    static int drl_cmp(const Exponent& a, const Exponent& b, std::size_t lo, std::size_t hi) {
        int da = 0, db = 0;
        for (std::size_t i = lo; i < hi; ++i) {
            da += a[i];
            db += b[i];
        }
        if (da != db) return da < db ? -1 : 1;
        for (std::size_t i = hi; i-- > lo;) {
            if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
        }
        return 0;
    }
    static bool drl_less(const Exponent& a, const Exponent& b, std::size_t lo, std::size_t hi) {
        return drl_cmp(a, b, lo, hi) < 0;
    }
};

/// Sparse multivariate polynomial in canonical form: a term map with no zero
/// coefficients. Equality is structural. Immutable in spirit; all operations
/// return fresh values.
class Poly {
public:
    using TermMap = std::map<Exponent, Coeff>;

    Poly() = default;
    explicit Poly(ContextPtr ctx) : ctx_(std::move(ctx)) {}

    static Poly zero(ContextPtr ctx) { return Poly(std::move(ctx)); }

    static Poly constant(ContextPtr ctx, const Coeff& c) {
        Poly p(ctx);
        Coeff n = ctx->field.normalize(c);
        if (!n.is_zero()) p.terms_[Exponent(ctx->nvars(), 0)] = n;
        return p;
    }

    static Poly variable(ContextPtr ctx, std::size_t i, int power = 1) {
        require(i < ctx->nvars(), ErrorCode::UnknownVariable, "variable index out of range");
        require(power >= 0, ErrorCode::BadArgument, "negative power");
        Poly p(ctx);
        Exponent e(ctx->nvars(), 0);
        e[i] = power;
        p.terms_[std::move(e)] = ctx->field.from_int(1);
        return p;
    }

    static Poly monomial(ContextPtr ctx, Exponent e, const Coeff& c) {
        require(e.size() == ctx->nvars(), ErrorCode::LengthMismatch, "exponent length mismatch");
        for (int x : e) require(x >= 0, ErrorCode::BadArgument, "negative exponent");
        Poly p(ctx);
        Coeff n = ctx->field.normalize(c);
        if (!n.is_zero()) p.terms_[std::move(e)] = n;
        return p;
    }

    const ContextPtr& ctx() const { return ctx_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t nterms() const { return terms_.size(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
    }

    Coeff constant_value() const {
        if (terms_.empty()) return Coeff(0);
        require(is_constant(), ErrorCode::BadArgument, "polynomial is not constant");
        return terms_.begin()->second;
    }

    int degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
        return d;
    }

    int degree_in(std::size_t var) const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
        return d;
    }

    bool involves(std::size_t var) const {
        for (const auto& [e, c] : terms_)
            if (e[var] > 0) return true;
        return false;
    }

    /// True when supported on base-block variables only.
    bool is_base_only() const {
        for (const auto& [e, c] : terms_)
            for (std::size_t i = ctx_->base_block; i < e.size(); ++i)
                if (e[i] > 0) return false;
        return true;
    }

    Coeff coefficient_of(const Exponent& e) const {
        require(e.size() == ctx_->nvars(), ErrorCode::LengthMismatch, "exponent length mismatch");
        auto it = terms_.find(e);
        return it == terms_.end() ? Coeff(0) : it->second;
    }

    /// Coefficient of var^k, a polynomial in the remaining variables.
    Poly coefficient_in_var(std::size_t var, int k) const {
        Poly r(ctx_);
        for (const auto& [e, c] : terms_) {
            if (e[var] != k) continue;
            Exponent e2 = e;
            e2[var] = 0;
            r.terms_[std::move(e2)] = c;
        }
        return r;
    }

    Poly operator-() const {
        Poly r(ctx_);
        for (const auto& [e, c] : terms_) r.terms_[e] = ctx_->field.neg(c);
        return r;
    }

    Poly operator+(const Poly& o) const {
        require_same_context(ctx_, o.ctx_);
        Poly r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, c);
        return r;
    }

    Poly operator-(const Poly& o) const {
        require_same_context(ctx_, o.ctx_);
        Poly r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, ctx_->field.neg(c));
        return r;
    }

    Poly operator*(const Poly& o) const {
        require_same_context(ctx_, o.ctx_);
        Poly r(ctx_);
        for (const auto& [ea, ca] : terms_)
            for (const auto& [eb, cb] : o.terms_) r.add_term(exp_add(ea, eb), ctx_->field.mul(ca, cb));
        return r;
    }

    Poly scaled(const Coeff& s) const {
        Poly r(ctx_);
        Coeff n = ctx_->field.normalize(s);
        if (n.is_zero()) return r;
        for (const auto& [e, c] : terms_) r.terms_[e] = ctx_->field.mul(c, n);
        return r;
    }

    Poly pow(int n) const {
        require(n >= 0, ErrorCode::BadArgument, "negative power");
        Poly acc = constant(ctx_, Coeff(1));
        Poly base = *this;
        while (n > 0) {
            if (n & 1) acc = acc * base;
            base = base * base;
            n >>= 1;
        }
        return acc;
    }

    bool operator==(const Poly& o) const { return *ctx_ == *o.ctx_ && terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly derivative(std::size_t var) const {
        Poly r(ctx_);
        for (const auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            Exponent e2 = e;
            e2[var] -= 1;
            r.add_term(std::move(e2), ctx_->field.mul(c, ctx_->field.from_int(e[var])));
        }
        return r;
    }

    /// Ring-homomorphism image. `images[i]` is the image of variable i in the
    /// target context; entries may be empty to mean "same-named variable of
    /// the target".
    Poly substitute(const std::vector<Poly>& images, const ContextPtr& target) const {
        require(images.size() == ctx_->nvars(), ErrorCode::LengthMismatch, "one image per variable required");
        std::vector<Poly> img(images);
        for (std::size_t i = 0; i < img.size(); ++i) {
            if (img[i].ctx_) {
                require(*img[i].ctx_ == *target, ErrorCode::ContextMismatch, "image lives in a different context");
                require(img[i].ctx_->field == ctx_->field, ErrorCode::ContextMismatch,
                        "coefficient field changes under substitution");
            } else {
                int j = target->var_index(ctx_->vars[i]);
                require(j >= 0, ErrorCode::UnknownVariable,
                        "variable '" + ctx_->vars[i] + "' has no image and no counterpart in target");
                img[i] = Poly::variable(target, static_cast<std::size_t>(j));
            }
        }
        Poly acc = Poly::zero(target);
        // power cache per variable
        std::vector<std::vector<Poly>> powers(img.size());
        auto power_of = [&](std::size_t i, int k) -> const Poly& {
            auto& cache = powers[i];
            if (cache.empty()) cache.push_back(Poly::constant(target, Coeff(1)));
            while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * img[i]);
            return cache[k];
        };
        for (const auto& [e, c] : terms_) {
            Poly t = Poly::constant(target, c);
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] > 0) t = t * power_of(i, e[i]);
            acc = acc + t;
        }
        return acc;
    }

    /// Substitution within the same ring, by variable name.
    Poly substitute_named(const std::map<std::string, Poly>& assignment, const ContextPtr& target) const {
        std::vector<Poly> images(ctx_->nvars());
        for (const auto& [name, image] : assignment) {
            int i = ctx_->var_index(name);
            require(i >= 0, ErrorCode::UnknownVariable, "unknown variable '" + name + "'");
            images[static_cast<std::size_t>(i)] = image;
        }
        return substitute(images, target);
    }

    /// Leading term with respect to an order; polynomial must be nonzero.
    std::pair<Exponent, Coeff> leading_term(const MonomialOrder& order) const {
        require(!terms_.empty(), ErrorCode::BadArgument, "zero polynomial has no leading term");
        auto best = terms_.begin();
        for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it)
            if (order.less(best->first, it->first)) best = it;
        return {best->first, best->second};
    }

    void add_term(Exponent e, const Coeff& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.emplace(std::move(e), c);
        if (!inserted) {
            it->second = ctx_->field.add(it->second, c);
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

private:
    ContextPtr ctx_;
    TermMap terms_;
};

inline Poly operator*(const Coeff& s, const Poly& p) { return p.scaled(s); }

/// Re-indexes a polynomial into another context by variable name. Every
/// variable actually occurring must exist in the target; this covers both
/// block reinterpretation (same names, different base split) and restriction
/// onto a subring.
inline Poly transport(const Poly& p, const ContextPtr& target) {
    require(p.ctx()->field == target->field, ErrorCode::ContextMismatch, "transport across coefficient fields");
    const auto& src = *p.ctx();
    std::vector<int> where(src.nvars(), -1);
    for (std::size_t i = 0; i < src.nvars(); ++i) where[i] = target->var_index(src.vars[i]);
    Poly out(target);
    for (const auto& [e, c] : p.terms()) {
        Exponent e2(target->nvars(), 0);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            require(where[i] >= 0, ErrorCode::UnknownVariable,
                    "variable '" + src.vars[i] + "' does not exist in the target ring");
            e2[static_cast<std::size_t>(where[i])] += e[i];
        }
        out.add_term(std::move(e2), c);
    }
    return out;
}

/// Division by a divisor monic in `var` (unit leading coefficient in that
/// variable); returns {quotient, remainder} with deg_var(rem) < deg_var(div).
inline std::pair<Poly, Poly> divmod_in_var(const Poly& p, const Poly& divisor, std::size_t var) {
    require_same_context(p.ctx(), divisor.ctx());
    const int d = divisor.degree_in(var);
    require(d >= 0, ErrorCode::BadArgument, "division by zero polynomial");
    Poly lead = divisor.coefficient_in_var(var, d);
    require(lead.is_constant(), ErrorCode::BadArgument, "divisor leading coefficient must be constant in var");
    Coeff lc_inv = p.ctx()->field.inv(lead.constant_value());
    Poly q = Poly::zero(p.ctx());
    Poly r = p;
    while (true) {
        int dr = r.degree_in(var);
        if (dr < d) break;
        Poly c = r.coefficient_in_var(var, dr).scaled(lc_inv);
        Poly shift = c * Poly::variable(p.ctx(), var, dr - d);
        q = q + shift;
        r = r - shift * divisor;
    }
    return {q, r};
}

/// Exact division by (x_i - x_j); fails if not divisible.
inline Poly exact_divide_linear(const Poly& p, std::size_t xi, std::size_t xj) {
    Poly divisor = Poly::variable(p.ctx(), xi) - Poly::variable(p.ctx(), xj);
    auto [q, r] = divmod_in_var(p, divisor, xi);
    require(r.is_zero(), ErrorCode::Internal, "exact division by linear form left a remainder");
    return q;
}

} // namespace resym
