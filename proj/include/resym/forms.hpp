#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "ring.hpp"

namespace resym {

/// Strictly increasing tuple of variable indices, naming the basis form
/// dx_{i_1} ^ ... ^ dx_{i_p}.
using IndexTuple = std::vector<int>;

namespace detail {

/// Merges two strictly increasing tuples. Returns {merged, sign}; sign 0 on
/// index collision, otherwise the parity of the shuffle.
inline std::pair<IndexTuple, int> merge_tuples(const IndexTuple& a, const IndexTuple& b) {
    IndexTuple concat = a;
    concat.insert(concat.end(), b.begin(), b.end());
    int inversions = 0;
    for (std::size_t i = 0; i < concat.size(); ++i)
        for (std::size_t j = i + 1; j < concat.size(); ++j) {
            if (concat[i] == concat[j]) return {{}, 0};
            if (concat[i] > concat[j]) ++inversions;
        }
    std::sort(concat.begin(), concat.end());
    return {concat, inversions % 2 == 0 ? 1 : -1};
}

} // namespace detail

/// Exterior-algebra element over the polynomial ring: components on the
/// sorted basis dx_{i_1} ^ ... ^ dx_{i_p}, i_1 < ... < i_p, no zero
/// components stored. Degree 0 forms have the single empty index tuple.
class DiffForm {
public:
    DiffForm() = default;
    DiffForm(ContextPtr ctx, int degree) : ctx_(std::move(ctx)), degree_(degree) {
        require(degree_ >= 0 && degree_ <= static_cast<int>(ctx_->nvars()), ErrorCode::DegreeMismatch,
                "form degree out of range");
    }

    static DiffForm zero(ContextPtr ctx, int degree) { return DiffForm(std::move(ctx), degree); }

    static DiffForm from_poly(const Poly& p) {
        DiffForm f(p.ctx(), 0);
        if (!p.is_zero()) f.comps_[{}] = p;
        return f;
    }

    /// The 1-form d(x_i).
    static DiffForm d_var(const ContextPtr& ctx, std::size_t i) {
        require(i < ctx->nvars(), ErrorCode::UnknownVariable, "variable index out of range");
        DiffForm f(ctx, 1);
        f.comps_[{static_cast<int>(i)}] = Poly::constant(ctx, Coeff(1));
        return f;
    }

    static DiffForm from_component(const Poly& coeff, IndexTuple idx) {
        DiffForm f(coeff.ctx(), static_cast<int>(idx.size()));
        require(std::is_sorted(idx.begin(), idx.end()) && std::adjacent_find(idx.begin(), idx.end()) == idx.end(),
                ErrorCode::BadArgument, "index tuple must be strictly increasing");
        if (!coeff.is_zero()) f.comps_[std::move(idx)] = coeff;
        return f;
    }

    const ContextPtr& ctx() const { return ctx_; }
    int degree() const { return degree_; }
    const std::map<IndexTuple, Poly>& components() const { return comps_; }
    bool is_zero() const { return comps_.empty(); }

    Poly component(const IndexTuple& idx) const {
        auto it = comps_.find(idx);
        return it == comps_.end() ? Poly::zero(ctx_) : it->second;
    }

    void add_component(const IndexTuple& idx, const Poly& coeff) {
        require(static_cast<int>(idx.size()) == degree_, ErrorCode::DegreeMismatch, "component degree mismatch");
        if (coeff.is_zero()) return;
        auto [it, inserted] = comps_.emplace(idx, coeff);
        if (!inserted) {
            it->second = it->second + coeff;
            if (it->second.is_zero()) comps_.erase(it);
        }
    }

    bool operator==(const DiffForm& o) const {
        return *ctx_ == *o.ctx_ && degree_ == o.degree_ && comps_ == o.comps_;
    }
    bool operator!=(const DiffForm& o) const { return !(*this == o); }

    DiffForm operator+(const DiffForm& o) const {
        require_same_context(ctx_, o.ctx_);
        require(degree_ == o.degree_, ErrorCode::MixedDegree, "cannot add forms of different degree");
        DiffForm r = *this;
        for (const auto& [idx, c] : o.comps_) r.add_component(idx, c);
        return r;
    }

    DiffForm operator-(const DiffForm& o) const { return *this + o.scaled_by(Poly::constant(ctx_, Coeff(-1))); }

    DiffForm scaled_by(const Poly& p) const {
        DiffForm r(ctx_, degree_);
        for (const auto& [idx, c] : comps_) r.add_component(idx, c * p);
        return r;
    }

    DiffForm scaled(const Coeff& s) const { return scaled_by(Poly::constant(ctx_, s)); }

private:
    ContextPtr ctx_;
    int degree_ = 0;
    std::map<IndexTuple, Poly> comps_;
};

inline DiffForm operator*(const Poly& p, const DiffForm& f) { return f.scaled_by(p); }

inline DiffForm wedge(const DiffForm& a, const DiffForm& b) {
    require_same_context(a.ctx(), b.ctx());
    int deg = a.degree() + b.degree();
    if (deg > static_cast<int>(a.ctx()->nvars())) return DiffForm::zero(a.ctx(), static_cast<int>(a.ctx()->nvars()));
    DiffForm r(a.ctx(), deg);
    for (const auto& [ia, ca] : a.components())
        for (const auto& [ib, cb] : b.components()) {
            auto [merged, sign] = detail::merge_tuples(ia, ib);
            if (sign == 0) continue;
            Poly c = ca * cb;
            if (sign < 0) c = -c;
            r.add_component(merged, c);
        }
    return r;
}

inline DiffForm exterior_derivative(const DiffForm& a) {
    const ContextPtr& ctx = a.ctx();
    if (a.degree() == static_cast<int>(ctx->nvars())) return DiffForm::zero(ctx, a.degree());
    DiffForm r(ctx, a.degree() + 1);
    for (const auto& [idx, c] : a.components()) {
        for (std::size_t v = 0; v < ctx->nvars(); ++v) {
            Poly dc = c.derivative(v);
            if (dc.is_zero()) continue;
            auto [merged, sign] = detail::merge_tuples({static_cast<int>(v)}, idx);
            if (sign == 0) continue;
            if (sign < 0) dc = -dc;
            r.add_component(merged, dc);
        }
    }
    return r;
}

/// Functorial pullback along the ring map given by `images` (one image per
/// source variable, in the target context; empty means same-named variable).
inline DiffForm pullback(const DiffForm& a, const std::vector<Poly>& images, const ContextPtr& target) {
    const ContextPtr& src = a.ctx();
    require(images.size() == src->nvars(), ErrorCode::LengthMismatch, "one image per variable required");
    std::vector<Poly> img(images);
    for (std::size_t i = 0; i < img.size(); ++i) {
        if (!img[i].ctx()) {
            int j = target->var_index(src->vars[i]);
            require(j >= 0, ErrorCode::UnknownVariable,
                    "variable '" + src->vars[i] + "' has no image and no counterpart in target");
            img[i] = Poly::variable(target, static_cast<std::size_t>(j));
        }
    }
    std::vector<DiffForm> dimg;
    dimg.reserve(img.size());
    for (const auto& p : img) {
        DiffForm d(target, 1);
        for (std::size_t v = 0; v < target->nvars(); ++v) d.add_component({static_cast<int>(v)}, p.derivative(v));
        dimg.push_back(std::move(d));
    }
    DiffForm out = DiffForm::zero(target, a.degree() <= static_cast<int>(target->nvars())
                                              ? a.degree()
                                              : static_cast<int>(target->nvars()));
    for (const auto& [idx, c] : a.components()) {
        DiffForm t = DiffForm::from_poly(c.substitute(img, target));
        for (int i : idx) t = wedge(t, dimg[static_cast<std::size_t>(i)]);
        if (t.degree() == out.degree()) out = out + t;
        // degree collapse (target has fewer variables) yields zero components only
    }
    return out;
}

/// Re-indexes a form into another context by variable name, with the shuffle
/// sign of re-sorting each index tuple.
inline DiffForm transport(const DiffForm& f, const ContextPtr& target) {
    const auto& src = *f.ctx();
    DiffForm out(target, f.degree());
    for (const auto& [idx, c] : f.components()) {
        IndexTuple mapped;
        for (int i : idx) {
            int j = target->var_index(src.vars[static_cast<std::size_t>(i)]);
            require(j >= 0, ErrorCode::UnknownVariable, "differential has no counterpart in the target ring");
            mapped.push_back(j);
        }
        auto [sorted, sign] = detail::merge_tuples(mapped, {});
        require(sign != 0, ErrorCode::Internal, "transport produced a degenerate index tuple");
        Poly cc = transport(c, target);
        out.add_component(sorted, sign < 0 ? -cc : cc);
    }
    return out;
}

/// The explicit transitivity map on forms: a base-block form nu and a
/// fiber-block form mu combine as mu ^ nu, fiber part first.
inline DiffForm transitivity_wedge(const DiffForm& nu, const DiffForm& mu) {
    require_same_context(nu.ctx(), mu.ctx());
    const auto& ctx = *nu.ctx();
    for (const auto& [idx, c] : nu.components())
        for (int i : idx)
            require(ctx.is_base_var(static_cast<std::size_t>(i)), ErrorCode::BlockViolation,
                    "nu must involve base-block differentials only");
    for (const auto& [idx, c] : mu.components())
        for (int i : idx)
            require(ctx.is_fiber_var(static_cast<std::size_t>(i)), ErrorCode::BlockViolation,
                    "mu must involve fiber-block differentials only");
    return wedge(mu, nu);
}

} // namespace resym
