#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "coeff.hpp"
#include "errors.hpp"
#include "linalg.hpp"

namespace resym {

/// Sparse Laurent polynomial in T_0..T_r used for Cech cochains: exponent
/// vectors of length r+1 with entries of any sign.
using Laurent = std::map<std::vector<int>, Coeff>;

/// Ordered subset of {0..r}, strictly increasing.
using CechSubset = std::vector<int>;

/// Cech cochain for O(d) on P^r over the standard cover U_i = {T_i != 0}:
/// one homogeneous Laurent polynomial per (level+1)-subset, with negative
/// exponents allowed only at indices in the subset.
struct CechCochain {
    int r = 0;
    int twist = 0;
    int level = 0;
    CoeffField field;
    std::map<CechSubset, Laurent> entries;

    void add_term(const CechSubset& s, const std::vector<int>& e, const Coeff& c) {
        require(static_cast<int>(s.size()) == level + 1, ErrorCode::LengthMismatch, "subset size mismatch");
        require(static_cast<int>(e.size()) == r + 1, ErrorCode::LengthMismatch, "exponent length mismatch");
        int sum = 0;
        for (int x : e) sum += x;
        require(sum == twist, ErrorCode::WrongTwist, "monomial not homogeneous of the twist degree");
        for (int i = 0; i <= r; ++i)
            if (e[i] < 0)
                require(std::binary_search(s.begin(), s.end(), i), ErrorCode::BadArgument,
                        "negative exponent outside the subset support");
        Coeff n = field.normalize(c);
        if (n.is_zero()) return;
        auto& lp = entries[s];
        auto [it, inserted] = lp.emplace(e, n);
        if (!inserted) {
            it->second = field.add(it->second, n);
            if (it->second.is_zero()) lp.erase(it);
        }
        if (lp.empty()) entries.erase(s);
    }

    bool is_zero() const { return entries.empty(); }

    bool operator==(const CechCochain& o) const {
        return r == o.r && twist == o.twist && level == o.level && entries == o.entries;
    }
};

inline CechCochain make_cochain(const CoeffField& field, int r, int twist, int level) {
    require(r >= 1, ErrorCode::BadArgument, "projective dimension must be positive");
    require(level >= 0 && level <= r, ErrorCode::LevelOverflow, "cochain level out of range");
    CechCochain c;
    c.r = r;
    c.twist = twist;
    c.level = level;
    c.field = field;
    return c;
}

/// Ordered Cech differential: (dc)_S = sum_j (-1)^j c_{S minus j-th element}.
inline CechCochain coboundary(const CechCochain& c) {
    require(c.level < c.r, ErrorCode::LevelOverflow, "coboundary of a top-level cochain");
    CechCochain out = make_cochain(c.field, c.r, c.twist, c.level + 1);
    std::vector<int> subset(static_cast<std::size_t>(c.level) + 2);
    std::function<void(int, int)> walk = [&](int start, int pos) {
        if (pos == static_cast<int>(subset.size())) {
            for (std::size_t j = 0; j < subset.size(); ++j) {
                CechSubset facet;
                for (std::size_t k = 0; k < subset.size(); ++k)
                    if (k != j) facet.push_back(subset[k]);
                auto it = c.entries.find(facet);
                if (it == c.entries.end()) continue;
                for (const auto& [e, coeff] : it->second) {
                    // support: negatives of e must lie inside the larger subset, automatic
                    Coeff v = (j % 2 == 0) ? coeff : c.field.neg(coeff);
                    out.add_term(subset, e, v);
                }
            }
            return;
        }
        for (int i = start; i <= c.r; ++i) {
            subset[static_cast<std::size_t>(pos)] = i;
            walk(i + 1, pos + 1);
        }
    };
    walk(0, 0);
    return out;
}

namespace detail {

inline std::vector<CechSubset> subsets_of_size(int r, int size) {
    std::vector<CechSubset> out;
    CechSubset cur(static_cast<std::size_t>(size));
    std::function<void(int, int)> walk = [&](int start, int pos) {
        if (pos == size) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i <= r; ++i) {
            cur[static_cast<std::size_t>(pos)] = i;
            walk(i + 1, pos + 1);
        }
    };
    walk(0, 0);
    return out;
}

/// Cohomology dimensions of the pattern complex: subsets constrained to
/// contain `pattern`, differentials the ordered Cech signs. Returns dims of
/// H^q for q = 0..r.
inline std::vector<std::size_t> pattern_cohomology(int r, const CechSubset& pattern, const CoeffField& field) {
    std::vector<std::vector<CechSubset>> levels(static_cast<std::size_t>(r) + 1);
    for (int p = 0; p <= r; ++p)
        for (auto& s : subsets_of_size(r, p + 1))
            if (std::includes(s.begin(), s.end(), pattern.begin(), pattern.end())) levels[p].push_back(s);

    auto boundary_rank = [&](int p) -> std::size_t { // rank of C^p -> C^(p+1)
        if (p < 0 || p >= r) return 0;
        const auto& dom = levels[static_cast<std::size_t>(p)];
        const auto& cod = levels[static_cast<std::size_t>(p) + 1];
        if (dom.empty() || cod.empty()) return 0;
        std::map<CechSubset, std::size_t> dom_index;
        for (std::size_t i = 0; i < dom.size(); ++i) dom_index[dom[i]] = i;
        Mat m(cod.size(), dom.size());
        for (std::size_t i = 0; i < cod.size(); ++i) {
            const auto& s = cod[i];
            for (std::size_t j = 0; j < s.size(); ++j) {
                CechSubset facet;
                for (std::size_t k = 0; k < s.size(); ++k)
                    if (k != j) facet.push_back(s[k]);
                auto it = dom_index.find(facet);
                if (it == dom_index.end()) continue;
                m.at(i, it->second) = field.from_int(j % 2 == 0 ? 1 : -1);
            }
        }
        return rank(m, field);
    };

    std::vector<std::size_t> dims(static_cast<std::size_t>(r) + 1, 0);
    for (int q = 0; q <= r; ++q) {
        std::size_t cq = levels[static_cast<std::size_t>(q)].size();
        std::size_t rk_out = boundary_rank(q);
        std::size_t rk_in = boundary_rank(q - 1);
        dims[static_cast<std::size_t>(q)] = cq - rk_out - rk_in;
    }
    return dims;
}

/// Number of Laurent exponent vectors with negative support exactly
/// `pattern` and total degree d; finite only for the empty and full
/// patterns, which are the only ones with nonzero cohomology.
inline std::size_t pattern_count(int r, const CechSubset& pattern, int d) {
    if (pattern.empty()) {
        // nonnegative solutions of e_0 + ... + e_r = d
        if (d < 0) return 0;
        std::vector<std::size_t> ways(static_cast<std::size_t>(d) + 1, 0);
        ways[0] = 1; // zero parts
        for (int part = 0; part <= r; ++part) {
            std::vector<std::size_t> next(static_cast<std::size_t>(d) + 1, 0);
            for (int s = 0; s <= d; ++s)
                for (int e = 0; e <= s; ++e) next[static_cast<std::size_t>(s)] += ways[static_cast<std::size_t>(s - e)];
            ways = std::move(next);
        }
        return ways[static_cast<std::size_t>(d)];
    }
    if (static_cast<int>(pattern.size()) == r + 1) {
        // all entries <= -1: substitute e -> -1 - e and count compositions
        int total = -d - (r + 1);
        if (total < 0) return 0;
        return pattern_count(r, CechSubset{}, total);
    }
    fail(ErrorCode::Internal, "mixed-sign pattern has infinite multiplicity");
}

} // namespace detail

/// dim H^q(P^r, O(d)), computed from the monomial-wise splitting of the Cech
/// complex: each negative-support pattern contributes its pattern-complex
/// cohomology with multiplicity the number of matching exponent vectors.
inline std::size_t cohomology_dim(int r, int d, int q) {
    require(q >= 0 && q <= r, ErrorCode::BadArgument, "cohomology degree out of range");
    CoeffField field = CoeffField::rationals();
    std::size_t total = 0;
    for (int size = 0; size <= r + 1; ++size)
        for (auto& pattern : detail::subsets_of_size(r, size)) {
            auto dims = detail::pattern_cohomology(r, pattern, field);
            std::size_t h = dims[static_cast<std::size_t>(q)];
            if (h == 0) continue;
            total += h * detail::pattern_count(r, pattern, d);
        }
    return total;
}

/// Image of the fraction [dt_1 ^ ... ^ dt_r; t^alpha] under the local-to-
/// global map: the top cocycle T_0^(sum alpha - (r+1)) prod T_i^(-alpha_i)
/// in twist -r-1, against the trivialization fixing dt_1 ^...^ dt_r on U_0
/// as the Laurent weight T_0^(-r-1).
inline CechCochain fraction_to_cech_class(const CoeffField& field, int r, const std::vector<int>& alpha) {
    require(static_cast<int>(alpha.size()) == r, ErrorCode::LengthMismatch, "alpha length must equal r");
    int sum = 0;
    for (int a : alpha) {
        require(a >= 1, ErrorCode::BadArgument, "alpha entries must be positive");
        sum += a;
    }
    CechCochain c = make_cochain(field, r, -r - 1, r);
    CechSubset top;
    for (int i = 0; i <= r; ++i) top.push_back(i);
    std::vector<int> e(static_cast<std::size_t>(r) + 1, 0);
    e[0] = sum - (r + 1);
    for (int i = 1; i <= r; ++i) e[static_cast<std::size_t>(i)] = -alpha[static_cast<std::size_t>(i - 1)];
    c.add_term(top, e, Coeff(1));
    return c;
}

/// Decides whether a top-level cochain is a coboundary; when it is, returns
/// a verified witness x with coboundary(x) == c. A top cochain survives in
/// cohomology exactly on its all-negative monomials.
inline std::pair<bool, std::optional<CechCochain>> class_is_zero(const CechCochain& c) {
    require(c.level == c.r, ErrorCode::LevelOverflow, "zero test applies to top-level cochains");
    CechCochain witness = make_cochain(c.field, c.r, c.twist, c.r - 1);
    CechSubset top;
    for (int i = 0; i <= c.r; ++i) top.push_back(i);
    auto it = c.entries.find(top);
    if (it != c.entries.end()) {
        for (const auto& [e, coeff] : it->second) {
            int pos = -1;
            for (int i = 0; i <= c.r; ++i)
                if (e[static_cast<std::size_t>(i)] >= 0) {
                    pos = i;
                    break;
                }
            if (pos < 0) return {false, std::nullopt}; // all-negative monomial survives
            CechSubset facet;
            for (int i = 0; i <= c.r; ++i)
                if (i != pos) facet.push_back(i);
            // (d x)_top picks x_facet with sign (-1)^pos
            Coeff v = (pos % 2 == 0) ? coeff : c.field.neg(coeff);
            witness.add_term(facet, e, v);
        }
    }
    require(coboundary(witness) == c, ErrorCode::Internal, "coboundary witness failed verification");
    return {true, witness};
}

/// The integral over P^r in the dualizing twist: the coefficient of the
/// all-minus-one monomial 1/(T_0...T_r) after reduction modulo coboundaries.
/// Such monomials are never coboundaries, so extraction is direct.
inline Coeff pn_integral(const CechCochain& c) {
    require(c.level == c.r, ErrorCode::LevelOverflow, "integral applies to top-level cochains");
    require(c.twist == -c.r - 1, ErrorCode::WrongTwist, "integral requires twist -r-1");
    CechSubset top;
    for (int i = 0; i <= c.r; ++i) top.push_back(i);
    auto it = c.entries.find(top);
    if (it == c.entries.end()) return Coeff(0);
    std::vector<int> mu(static_cast<std::size_t>(c.r) + 1, -1);
    auto jt = it->second.find(mu);
    return jt == it->second.end() ? Coeff(0) : jt->second;
}

} // namespace resym
