#pragma once

#include <optional>
#include <vector>

#include "coeff.hpp"
#include "errors.hpp"
#include "ring.hpp"

namespace resym {

/// Dense matrix over the coefficient field, row-major.
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<Coeff> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, Coeff(0)) {}

    Coeff& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Coeff& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

/// Row echelon elimination; returns the rank. When `det` is non-null the
/// matrix must be square and receives the determinant.
inline std::size_t gauss(Mat m, const CoeffField& F, Coeff* det = nullptr) {
    Coeff d = F.from_int(1);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols && rank < m.rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < m.rows && m.at(pivot, col).is_zero()) ++pivot;
        if (pivot == m.rows) continue;
        if (pivot != rank) {
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(pivot, j), m.at(rank, j));
            d = F.neg(d);
        }
        Coeff inv = F.inv(m.at(rank, col));
        d = F.mul(d, m.at(rank, col));
        for (std::size_t i = rank + 1; i < m.rows; ++i) {
            if (m.at(i, col).is_zero()) continue;
            Coeff f = F.mul(m.at(i, col), inv);
            for (std::size_t j = col; j < m.cols; ++j)
                m.at(i, j) = F.sub(m.at(i, j), F.mul(f, m.at(rank, j)));
        }
        ++rank;
    }
    if (det) {
        require(m.rows == m.cols, ErrorCode::BadArgument, "determinant of non-square matrix");
        *det = rank == m.rows ? d : Coeff(0);
    }
    return rank;
}

inline Coeff determinant(const Mat& m, const CoeffField& F) {
    Coeff d;
    gauss(m, F, &d);
    return d;
}

inline std::size_t rank(const Mat& m, const CoeffField& F) { return gauss(m, F); }

/// Solves A x = b; empty when the system is inconsistent or underdetermined
/// in a way that leaves pivots missing (callers here always expect square
/// nonsingular systems).
inline std::optional<std::vector<Coeff>> solve(const Mat& A, const std::vector<Coeff>& b, const CoeffField& F) {
    require(A.rows == b.size(), ErrorCode::LengthMismatch, "rhs size mismatch");
    Mat m(A.rows, A.cols + 1);
    for (std::size_t i = 0; i < A.rows; ++i) {
        for (std::size_t j = 0; j < A.cols; ++j) m.at(i, j) = A.at(i, j);
        m.at(i, A.cols) = b[i];
    }
    // forward elimination with column pivots
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t col = 0; col < A.cols && r < m.rows; ++col) {
        std::size_t piv = r;
        while (piv < m.rows && m.at(piv, col).is_zero()) ++piv;
        if (piv == m.rows) continue;
        if (piv != r)
            for (std::size_t j = 0; j <= A.cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
        Coeff inv = F.inv(m.at(r, col));
        for (std::size_t j = col; j <= A.cols; ++j) m.at(r, j) = F.mul(m.at(r, j), inv);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == r || m.at(i, col).is_zero()) continue;
            Coeff f = m.at(i, col);
            for (std::size_t j = col; j <= A.cols; ++j)
                m.at(i, j) = F.sub(m.at(i, j), F.mul(f, m.at(r, j)));
        }
        pivot_col.push_back(col);
        ++r;
    }
    for (std::size_t i = r; i < m.rows; ++i)
        if (!m.at(i, A.cols).is_zero()) return std::nullopt;
    if (pivot_col.size() != A.cols) return std::nullopt;
    std::vector<Coeff> x(A.cols, Coeff(0));
    for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = m.at(i, A.cols);
    return x;
}

/// Square matrix of polynomials (used for multiplication matrices over a
/// polynomial base and for transformation witnesses).
struct PolyMat {
    std::size_t n = 0;
    std::vector<Poly> a;

    PolyMat() = default;
    PolyMat(std::size_t n_, const ContextPtr& ctx) : n(n_), a(n_ * n_, Poly::zero(ctx)) {}

    Poly& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    const Poly& at(std::size_t i, std::size_t j) const { return a[i * n + j]; }

    bool operator==(const PolyMat& o) const { return n == o.n && a == o.a; }

    PolyMat operator*(const PolyMat& o) const {
        require(n == o.n, ErrorCode::LengthMismatch, "matrix size mismatch");
        const ContextPtr& ctx = a.empty() ? ContextPtr() : a.front().ctx();
        PolyMat r(n, ctx);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                if (at(i, k).is_zero()) continue;
                for (std::size_t j = 0; j < n; ++j) r.at(i, j) = r.at(i, j) + at(i, k) * o.at(k, j);
            }
        return r;
    }
};

/// Laplace-expansion determinant; fine for the small witness matrices here.
inline Poly poly_det(const std::vector<std::vector<Poly>>& m, const ContextPtr& ctx) {
    const std::size_t n = m.size();
    if (n == 0) return Poly::constant(ctx, Coeff(1));
    for (const auto& row : m)
        require(row.size() == n, ErrorCode::LengthMismatch, "determinant of non-square matrix");
    std::vector<std::size_t> cols(n);
    for (std::size_t j = 0; j < n; ++j) cols[j] = j;
    // recursive expansion along the first remaining row
    struct Rec {
        const std::vector<std::vector<Poly>>& m;
        const ContextPtr& ctx;
        Poly run(std::size_t row, std::vector<std::size_t>& cols) {
            if (cols.size() == 1) return m[row][cols[0]];
            Poly acc = Poly::zero(ctx);
            for (std::size_t k = 0; k < cols.size(); ++k) {
                const Poly& entry = m[row][cols[k]];
                if (entry.is_zero()) continue;
                std::vector<std::size_t> rest;
                rest.reserve(cols.size() - 1);
                for (std::size_t j = 0; j < cols.size(); ++j)
                    if (j != k) rest.push_back(cols[j]);
                Poly sub = run(row + 1, rest);
                Poly term = entry * sub;
                acc = (k % 2 == 0) ? acc + term : acc - term;
            }
            return acc;
        }
    };
    Rec rec{m, ctx};
    return rec.run(0, cols);
}

/// Samuelson-Berkowitz characteristic polynomial: division-free, valid over
/// any commutative ring. Returns coefficients c[0..n] of det(x I - M) with
/// c[0] = 1 (coefficient of x^n) down to c[n] (constant term).
inline std::vector<Poly> berkowitz_charpoly(const PolyMat& M, const ContextPtr& ctx) {
    const std::size_t n = M.n;
    std::vector<Poly> p{Poly::constant(ctx, Coeff(1))};
    for (std::size_t r = 1; r <= n; ++r) {
        // principal r x r block; row R, column C, corner a of its last row/col
        std::vector<Poly> col(r + 1, Poly::zero(ctx));
        col[0] = Poly::constant(ctx, Coeff(1));
        col[1] = -M.at(r - 1, r - 1);
        if (r >= 2) {
            std::vector<Poly> v(r - 1); // M^k column, iterated
            for (std::size_t i = 0; i < r - 1; ++i) v[i] = M.at(i, r - 1);
            for (std::size_t k = 0; k + 2 <= r; ++k) {
                Poly s = Poly::zero(ctx);
                for (std::size_t i = 0; i < r - 1; ++i) s = s + M.at(r - 1, i) * v[i];
                col[k + 2] = -s;
                if (k + 2 <= r - 1) {
                    std::vector<Poly> w(r - 1, Poly::zero(ctx));
                    for (std::size_t i = 0; i < r - 1; ++i)
                        for (std::size_t j = 0; j < r - 1; ++j) w[i] = w[i] + M.at(i, j) * v[j];
                    v = std::move(w);
                }
            }
        }
        // multiply by the Toeplitz matrix built from `col`
        std::vector<Poly> q(r + 1, Poly::zero(ctx));
        for (std::size_t i = 0; i <= r; ++i)
            for (std::size_t j = 0; j < p.size() && j <= i; ++j) q[i] = q[i] + col[i - j] * p[j];
        p = std::move(q);
    }
    return p;
}

} // namespace resym
