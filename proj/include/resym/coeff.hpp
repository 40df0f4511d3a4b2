#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "errors.hpp"

namespace resym {

using Integer = boost::multiprecision::cpp_int;

/// Exact scalar. Over the rationals this is an arbitrary-precision fraction
/// (gcd-reduced, positive denominator); over F_p it is the residue 0..p-1
/// stored with denominator 1.
using Coeff = boost::multiprecision::cpp_rational;

namespace detail {

inline Integer mulmod(const Integer& a, const Integer& b, const Integer& m) { return a * b % m; }

inline Integer powmod(Integer base, Integer exp, const Integer& m) {
    Integer acc = 1;
    base %= m;
    while (exp > 0) {
        if ((exp & 1) != 0) acc = mulmod(acc, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return acc;
}

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    Integer d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        Integer x = powmod(a, d, n);
        if (x == 1 || x == Integer(n) - 1) continue;
        bool witness = true;
        for (int i = 0; i + 1 < s; ++i) {
            x = mulmod(x, x, n);
            if (x == Integer(n) - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

} // namespace detail

/// The coefficient field: Q, or F_p for a prime p (checked at construction).
class CoeffField {
public:
    enum class Kind { rationals, prime_field };

    CoeffField() : kind_(Kind::rationals) {}

    static CoeffField rationals() { return CoeffField(); }

    static CoeffField prime_field(std::uint64_t p) {
        require(detail::is_prime_u64(p), ErrorCode::BadArgument,
                "prime_field modulus " + std::to_string(p) + " is not prime");
        CoeffField f;
        f.kind_ = Kind::prime_field;
        f.p_ = p;
        return f;
    }

    Kind kind() const { return kind_; }
    bool is_rationals() const { return kind_ == Kind::rationals; }
    std::uint64_t modulus() const { return p_; }

    bool operator==(const CoeffField& o) const { return kind_ == o.kind_ && p_ == o.p_; }
    bool operator!=(const CoeffField& o) const { return !(*this == o); }

    /// Canonical representative: identity over Q, residue in [0, p) over F_p.
    Coeff normalize(const Coeff& c) const {
        if (is_rationals()) return c;
        Integer num = boost::multiprecision::numerator(c);
        Integer den = boost::multiprecision::denominator(c);
        Integer p(p_);
        num %= p;
        if (num < 0) num += p;
        if (den != 1) {
            den %= p;
            if (den < 0) den += p;
            num = detail::mulmod(num, inv_mod(den, p), p);
        }
        return Coeff(num);
    }

    Coeff add(const Coeff& a, const Coeff& b) const { return normalize(Coeff(a + b)); }
    Coeff sub(const Coeff& a, const Coeff& b) const { return normalize(Coeff(a - b)); }
    Coeff mul(const Coeff& a, const Coeff& b) const { return normalize(Coeff(a * b)); }
    Coeff neg(const Coeff& a) const { return normalize(Coeff(-a)); }

    Coeff inv(const Coeff& a) const {
        require(!a.is_zero(), ErrorCode::BadArgument, "division by zero");
        if (is_rationals()) return Coeff(1) / a;
        Integer num = boost::multiprecision::numerator(normalize(a));
        return Coeff(inv_mod(num, Integer(p_)));
    }

    Coeff div(const Coeff& a, const Coeff& b) const { return mul(a, inv(b)); }

    Coeff from_int(long long n) const { return normalize(Coeff(n)); }

    std::string name() const {
        if (is_rationals()) return "QQ";
        return "Fp:" + std::to_string(p_);
    }

private:
    static Integer inv_mod(Integer a, const Integer& m) {
        // extended Euclid; a assumed nonzero mod m, m prime
        Integer t = 0, new_t = 1, r = m, new_r = a % m;
        if (new_r < 0) new_r += m;
        while (new_r != 0) {
            Integer q = r / new_r;
            Integer tmp = t - q * new_t;
            t = new_t;
            new_t = tmp;
            tmp = r - q * new_r;
            r = new_r;
            new_r = tmp;
        }
        require(r == 1, ErrorCode::BadArgument, "element not invertible mod p");
        if (t < 0) t += m;
        return t;
    }

    Kind kind_;
    std::uint64_t p_ = 0;
};

/// Serialization used everywhere: "p" for integers, "p/q" with q > 0 otherwise.
inline std::string coeff_to_string(const Coeff& c) {
    Integer num = boost::multiprecision::numerator(c);
    Integer den = boost::multiprecision::denominator(c);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

} // namespace resym
