#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace sdc {

using elem_t = std::uint32_t;

/// Arithmetic in GF(q) for a prime q <= 2^20. Elements are least non-negative residues,
/// so a product of two elements always fits in 64 bits.
class PrimeField {
  public:
    static constexpr std::uint64_t max_modulus = std::uint64_t{1} << 20;

    explicit PrimeField(std::uint64_t q) : q_(static_cast<elem_t>(q)) {
        if (q < 2 || q > max_modulus)
            throw invalid_argument("field modulus " + std::to_string(q) + " outside [2, 2^20]");
        if (!is_prime(q)) throw invalid_argument("field modulus " + std::to_string(q) + " is not prime");
    }

    static constexpr bool is_prime(std::uint64_t n) noexcept {
        if (n < 2) return false;
        if (n % 2 == 0) return n == 2;
        for (std::uint64_t d = 3; d * d <= n; d += 2)
            if (n % d == 0) return false;
        return true;
    }

    elem_t q() const noexcept { return q_; }
    bool is_odd() const noexcept { return q_ != 2; }

    elem_t reduce(std::int64_t x) const noexcept {
        auto r = x % static_cast<std::int64_t>(q_);
        return static_cast<elem_t>(r < 0 ? r + q_ : r);
    }
    elem_t add(elem_t a, elem_t b) const noexcept {
        elem_t s = a + b;
        return s >= q_ ? s - q_ : s;
    }
    elem_t sub(elem_t a, elem_t b) const noexcept { return a >= b ? a - b : a + q_ - b; }
    elem_t neg(elem_t a) const noexcept { return a == 0 ? 0 : q_ - a; }
    elem_t mul(elem_t a, elem_t b) const noexcept {
        return static_cast<elem_t>(std::uint64_t{a} * b % q_);
    }

    elem_t pow(elem_t base, std::uint64_t e) const noexcept {
        elem_t r = 1 % q_;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    elem_t inv(elem_t a) const {
        if (a % q_ == 0) throw invalid_argument("zero has no inverse in GF(" + std::to_string(q_) + ")");
        return pow(a, q_ - 2);
    }

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

  private:
    elem_t q_;
};

/// (q-1)/2 as an element; the scalar of the transvection for odd q.
inline elem_t theta(const PrimeField& f) {
    if (!f.is_odd()) throw invalid_argument("theta is undefined for q = 2");
    return (f.q() - 1) / 2;
}

/// Euler's criterion: +1 for a nonzero square, -1 for a non-square, 0 for zero.
inline int legendre_symbol(elem_t x, const PrimeField& f) {
    if (!f.is_odd()) throw invalid_argument("Legendre symbol needs an odd prime");
    x %= f.q();
    if (x == 0) return 0;
    return f.pow(x, (f.q() - 1) / 2) == 1 ? 1 : -1;
}

/// Smallest alpha with alpha^2 = -1. Exists iff q = 1 (mod 4).
inline elem_t sqrt_minus_one(const PrimeField& f) {
    if (f.q() % 4 != 1)
        throw invalid_argument("no square root of -1 in GF(" + std::to_string(f.q()) + "): q is not 1 mod 4");
    const elem_t target = f.q() - 1;
    for (elem_t a = 1; a < f.q(); ++a)
        if (f.mul(a, a) == target) return a;
    throw internal_error("square root of -1 not found although q = 1 mod 4");
}

/// Deterministic (alpha, beta) with alpha^2 + beta^2 = -1. For q = 1 (mod 4) this is
/// (sqrt_minus_one, 0); otherwise the lexicographically smallest pair with alpha <= beta.
inline std::pair<elem_t, elem_t> two_squares_minus_one(const PrimeField& f) {
    if (!f.is_odd()) throw invalid_argument("two_squares_minus_one needs an odd prime");
    if (f.q() % 4 == 1) return {sqrt_minus_one(f), 0};
    const elem_t q = f.q();
    const elem_t target = q - 1;
    for (elem_t a = 0; a < q; ++a) {
        const elem_t rest = f.sub(target, f.mul(a, a));
        for (elem_t b = a; b < q; ++b)
            if (f.mul(b, b) == rest) return {a, b};
    }
    throw internal_error("no solution of a^2 + b^2 = -1; impossible for an odd prime");
}

/// Every ordered (alpha, beta) with alpha^2 + beta^2 = -1, in lexicographic order. O(q) via a
/// square-root table.
inline std::vector<std::pair<elem_t, elem_t>> all_two_squares_minus_one(const PrimeField& f) {
    if (!f.is_odd()) throw invalid_argument("all_two_squares_minus_one needs an odd prime");
    const elem_t q = f.q();
    std::vector<std::vector<elem_t>> roots(q);
    for (elem_t x = 0; x < q; ++x) roots[f.mul(x, x)].push_back(x);
    std::vector<std::pair<elem_t, elem_t>> out;
    for (elem_t a = 0; a < q; ++a)
        for (elem_t b : roots[f.sub(q - 1, f.mul(a, a))]) out.emplace_back(a, b);
    return out;
}

struct FourSquares {
    elem_t a, b, c, d;
    friend bool operator==(const FourSquares&, const FourSquares&) = default;
};

/// Non-trivial (a, b, c, d) with a^2+b^2+c^2+d^2 = 0, built as (alpha, beta, 1, 0).
inline FourSquares four_squares_zero(const PrimeField& f) {
    auto [a, b] = two_squares_minus_one(f);
    return {a, b, 1, 0};
}

}  // namespace sdc
