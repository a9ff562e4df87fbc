#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "matrix.hpp"
#include "rng.hpp"

namespace sdc {

using BigInt = boost::multiprecision::cpp_int;

enum class GroupFamily {
    ku,    // permutations plus one transvection
    full,  // ku plus a sign change and a generator of the plane rotations; generates O_n(q)
};

inline std::string to_string(GroupFamily f) { return f == GroupFamily::ku ? "ku" : "full"; }

/// Orthogonal generators of a matrix group acting on row vectors of F_q^n.
class GeneratorSet {
  public:
    GeneratorSet(PrimeField f, std::size_t n, std::optional<BinaryVector4> u, std::vector<FqMatrix> gens,
                 std::vector<std::string> labels, GroupFamily family)
        : field_(f), n_(n), u_(std::move(u)), gens_(std::move(gens)), labels_(std::move(labels)), family_(family) {
        if (labels_.size() != gens_.size()) throw invalid_argument("generator labels do not match generators");
        for (const auto& g : gens_) {
            if (g.rows() != n || g.cols() != n) throw invalid_argument("generator has wrong dimension");
            if (!is_orthogonal(g)) throw invalid_argument("generator is not orthogonal");
        }
    }

    const PrimeField& field() const noexcept { return field_; }
    std::size_t dimension() const noexcept { return n_; }
    const std::optional<BinaryVector4>& transvection_support() const noexcept { return u_; }
    const std::vector<FqMatrix>& generators() const noexcept { return gens_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    GroupFamily family() const noexcept { return family_; }
    std::size_t size() const noexcept { return gens_.size(); }

  private:
    PrimeField field_;
    std::size_t n_;
    std::optional<BinaryVector4> u_;
    std::vector<FqMatrix> gens_;
    std::vector<std::string> labels_;
    GroupFamily family_;
};

namespace detail {

inline void add_permutation_generators(const PrimeField& f, std::size_t n, std::vector<FqMatrix>& gens,
                                       std::vector<std::string>& labels) {
    if (n < 2) return;
    std::vector<std::size_t> swap01(n), cycle(n);
    std::iota(swap01.begin(), swap01.end(), std::size_t{0});
    std::swap(swap01[0], swap01[1]);
    for (std::size_t i = 0; i < n; ++i) cycle[i] = (i + 1) % n;
    gens.push_back(permutation_matrix(swap01, f));
    labels.emplace_back("transposition(0 1)");
    if (n > 2) {
        gens.push_back(permutation_matrix(cycle, f));
        labels.emplace_back("cycle(0..n-1)");
    }
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> ps;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        ps.push_back(p);
        while (n % p == 0) n /= p;
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

inline FqMatrix matrix_power(FqMatrix base, std::uint64_t e) {
    FqMatrix r = FqMatrix::identity(base.field(), base.rows());
    while (e) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

}  // namespace detail

/// Generators of K_u = <P_n, T_u>: the transposition (0 1), the n-cycle, and the transvection
/// for the weight-4 support u (defaults to {0,1,2,3}). For n <= 3 only permutations are used.
inline GeneratorSet ku_generators(std::size_t n, const PrimeField& f, std::optional<BinaryVector4> u = std::nullopt) {
    if (n < 1) throw invalid_argument("group dimension must be at least 1");
    std::vector<FqMatrix> gens;
    std::vector<std::string> labels;
    detail::add_permutation_generators(f, n, gens, labels);
    if (n >= 4) {
        if (!u) u = BinaryVector4::leading(n);
        if (u->length() != n) throw invalid_argument("transvection support length differs from n");
        gens.push_back(transvection_matrix(*u, f));
        labels.emplace_back("transvection");
    } else if (u) {
        throw invalid_argument("a weight-4 support does not fit in n < 4");
    }
    return GeneratorSet(f, n, std::move(u), std::move(gens), std::move(labels), GroupFamily::ku);
}

/// Rotation [[c, s], [-s, c]] generating the cyclic group SO_2(q) of order q - legendre(-1).
inline FqMatrix plane_rotation_generator(const PrimeField& f) {
    const std::uint64_t q = f.q();
    const std::uint64_t order = legendre_symbol(q - 1, f) == 1 ? q - 1 : q + 1;
    const auto primes = detail::prime_factors(order);
    for (elem_t c = 0; c < q; ++c)
        for (elem_t s = 1; s < q; ++s) {
            if (f.add(f.mul(c, c), f.mul(s, s)) != 1) continue;
            auto r = FqMatrix::from_rows(f, {{c, s}, {-static_cast<std::int64_t>(s), c}});
            bool generates = true;
            for (auto p : primes)
                if (detail::matrix_power(r, order / p).is_identity()) {
                    generates = false;
                    break;
                }
            if (generates) return r;
        }
    throw internal_error("no generator of SO_2(q) found");
}

/// K_u generators plus diag(-1, 1, ..., 1), a generating rotation of the (0, 1) coordinate
/// plane and the reflection in e0 + e1 + e2. Unlike K_u this generates all of O_n(q); the
/// tests check the order against the closed formula over a grid of (n, q). It is the sampler
/// for n <= 3, where K_u degenerates to P_n.
inline GeneratorSet full_orthogonal_generators(std::size_t n, const PrimeField& f) {
    auto ku = ku_generators(n, f);
    if (!f.is_odd()) return ku;
    auto gens = ku.generators();
    auto labels = ku.labels();
    FqMatrix sign = FqMatrix::identity(f, n);
    sign(0, 0) = f.q() - 1;
    gens.push_back(sign);
    labels.emplace_back("sign(0)");
    if (n >= 2) {
        FqMatrix rot = FqMatrix::identity(f, n);
        const auto r = plane_rotation_generator(f);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) rot(i, j) = r(i, j);
        gens.push_back(rot);
        labels.emplace_back("rotation(0 1)");
    }
    if (n >= 3 && f.q() != 3) {
        // reflection in v = e0 + e1 + e2: I - 2 (v.v)^{-1} v^T v
        const elem_t c = f.neg(f.mul(2, f.inv(3)));
        FqMatrix refl = FqMatrix::identity(f, n);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) refl(i, j) = f.add(refl(i, j), c);
        gens.push_back(refl);
        labels.emplace_back("reflection(e0+e1+e2)");
    }
    return GeneratorSet(f, n, ku.transvection_support(), std::move(gens), std::move(labels), GroupFamily::full);
}

inline GeneratorSet make_generators(GroupFamily family, std::size_t n, const PrimeField& f) {
    return family == GroupFamily::ku ? ku_generators(n, f) : full_orthogonal_generators(n, f);
}

/// Product of `word_length` generators drawn uniformly with replacement.
inline FqMatrix random_orthogonal(const GeneratorSet& gens, std::size_t word_length, Rng& rng) {
    if (word_length == 0) throw invalid_argument("word_length must be at least 1");
    FqMatrix m = FqMatrix::identity(gens.field(), gens.dimension());
    if (gens.size() == 0) return m;
    for (std::size_t i = 0; i < word_length; ++i) m = m * gens.generators()[uniform_below(rng, gens.size())];
    return m;
}

inline FqMatrix random_orthogonal(const GeneratorSet& gens, std::size_t word_length, std::uint64_t seed) {
    Rng rng(seed);
    return random_orthogonal(gens, word_length, rng);
}

inline std::size_t default_word_length(std::size_t n) { return 8 * n; }

// Points of F_q^n are encoded as base-q integers, coordinate 0 least significant.

inline std::uint64_t encode_point(std::span<const elem_t> v, elem_t q) {
    std::uint64_t code = 0;
    for (std::size_t i = v.size(); i-- > 0;) code = code * q + v[i];
    return code;
}

inline Vector decode_point(std::uint64_t code, std::size_t n, elem_t q) {
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = static_cast<elem_t>(code % q);
        code /= q;
    }
    return v;
}

inline Vector unit_vector(std::size_t n, std::size_t i) {
    Vector v(n, 0);
    v[i] = 1;
    return v;
}

/// Orbit of v under right multiplication by the generated group, in increasing encoded order.
inline std::vector<Vector> orbit(std::span<const elem_t> v, const GeneratorSet& gens, std::size_t cap = 1u << 24) {
    if (v.size() != gens.dimension()) throw invalid_argument("orbit start vector has wrong length");
    const elem_t q = gens.field().q();
    std::unordered_set<std::uint64_t> seen;
    std::vector<Vector> frontier{Vector(v.begin(), v.end())};
    seen.insert(encode_point(v, q));
    std::vector<std::uint64_t> codes{encode_point(v, q)};
    while (!frontier.empty()) {
        std::vector<Vector> next;
        for (const auto& p : frontier)
            for (const auto& g : gens.generators()) {
                auto img = std::span<const elem_t>(p) * g;
                const auto c = encode_point(img, q);
                if (!seen.insert(c).second) continue;
                if (seen.size() > cap) throw cap_exceeded("orbit exceeds cap of " + std::to_string(cap) + " points");
                codes.push_back(c);
                next.push_back(std::move(img));
            }
        frontier = std::move(next);
    }
    std::sort(codes.begin(), codes.end());
    std::vector<Vector> out;
    out.reserve(codes.size());
    for (auto c : codes) out.push_back(decode_point(c, gens.dimension(), q));
    return out;
}

/// Every element of the generated group, by breadth-first closure. Only for small groups.
inline std::vector<FqMatrix> enumerate_group(const GeneratorSet& gens, std::size_t cap = 1u << 20) {
    struct Hash {
        std::size_t operator()(const std::vector<elem_t>& v) const noexcept {
            std::uint64_t h = 0;
            for (auto x : v) h = mix64(h ^ x);
            return static_cast<std::size_t>(h);
        }
    };
    const auto id = FqMatrix::identity(gens.field(), gens.dimension());
    std::unordered_set<std::vector<elem_t>, Hash> seen{id.entries()};
    std::vector<FqMatrix> elements{id};
    for (std::size_t i = 0; i < elements.size(); ++i)
        for (const auto& g : gens.generators()) {
            auto h = elements[i] * g;
            if (!seen.insert(h.entries()).second) continue;
            if (elements.size() >= cap) throw cap_exceeded("group has more than " + std::to_string(cap) + " elements");
            elements.push_back(std::move(h));
        }
    return elements;
}

namespace detail {

// Schreier-Sims over matrix group elements acting on F_q^n with base e_0, ..., e_{n-1}.
// A matrix fixing every e_i is the identity, so the base is always complete. Elements are
// orthogonal, so inverses are transposes.
class StabilizerChain {
  public:
    explicit StabilizerChain(const GeneratorSet& gens) : field_(gens.field()), n_(gens.dimension()), levels_(n_) {
        for (std::size_t l = 0; l < n_; ++l) {
            levels_[l].base = unit_vector(n_, l);
            add_point(levels_[l], levels_[l].base, FqMatrix::identity(field_, n_));
        }
        for (const auto& g : gens.generators()) {
            if (g.is_identity()) continue;
            const std::size_t depth = first_moved(g);
            strong_.push_back(g);
            for (std::size_t l = 0; l <= depth; ++l) levels_[l].gens.push_back(strong_.size() - 1);
        }
        for (auto& lv : levels_) close_orbit(lv);
        build();
    }

    BigInt order() const {
        BigInt o = 1;
        for (const auto& lv : levels_) o *= lv.points.size();
        return o;
    }

    std::vector<std::size_t> orbit_sizes() const {
        std::vector<std::size_t> s;
        for (const auto& lv : levels_) s.push_back(lv.points.size());
        return s;
    }

  private:
    struct Level {
        Vector base;
        std::vector<std::size_t> gens;
        std::unordered_map<std::uint64_t, std::uint32_t> index;
        std::vector<Vector> points;
        std::vector<FqMatrix> reps;       // base * reps[i] == points[i]
        std::vector<std::size_t> closed;  // generators already applied to points[i] for orbit closure
        std::vector<std::size_t> tested;  // generators whose Schreier generator at points[i] sifted
    };

    std::size_t first_moved(const FqMatrix& g) const {
        for (std::size_t l = 0; l < n_; ++l)
            if (std::span<const elem_t>(levels_[l].base) * g != levels_[l].base) return l;
        return n_;
    }

    void add_point(Level& lv, Vector p, FqMatrix rep) {
        lv.index.emplace(encode_point(p, field_.q()), static_cast<std::uint32_t>(lv.points.size()));
        lv.points.push_back(std::move(p));
        lv.reps.push_back(std::move(rep));
        lv.closed.push_back(0);
        lv.tested.push_back(0);
    }

    void close_orbit(Level& lv) {
        for (std::size_t i = 0; i < lv.points.size(); ++i) {
            for (std::size_t k = lv.closed[i]; k < lv.gens.size(); ++k) {
                const auto& g = strong_[lv.gens[k]];
                auto img = std::span<const elem_t>(lv.points[i]) * g;
                if (lv.index.count(encode_point(img, field_.q()))) continue;
                add_point(lv, std::move(img), lv.reps[i] * g);
            }
            lv.closed[i] = lv.gens.size();
        }
    }

    // Returns the residue and the level at which sifting stopped (n_ if it went all the way).
    std::pair<FqMatrix, std::size_t> sift(FqMatrix h, std::size_t from) const {
        for (std::size_t l = from; l < n_; ++l) {
            const auto& lv = levels_[l];
            const auto img = std::span<const elem_t>(lv.base) * h;
            auto it = lv.index.find(encode_point(img, field_.q()));
            if (it == lv.index.end()) return {std::move(h), l};
            h = h * lv.reps[it->second].transpose();
        }
        return {std::move(h), n_};
    }

    void build() {
        std::size_t i = n_;
        while (i-- > 0) {
            bool descended = false;
            Level& lv = levels_[i];
            for (std::size_t p = 0; p < lv.points.size() && !descended; ++p) {
                for (std::size_t k = lv.tested[p]; k < lv.gens.size(); ++k) {
                    const auto& s = strong_[lv.gens[k]];
                    const auto img = std::span<const elem_t>(lv.points[p]) * s;
                    const auto& back = lv.reps[lv.index.at(encode_point(img, field_.q()))];
                    auto [residue, j] = sift(lv.reps[p] * s * back.transpose(), i + 1);
                    lv.tested[p] = k + 1;
                    if (residue.is_identity()) continue;
                    if (j == n_) throw internal_error("non-identity element fixes the whole base");
                    strong_.push_back(std::move(residue));
                    for (std::size_t l = i + 1; l <= j; ++l) {
                        levels_[l].gens.push_back(strong_.size() - 1);
                        close_orbit(levels_[l]);
                    }
                    i = j + 1;  // resume at level j
                    descended = true;
                    break;
                }
            }
        }
    }

    PrimeField field_;
    std::size_t n_;
    std::vector<Level> levels_;
    std::vector<FqMatrix> strong_;
};

inline void check_action_size(const GeneratorSet& gens, std::uint64_t point_cap) {
    BigInt points = boost::multiprecision::pow(BigInt(gens.field().q()), static_cast<unsigned>(gens.dimension()));
    if (points > point_cap)
        throw cap_exceeded("action too large: q^n = " + points.str() + " exceeds point cap " + std::to_string(point_cap));
}

}  // namespace detail

inline constexpr std::uint64_t default_point_cap = std::uint64_t{1} << 24;

/// Exact order of the generated group via a stabilizer chain on the action on F_q^n.
inline BigInt group_order(const GeneratorSet& gens, std::uint64_t point_cap = default_point_cap) {
    detail::check_action_size(gens, point_cap);
    return detail::StabilizerChain(gens).order();
}

/// Basic orbit lengths of the stabilizer chain with base e_0, ..., e_{n-1}.
inline std::vector<std::size_t> basic_orbit_sizes(const GeneratorSet& gens, std::uint64_t point_cap = default_point_cap) {
    detail::check_action_size(gens, point_cap);
    return detail::StabilizerChain(gens).orbit_sizes();
}

/// |O_n(q)| for the identity form, q odd.
/// n = 2m+1: 2 q^{m^2} prod_{i=1..m} (q^{2i} - 1)
/// n = 2m:   2 q^{m(m-1)} (q^m - eps) prod_{i=1..m-1} (q^{2i} - 1), eps = legendre((-1)^m)
inline BigInt orthogonal_group_order_formula(std::size_t n, const PrimeField& f) {
    if (!f.is_odd()) throw invalid_argument("orthogonal group order formula needs odd q");
    if (n < 1) throw invalid_argument("dimension must be at least 1");
    const BigInt q = f.q();
    auto qpow = [&](std::size_t e) { return boost::multiprecision::pow(q, static_cast<unsigned>(e)); };
    const std::size_t m = n / 2;
    BigInt order = 2;
    if (n % 2 == 1) {
        order *= qpow(m * m);
        for (std::size_t i = 1; i <= m; ++i) order *= qpow(2 * i) - 1;
    } else {
        const int eps = legendre_symbol(m % 2 ? f.q() - 1 : 1, f);
        order *= qpow(m * (m - 1));
        order *= qpow(m) - eps;
        for (std::size_t i = 1; i < m; ++i) order *= qpow(2 * i) - 1;
    }
    return order;
}

struct GroupOrderReport {
    std::size_t n;
    elem_t q;
    BigInt ku_order;
    BigInt on_order;
    BigInt index;
};

/// Orders of K_u and O_n(q) and the index between them. Reports the index; asserts nothing about it.
inline GroupOrderReport conjecture_probe(std::size_t n, const PrimeField& f, std::uint64_t point_cap = default_point_cap) {
    const auto ku = group_order(ku_generators(n, f), point_cap);
    const auto on = orthogonal_group_order_formula(n, f);
    if (on % ku != 0) throw internal_error("|K_u| = " + ku.str() + " does not divide |O_n(q)| = " + on.str());
    return {n, f.q(), ku, on, on / ku};
}

}  // namespace sdc
