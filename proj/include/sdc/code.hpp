#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "matrix.hpp"

namespace sdc {

using BigInt = boost::multiprecision::cpp_int;

/// Linear [n, k] code over GF(q) given by a full-rank k x n generator matrix.
class LinearCode {
  public:
    explicit LinearCode(FqMatrix generator) : g_(std::move(generator)) {
        if (sdc::rank(g_) != g_.rows()) throw invalid_argument("generator matrix is not of full row rank");
    }

    /// Code spanned by the rows of `m`, which may be dependent. The basis is the reduced echelon form.
    static LinearCode spanned_by(const FqMatrix& m) {
        auto e = row_echelon(m);
        if (e.rank() == 0) return LinearCode(FqMatrix(m.field(), 0, m.cols()));
        return LinearCode(std::move(e.reduced));
    }

    const PrimeField& field() const noexcept { return g_.field(); }
    const FqMatrix& generator() const noexcept { return g_; }
    std::size_t length() const noexcept { return g_.cols(); }
    std::size_t dimension() const noexcept { return g_.rows(); }

    bool contains(std::span<const elem_t> v) const {
        if (v.size() != length()) return false;
        FqMatrix m = g_;
        m.append_row(v);
        return sdc::rank(m) == dimension();
    }

  private:
    FqMatrix g_;
};

inline bool same_code(const LinearCode& a, const LinearCode& b) {
    if (a.length() != b.length() || a.dimension() != b.dimension() || !(a.field() == b.field())) return false;
    return rank(vstack(a.generator(), b.generator())) == a.dimension();
}

/// True when every codeword of `sub` lies in `super`.
inline bool is_subcode(const LinearCode& sub, const LinearCode& super) {
    if (sub.length() != super.length()) return false;
    return rank(vstack(super.generator(), sub.generator())) == super.dimension();
}

struct SystematicForm {
    LinearCode code;                              // generator (I_k | A)
    std::vector<std::size_t> column_permutation;  // new column j is old column column_permutation[j]
    FqMatrix redundancy() const {
        const auto& g = code.generator();
        return g.submatrix(0, g.rows(), g.rows(), g.cols() - g.rows());
    }
};

/// Row-reduce to (I_k | A), moving the pivot columns to the front when the leading k columns
/// are not an information set.
inline SystematicForm systematic_form(const LinearCode& c) {
    auto e = row_echelon(c.generator());
    std::vector<std::size_t> perm = e.pivots;
    std::vector<bool> is_pivot(c.length(), false);
    for (auto p : perm) is_pivot[p] = true;
    for (std::size_t j = 0; j < c.length(); ++j)
        if (!is_pivot[j]) perm.push_back(j);
    return {LinearCode(e.reduced.select_columns(perm)), std::move(perm)};
}

inline LinearCode dual(const LinearCode& c) {
    if (c.dimension() == 0) return LinearCode(FqMatrix::identity(c.field(), c.length()));
    auto h = null_space(c.generator());
    if (h.rows() == 0) return LinearCode(FqMatrix(c.field(), 0, c.length()));
    return LinearCode(std::move(h));
}

inline bool is_self_orthogonal(const LinearCode& c) {
    if (c.dimension() == 0) return true;
    return (c.generator() * c.generator().transpose()).is_zero();
}

inline bool is_self_dual(const LinearCode& c) { return 2 * c.dimension() == c.length() && is_self_orthogonal(c); }

// Codeword enumeration ---------------------------------------------------------

inline constexpr std::uint64_t default_enumeration_cap = 100'000'000;

namespace detail {

inline BigInt code_size(const LinearCode& c) {
    return boost::multiprecision::pow(BigInt(c.field().q()), static_cast<unsigned>(c.dimension()));
}

inline void check_enumeration_cap(const LinearCode& c, std::uint64_t cap) {
    if (code_size(c) > cap)
        throw cap_exceeded("enumeration too large: q^k = " + code_size(c).str() + " exceeds cap " + std::to_string(cap));
}

// Visits the weight of every codeword m G whose last message coordinate lies in [top_begin, top_end).
// The remaining coordinates run through a q-ary modular Gray code, so consecutive codewords differ
// by adding exactly one generator row and the weight is updated on that row's support only.
template <class Visit>
void visit_weights(const FqMatrix& g, elem_t top_begin, elem_t top_end, Visit&& visit) {
    const auto& f = g.field();
    const std::size_t k = g.rows(), n = g.cols();
    if (k == 0) {
        visit(std::size_t{0});
        return;
    }
    std::vector<std::vector<std::size_t>> support(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (g(i, j)) support[i].push_back(j);

    const std::size_t free_rows = k - 1;
    for (elem_t top = top_begin; top < top_end; ++top) {
        Vector word(n);
        for (std::size_t j = 0; j < n; ++j) word[j] = f.mul(top, g(k - 1, j));
        std::size_t weight = hamming_weight(word);
        visit(weight);
        std::vector<elem_t> digits(free_rows, 0);
        while (true) {
            // increment the base-q counter; the lowest digit that does not wrap is the Gray step
            std::size_t j = 0;
            while (j < free_rows && digits[j] == f.q() - 1) digits[j++] = 0;
            if (j == free_rows) break;
            ++digits[j];
            const auto row = g.row(j);
            for (auto p : support[j]) {
                const elem_t old = word[p];
                const elem_t now = f.add(old, row[p]);
                word[p] = now;
                weight += (now != 0);
                weight -= (old != 0);
            }
            visit(weight);
        }
    }
}

// Splits the top message coordinate over worker threads. Each worker owns its accumulator and
// the reduction runs in worker order, so the result does not depend on the thread count.
template <class Acc, class Visit, class Merge>
Acc parallel_visit(const FqMatrix& g, Acc init, Visit visit, Merge merge, unsigned threads) {
    const elem_t q = g.field().q();
    if (g.rows() == 0 || threads <= 1 || q < 2) {
        Acc acc = init;
        visit_weights(g, 0, g.rows() == 0 ? 1 : q, [&](std::size_t w) { visit(acc, w); });
        return acc;
    }
    threads = std::min<unsigned>(threads, q);
    std::vector<Acc> parts(threads, init);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        const elem_t b = static_cast<elem_t>(std::uint64_t{q} * t / threads);
        const elem_t e = static_cast<elem_t>(std::uint64_t{q} * (t + 1) / threads);
        pool.emplace_back([&, t, b, e] { visit_weights(g, b, e, [&](std::size_t w) { visit(parts[t], w); }); });
    }
    for (auto& th : pool) th.join();
    Acc acc = init;
    for (auto& p : parts) merge(acc, p);
    return acc;
}

inline unsigned default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace detail

/// Coefficients A_0, ..., A_n: the number of codewords of each Hamming weight.
struct WeightEnumerator {
    std::vector<BigInt> coefficients;

    std::size_t length() const noexcept { return coefficients.empty() ? 0 : coefficients.size() - 1; }
    BigInt total() const {
        BigInt s = 0;
        for (const auto& a : coefficients) s += a;
        return s;
    }
    /// Smallest i >= 1 with A_i > 0, or 0 when the code is {0}.
    std::size_t minimum_distance() const {
        for (std::size_t i = 1; i < coefficients.size(); ++i)
            if (coefficients[i] > 0) return i;
        return 0;
    }
    friend bool operator==(const WeightEnumerator&, const WeightEnumerator&) = default;
};

inline WeightEnumerator weight_enumerator(const LinearCode& c, std::uint64_t cap = default_enumeration_cap,
                                          unsigned threads = detail::default_threads()) {
    detail::check_enumeration_cap(c, cap);
    using Counts = std::vector<std::uint64_t>;
    auto counts = detail::parallel_visit(
        c.generator(), Counts(c.length() + 1, 0), [](Counts& acc, std::size_t w) { ++acc[w]; },
        [](Counts& acc, const Counts& part) {
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += part[i];
        },
        threads);
    WeightEnumerator we;
    for (auto x : counts) we.coefficients.emplace_back(x);
    return we;
}

/// Minimum nonzero weight by enumerating all q^k codewords. The reference engine.
inline std::size_t min_distance_exhaustive(const LinearCode& c, std::uint64_t cap = default_enumeration_cap,
                                           unsigned threads = detail::default_threads()) {
    detail::check_enumeration_cap(c, cap);
    if (c.dimension() == 0) return 0;
    constexpr auto none = std::numeric_limits<std::size_t>::max();
    return detail::parallel_visit(
        c.generator(), none,
        [](std::size_t& best, std::size_t w) {
            if (w > 0 && w < best) best = w;
        },
        [](std::size_t& acc, std::size_t part) { acc = std::min(acc, part); }, threads);
}

/// Enumerator of the dual code by the MacWilliams identity
///   B_j = q^{-k} sum_i A_i K_j(i),  K_j(i) = sum_s (-1)^s (q-1)^{j-s} C(i, s) C(n-i, j-s).
inline WeightEnumerator macwilliams_transform(const WeightEnumerator& w, elem_t q, std::size_t k, std::size_t n) {
    if (w.coefficients.size() != n + 1) throw invalid_argument("enumerator length does not match n");
    const BigInt size = boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(k));
    if (w.total() != size) throw invalid_argument("enumerator coefficients do not sum to q^k");

    std::vector<std::vector<BigInt>> binom(n + 1, std::vector<BigInt>(n + 1, 0));
    for (std::size_t a = 0; a <= n; ++a) {
        binom[a][0] = 1;
        for (std::size_t b = 1; b <= a; ++b) binom[a][b] = binom[a - 1][b - 1] + (b <= a - 1 ? binom[a - 1][b] : BigInt(0));
    }
    std::vector<BigInt> qm1(n + 1, 1);
    for (std::size_t e = 1; e <= n; ++e) qm1[e] = qm1[e - 1] * (q - 1);

    WeightEnumerator out;
    out.coefficients.resize(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        BigInt sum = 0;
        for (std::size_t i = 0; i <= n; ++i) {
            if (w.coefficients[i] == 0) continue;
            BigInt kj = 0;
            for (std::size_t s = 0; s <= std::min(i, j); ++s) {
                if (j - s > n - i) continue;
                BigInt term = qm1[j - s] * binom[i][s] * binom[n - i][j - s];
                if (s % 2) kj -= term;
                else kj += term;
            }
            sum += w.coefficients[i] * kj;
        }
        if (sum % size != 0 || sum < 0)
            throw invalid_argument("MacWilliams transform is not a non-negative integer: inconsistent enumerator");
        out.coefficients[j] = sum / size;
    }
    return out;
}

// MDS ----------------------------------------------------------------------------

namespace detail {

inline elem_t small_determinant(std::vector<elem_t>& a, std::size_t s, const PrimeField& f) {
    elem_t det = 1;
    for (std::size_t c = 0; c < s; ++c) {
        std::size_t p = c;
        while (p < s && a[p * s + c] == 0) ++p;
        if (p == s) return 0;
        if (p != c)
            for (std::size_t j = 0; j < s; ++j) std::swap(a[p * s + j], a[c * s + j]);
        det = f.mul(det, a[c * s + c]);
        const elem_t inv = f.inv(a[c * s + c]);
        for (std::size_t i = c + 1; i < s; ++i) {
            if (a[i * s + c] == 0) continue;
            const elem_t factor = f.mul(a[i * s + c], inv);
            for (std::size_t j = c; j < s; ++j) a[i * s + j] = f.sub(a[i * s + j], f.mul(factor, a[c * s + j]));
        }
    }
    return det;
}

// Calls visit(indices) for each s-subset of {0..n-1} in lexicographic order; stops when visit returns false.
template <class Visit>
bool for_each_subset(std::size_t n, std::size_t s, Visit&& visit) {
    std::vector<std::size_t> idx(s);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    while (true) {
        if (!visit(std::span<const std::size_t>(idx))) return false;
        std::size_t i = s;
        while (i > 0 && idx[i - 1] == n - s + i - 1) --i;
        if (i == 0) return true;
        ++idx[i - 1];
        for (std::size_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace detail

/// True iff every square submatrix of `a` is nonsingular. For a code (I_k | A) this is
/// equivalent to meeting the Singleton bound d = n - k + 1. Small minors are checked first.
inline bool all_minors_nonsingular(const FqMatrix& a) {
    const auto& f = a.field();
    const std::size_t smax = std::min(a.rows(), a.cols());
    std::vector<elem_t> buf;
    for (std::size_t s = 1; s <= smax; ++s) {
        buf.resize(s * s);
        const bool ok = detail::for_each_subset(a.rows(), s, [&](std::span<const std::size_t> rows) {
            return detail::for_each_subset(a.cols(), s, [&](std::span<const std::size_t> cols) {
                for (std::size_t i = 0; i < s; ++i)
                    for (std::size_t j = 0; j < s; ++j) buf[i * s + j] = a(rows[i], cols[j]);
                return detail::small_determinant(buf, s, f) != 0;
            });
        });
        if (!ok) return false;
    }
    return true;
}

inline bool is_mds_systematic(const LinearCode& c) {
    if (c.dimension() == 0 || c.dimension() == c.length()) return true;
    return all_minors_nonsingular(systematic_form(c).redundancy());
}

// Classification of self-dual [2n, n, d] codes -------------------------------------

enum class Classification { mds, almost_mds, other };

inline std::string to_string(Classification c) {
    switch (c) {
        case Classification::mds: return "MDS";
        case Classification::almost_mds: return "almost-MDS";
        default: return "other";
    }
}

inline Classification classification_from_string(const std::string& s) {
    if (s == "MDS") return Classification::mds;
    if (s == "almost-MDS") return Classification::almost_mds;
    if (s == "other") return Classification::other;
    throw invalid_argument("unknown classification '" + s + "'");
}

struct ClassifyResult {
    Classification kind;
    std::size_t singleton_slack;  // n + 1 - d
};

/// Classifies a self-dual code of length 2n with minimum distance d.
inline ClassifyResult classify(std::size_t length, std::size_t d) {
    if (length % 2) throw invalid_argument("self-dual codes have even length");
    const std::size_t half = length / 2;
    if (d > half + 1)
        throw internal_error("minimum distance " + std::to_string(d) + " violates the Singleton bound for length " +
                             std::to_string(length));
    const std::size_t slack = half + 1 - d;
    const auto kind = slack == 0 ? Classification::mds : slack == 1 ? Classification::almost_mds : Classification::other;
    return {kind, slack};
}

inline ClassifyResult classify(const LinearCode& c, std::size_t d) {
    if (!is_self_dual(c)) throw invalid_argument("classification applies to self-dual codes");
    return classify(c.length(), d);
}

// Text format: "q n k" then the n+1 coefficients.
inline std::string to_text(const WeightEnumerator& w, elem_t q, std::size_t k) {
    std::string s = std::to_string(q) + ' ' + std::to_string(w.length()) + ' ' + std::to_string(k) + '\n';
    for (std::size_t i = 0; i < w.coefficients.size(); ++i) {
        if (i) s += ' ';
        s += w.coefficients[i].str();
    }
    return s + '\n';
}

struct EnumeratorFile {
    elem_t q;
    std::size_t n, k;
    WeightEnumerator enumerator;
};

inline EnumeratorFile enumerator_from_text(std::istream& in) {
    EnumeratorFile e{};
    std::uint64_t q;
    if (!(in >> q >> e.n >> e.k)) throw invalid_argument("enumerator text: bad header");
    e.q = static_cast<elem_t>(q);
    e.enumerator.coefficients.resize(e.n + 1);
    for (auto& a : e.enumerator.coefficients) {
        std::string tok;
        if (!(in >> tok)) throw invalid_argument("enumerator text: too few coefficients");
        try {
            a = BigInt(tok);
        } catch (const std::exception&) {
            throw invalid_argument("enumerator text: bad coefficient '" + tok + "'");
        }
    }
    return e;
}

}  // namespace sdc
