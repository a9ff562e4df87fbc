#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "code.hpp"
#include "distance.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "matrix.hpp"
#include "rng.hpp"

namespace sdc {

// Row convention for every extension below: rows are counted from 1, odd rows take the first
// pattern and even rows the second, as in the displayed generator matrices. All pattern inner
// products vanish identically, so any pairing works; this one is fixed for reproducibility.

enum class ExtensionKind { two_col, four_col, two_plus_two, split };

inline std::string to_string(ExtensionKind k) {
    switch (k) {
        case ExtensionKind::two_col: return "extend-two";
        case ExtensionKind::four_col: return "extend-four";
        case ExtensionKind::two_plus_two: return "extend-2+2";
        default: return "split";
    }
}

/// Constants and per-row scalars of an extension.
/// two_col / split: a with a^2 = -1. four_col: (a, b, c, d) with a^2+b^2+c^2+d^2 = 0.
/// two_plus_two: a and c with a^2 = c^2 = -1.
struct ExtensionPattern {
    ExtensionKind kind = ExtensionKind::two_col;
    std::vector<elem_t> constants;
    std::vector<elem_t> lambdas;

    void validate(const PrimeField& f, std::size_t rows) const {
        const elem_t minus_one = f.q() - 1;
        auto sq = [&](elem_t x) { return f.mul(x % f.q(), x % f.q()); };
        switch (kind) {
            case ExtensionKind::two_col:
            case ExtensionKind::split:
                if (constants.size() != 1 || sq(constants[0]) != minus_one)
                    throw invalid_argument("two-coordinate extension needs a with a^2 = -1");
                break;
            case ExtensionKind::four_col: {
                if (constants.size() != 4) throw invalid_argument("four-coordinate extension needs (a, b, c, d)");
                elem_t s = 0;
                for (auto x : constants) s = f.add(s, sq(x));
                if (s != 0) throw invalid_argument("four-coordinate extension needs a^2 + b^2 + c^2 + d^2 = 0");
                break;
            }
            case ExtensionKind::two_plus_two:
                if (constants.size() != 2 || sq(constants[0]) != minus_one || sq(constants[1]) != minus_one)
                    throw invalid_argument("two-plus-two extension needs a, c with a^2 = c^2 = -1");
                break;
        }
        if (lambdas.size() != rows)
            throw invalid_argument("pattern has " + std::to_string(lambdas.size()) + " lambdas for " + std::to_string(rows) +
                                   " rows");
    }
};

/// The minimum-weight subcode is the whole code, so the split extension degenerates.
class degenerate_split : public error {
  public:
    using error::error;
};

namespace detail {

inline void require_self_dual(const LinearCode& c, const char* who) {
    if (!is_self_dual(c)) throw invalid_argument(std::string(who) + ": input code is not self-dual");
}

// Appends (lambda a, lambda) for odd rows, (-lambda, lambda a) for even rows (1-indexed).
inline void append_two_pattern(const PrimeField& f, Vector& row, std::size_t index1, elem_t a, elem_t lambda) {
    if (index1 % 2 == 1) {
        row.push_back(f.mul(lambda, a));
        row.push_back(lambda);
    } else {
        row.push_back(f.neg(lambda));
        row.push_back(f.mul(lambda, a));
    }
}

inline std::vector<elem_t> reduced(const PrimeField& f, std::vector<elem_t> v) {
    for (auto& x : v) x %= f.q();
    return v;
}

}  // namespace detail

/// Self-orthogonal [2n+2, n, >= d] code: each row of the self-dual [2n, n] input gains two coordinates.
inline LinearCode extend_two(const LinearCode& c, const ExtensionPattern& pattern) {
    detail::require_self_dual(c, "extend_two");
    const auto& f = c.field();
    if (pattern.kind != ExtensionKind::two_col) throw invalid_argument("extend_two needs a two-column pattern");
    pattern.validate(f, c.dimension());
    const elem_t a = pattern.constants[0] % f.q();
    const auto lambdas = detail::reduced(f, pattern.lambdas);
    FqMatrix g(f, 0, c.length() + 2);
    for (std::size_t i = 0; i < c.dimension(); ++i) {
        Vector row = c.generator().row_vector(i);
        detail::append_two_pattern(f, row, i + 1, a, lambdas[i]);
        g.append_row(row);
    }
    LinearCode out(std::move(g));
    if (!is_self_orthogonal(out)) throw internal_error("two-coordinate extension is not self-orthogonal");
    return out;
}

inline ExtensionPattern two_col_pattern(const PrimeField& f, std::vector<elem_t> lambdas) {
    return {ExtensionKind::two_col, {sqrt_minus_one(f)}, std::move(lambdas)};
}

/// Rows of the self-dual input extended by lambda(a, b, c, d) / lambda(-b, a, -d, c); without x.
inline LinearCode four_col_rows(const LinearCode& c, const ExtensionPattern& pattern) {
    detail::require_self_dual(c, "extend_four");
    const auto& f = c.field();
    if (pattern.kind != ExtensionKind::four_col) throw invalid_argument("extend_four needs a four-column pattern");
    pattern.validate(f, c.dimension());
    const auto k = detail::reduced(f, pattern.constants);
    const auto lambdas = detail::reduced(f, pattern.lambdas);
    FqMatrix g(f, 0, c.length() + 4);
    for (std::size_t i = 0; i < c.dimension(); ++i) {
        Vector row = c.generator().row_vector(i);
        const elem_t l = lambdas[i];
        if ((i + 1) % 2 == 1) {
            for (auto x : {k[0], k[1], k[2], k[3]}) row.push_back(f.mul(l, x));
        } else {
            for (auto x : {f.neg(k[1]), k[0], f.neg(k[3]), k[2]}) row.push_back(f.mul(l, x));
        }
        g.append_row(row);
    }
    return LinearCode(std::move(g));
}

namespace detail {

inline void check_extension_vector(const LinearCode& rows, std::span<const elem_t> x) {
    const auto& f = rows.field();
    if (x.size() != rows.length()) throw invalid_argument("no valid x supplied: wrong length");
    for (std::size_t i = 0; i < rows.dimension(); ++i)
        if (dot(f, rows.generator().row(i), x) != 0)
            throw invalid_argument("no valid x supplied: x is not in the dual of the extended code");
    if (dot(f, x, x) != 0) throw invalid_argument("no valid x supplied: x is not isotropic");
    if (rows.contains(x)) throw invalid_argument("no valid x supplied: x lies in the extended code");
}

}  // namespace detail

/// Self-orthogonal [2n+4, n+1] code: four-column extension plus the extra row x.
inline LinearCode extend_four(const LinearCode& c, const ExtensionPattern& pattern, std::span<const elem_t> x) {
    const auto rows = four_col_rows(c, pattern);
    detail::check_extension_vector(rows, x);
    FqMatrix g = rows.generator();
    g.append_row(x);
    LinearCode out(std::move(g));
    if (!is_self_orthogonal(out)) throw internal_error("four-coordinate extension is not self-orthogonal");
    return out;
}

/// The n x (n+2) matrix of A-rows extended by (lambda a, lambda) / (-lambda, lambda a): the
/// system that x must be orthogonal to in the two-plus-two extension.
inline FqMatrix two_plus_two_a_rows(const LinearCode& c, const ExtensionPattern& pattern) {
    detail::require_self_dual(c, "extend_two_plus_two");
    const auto& f = c.field();
    if (pattern.kind != ExtensionKind::two_plus_two) throw invalid_argument("extend_two_plus_two needs a 2+2 pattern");
    const std::size_t n = c.dimension();
    pattern.validate(f, n + 1);
    const auto& g = c.generator();
    if (!g.submatrix(0, 0, n, n).is_identity()) throw invalid_argument("extend_two_plus_two needs a generator (I_n | A)");
    const elem_t a = pattern.constants[0] % f.q();
    FqMatrix rows(f, 0, n + 2);
    for (std::size_t i = 0; i < n; ++i) {
        Vector row(g.row(i).begin() + static_cast<std::ptrdiff_t>(n), g.row(i).end());
        detail::append_two_pattern(f, row, i + 1, a, pattern.lambdas[i] % f.q());
        rows.append_row(row);
    }
    return rows;
}

/// Self-orthogonal [2n+4, n+1] code from (I_n | A): the A-rows gain (lambda a, lambda, lambda c, lambda)
/// on odd rows and (-lambda, lambda a, -lambda, lambda c) on even rows; the last row is
/// (0 | x | -lambda_{n+1}, lambda_{n+1} c) with x of length n+2, isotropic and orthogonal to
/// the extended A-rows.
inline LinearCode extend_two_plus_two(const LinearCode& c, const ExtensionPattern& pattern, std::span<const elem_t> x) {
    const auto arows = two_plus_two_a_rows(c, pattern);
    const auto& f = c.field();
    const std::size_t n = c.dimension();
    if (x.size() != n + 2) throw invalid_argument("no valid x supplied: x must have length n + 2");
    for (std::size_t i = 0; i < n; ++i)
        if (dot(f, arows.row(i), x) != 0) throw invalid_argument("no valid x supplied: x is not orthogonal to the A-rows");
    if (dot(f, x, x) != 0) throw invalid_argument("no valid x supplied: x is not isotropic");
    if (hamming_weight(x) == 0) throw invalid_argument("no valid x supplied: x is zero");

    const elem_t cc = pattern.constants[1] % f.q();
    FqMatrix g(f, 0, 2 * n + 4);
    for (std::size_t i = 0; i < n; ++i) {
        Vector row = c.generator().row_vector(i);
        const elem_t l = pattern.lambdas[i] % f.q();
        row.push_back(arows(i, n));
        row.push_back(arows(i, n + 1));
        detail::append_two_pattern(f, row, i + 1, cc, l);
        g.append_row(row);
    }
    Vector last(n, 0);
    last.insert(last.end(), x.begin(), x.end());
    const elem_t l = pattern.lambdas[n] % f.q();
    last.push_back(f.neg(l));
    last.push_back(f.mul(l, cc));
    g.append_row(last);
    LinearCode out(std::move(g));
    if (!is_self_orthogonal(out)) throw internal_error("two-plus-two extension is not self-orthogonal");
    return out;
}

/// Nonzero isotropic vectors in the row space of `basis`, one per isotropic line, when that space
/// has dimension <= 2 (the case arising in the two-plus-two extension).
inline std::vector<Vector> isotropic_lines(const FqMatrix& basis) {
    const auto& f = basis.field();
    if (basis.rows() > 2) throw invalid_argument("isotropic_lines handles spaces of dimension at most 2");
    std::vector<Vector> out;
    if (basis.rows() == 0) return out;
    const Vector w1 = basis.row_vector(0);
    if (dot(f, w1, w1) == 0) out.push_back(w1);
    if (basis.rows() == 1) return out;
    const Vector w2 = basis.row_vector(1);
    // x = s w1 + w2
    for (elem_t s = 0; s < f.q(); ++s) {
        Vector x(w1.size());
        for (std::size_t j = 0; j < x.size(); ++j) x[j] = f.add(f.mul(s, w1[j]), w2[j]);
        if (dot(f, x, x) == 0) out.push_back(std::move(x));
    }
    return out;
}

/// Candidate x vectors for the two-plus-two extension: the isotropic lines of the orthogonal
/// complement of the extended A-rows.
inline std::vector<Vector> two_plus_two_candidates(const LinearCode& c, const ExtensionPattern& pattern) {
    return isotropic_lines(null_space(two_plus_two_a_rows(c, pattern)));
}

/// Random isotropic vector of dual(code) outside code, or nullopt after `attempts` draws.
inline std::optional<Vector> random_isotropic_outside(const LinearCode& code, Rng& rng, std::size_t attempts) {
    const auto& f = code.field();
    const auto d = dual(code);
    if (d.dimension() == code.dimension()) return std::nullopt;
    for (std::size_t t = 0; t < attempts; ++t) {
        Vector v(code.length(), 0);
        for (std::size_t i = 0; i < d.dimension(); ++i) {
            const elem_t s = static_cast<elem_t>(uniform_below(rng, f.q()));
            if (s == 0) continue;
            const auto row = d.generator().row(i);
            for (std::size_t j = 0; j < v.size(); ++j) v[j] = f.add(v[j], f.mul(s, row[j]));
        }
        if (hamming_weight(v) == 0 || dot(f, v, v) != 0) continue;
        if (!code.contains(v)) return v;
    }
    return std::nullopt;
}

struct SplitExtension {
    LinearCode code;
    std::size_t base_distance;    // d of the input code
    std::size_t subcode_dimension;  // dimension of D, the span of the minimum-weight codewords
};

/// Split C = D + E with D spanned by the minimum-weight codewords. Rows of a basis of D are padded
/// with (0, 0) and rows of a complement E take the two-column pattern; the result is a
/// self-orthogonal [2n+2, n] code. Throws degenerate_split when D = C.
inline SplitExtension split_extend(const LinearCode& c, const ExtensionPattern& pattern, std::uint64_t work_budget = 0) {
    detail::require_self_dual(c, "split_extend");
    const auto& f = c.field();
    if (pattern.kind != ExtensionKind::split && pattern.kind != ExtensionKind::two_col)
        throw invalid_argument("split_extend needs a two-column pattern");
    const auto dres = min_distance_bz(c, {work_budget, 0});
    if (!dres.is_exact()) throw cap_exceeded("split_extend: minimum distance not resolved within the work budget");
    const std::size_t d = dres.distance;
    const auto words = codewords_up_to_weight(c, d, work_budget);
    FqMatrix span(f, 0, c.length());
    for (const auto& w : words) span.append_row(w);
    auto gd = row_echelon(span).reduced;
    if (gd.rows() == c.dimension())
        throw degenerate_split("minimum-weight subcode is the whole code (dimension " + std::to_string(gd.rows()) + ")");

    // complete the basis of D with rows of the generator
    FqMatrix ge(f, 0, c.length());
    FqMatrix acc = gd;
    for (std::size_t i = 0; i < c.dimension() && acc.rows() < c.dimension(); ++i) {
        FqMatrix trial = acc;
        trial.append_row(c.generator().row(i));
        if (rank(trial) > acc.rows()) {
            acc = std::move(trial);
            ge.append_row(c.generator().row(i));
        }
    }
    ExtensionPattern p = pattern;
    p.kind = ExtensionKind::two_col;
    // one lambda per row of C is accepted too; the rows of E use the leading ones
    if (p.lambdas.size() == c.dimension()) p.lambdas.resize(ge.rows());
    p.validate(f, ge.rows());
    const elem_t a = p.constants[0] % f.q();

    FqMatrix g(f, 0, c.length() + 2);
    for (std::size_t i = 0; i < gd.rows(); ++i) {
        Vector row = gd.row_vector(i);
        row.push_back(0);
        row.push_back(0);
        g.append_row(row);
    }
    for (std::size_t i = 0; i < ge.rows(); ++i) {
        Vector row = ge.row_vector(i);
        detail::append_two_pattern(f, row, i + 1, a, p.lambdas[i] % f.q());
        g.append_row(row);
    }
    LinearCode out(std::move(g));
    if (!is_self_orthogonal(out)) throw internal_error("split extension is not self-orthogonal");
    return {std::move(out), d, gd.rows()};
}

struct Completion {
    LinearCode code;
    std::size_t distance;
    bool distance_exact;
    std::size_t trial;
};

namespace detail {

inline std::string canonical_text(const LinearCode& c) { return to_text(row_echelon(c.generator()).reduced); }

inline std::optional<LinearCode> complete_once(const LinearCode& c, Rng& rng, std::size_t attempts_per_step) {
    LinearCode cur = c;
    while (2 * cur.dimension() < cur.length()) {
        auto v = random_isotropic_outside(cur, rng, attempts_per_step);
        if (!v) return std::nullopt;
        FqMatrix g = cur.generator();
        g.append_row(*v);
        cur = LinearCode(std::move(g));
    }
    return cur;
}

}  // namespace detail

/// Grows a self-orthogonal code to a self-dual one by adjoining isotropic vectors of the dual.
/// Runs `trials` seeded random completions and keeps the one with the largest minimum distance
/// (ties: smallest canonical generator text).
inline Completion complete_to_self_dual(const LinearCode& c, std::size_t trials, std::uint64_t seed,
                                        std::uint64_t bz_budget = 50'000'000) {
    if (c.length() % 2) throw invalid_argument("self-dual completion needs even length");
    if (!is_self_orthogonal(c)) throw invalid_argument("self-dual completion needs a self-orthogonal code");
    auto score = [&](const LinearCode& code) {
        auto r = min_distance_bz(code, {bz_budget, 0});
        return std::pair{r.distance, r.is_exact()};
    };
    if (is_self_dual(c)) {
        auto [d, exact] = score(c);
        return {c, d, exact, 0};
    }
    if (trials == 0) throw invalid_argument("self-dual completion needs at least one trial");
    const std::size_t attempts = 64 * static_cast<std::size_t>(c.field().q()) + 256;
    std::optional<Completion> best;
    std::string best_text;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng(derive_seed(seed, t));
        auto done = detail::complete_once(c, rng, attempts);
        if (!done) continue;
        if (!is_self_dual(*done) || !is_subcode(c, *done)) throw internal_error("completion lost self-duality");
        auto [d, exact] = score(*done);
        auto text = detail::canonical_text(*done);
        if (!best || d > best->distance || (d == best->distance && text < best_text)) {
            best = Completion{*done, d, exact, t};
            best_text = std::move(text);
        }
    }
    if (!best) throw not_found("no self-dual completion found in " + std::to_string(trials) + " trials");
    return *best;
}

}  // namespace sdc
