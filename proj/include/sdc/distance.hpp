#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "code.hpp"
#include "errors.hpp"
#include "matrix.hpp"

namespace sdc {

/// A generator matrix put in systematic form on `rank` columns disjoint from those of the
/// earlier information sets. Rows past `rank` vanish on those columns.
struct InformationSet {
    FqMatrix generator;
    std::vector<std::size_t> columns;
    std::size_t rank() const noexcept { return columns.size(); }
};

/// Greedy family of disjoint (possibly partial) information sets. The first is full rank.
inline std::vector<InformationSet> information_sets(const LinearCode& c) {
    std::vector<InformationSet> sets;
    std::vector<std::size_t> available(c.length());
    std::iota(available.begin(), available.end(), std::size_t{0});
    while (!available.empty()) {
        FqMatrix g = c.generator();
        auto pivots = eliminate(g, available);
        if (pivots.empty()) break;
        std::vector<std::size_t> rest;
        for (auto col : available)
            if (std::find(pivots.begin(), pivots.end(), col) == pivots.end()) rest.push_back(col);
        sets.push_back({std::move(g), std::move(pivots)});
        available = std::move(rest);
    }
    return sets;
}

namespace detail {

// Lower bound on the weight of any codeword not produced by enumerating messages of weight <= w
// in every information set.
inline std::size_t bz_lower_bound(const std::vector<InformationSet>& sets, std::size_t k, std::size_t w) {
    std::size_t lb = 0;
    for (const auto& s : sets) {
        const std::size_t deficit = k - s.rank();
        if (w + 1 > deficit) lb += w + 1 - deficit;
    }
    return lb;
}

// Enumerates m G for every message m of weight exactly w whose first nonzero entry is 1.
// visit(codeword) returns false to stop. Returns false if stopped.
template <class Visit>
bool for_each_normalized_combination(const FqMatrix& g, std::size_t w, Visit&& visit) {
    const auto& f = g.field();
    const std::size_t k = g.rows(), n = g.cols();
    if (w == 0 || w > k) return true;
    std::vector<Vector> partial(w + 1, Vector(n, 0));
    // recursive descent over (row index, coefficient) with partial sums kept per depth
    auto rec = [&](auto&& self, std::size_t depth, std::size_t start) -> bool {
        const std::size_t remaining = w - depth;
        for (std::size_t i = start; i + remaining <= k; ++i) {
            const auto row = g.row(i);
            const elem_t first = 1, last = depth == 0 ? 1 : f.q() - 1;
            for (elem_t a = first; a <= last; ++a) {
                auto& next = partial[depth + 1];
                const auto& cur = partial[depth];
                for (std::size_t j = 0; j < n; ++j) next[j] = f.add(cur[j], f.mul(a, row[j]));
                if (remaining == 1) {
                    if (!visit(std::span<const elem_t>(next))) return false;
                } else if (!self(self, depth + 1, i + 1)) {
                    return false;
                }
            }
        }
        return true;
    };
    return rec(rec, 0, 0);
}

}  // namespace detail

struct BzOptions {
    std::uint64_t work_budget = 0;  // codewords to examine before giving up; 0 = unlimited
    std::size_t give_up_at = 0;     // stop once a codeword of weight <= this is seen; 0 = never
};

struct DistanceResult {
    enum class Status {
        exact,             // distance == lower == upper
        budget_exhausted,  // work budget ran out; [lower, upper] brackets d
        gave_up,           // a codeword of weight <= give_up_at exists; upper is an upper bound
    };
    Status status = Status::exact;
    std::size_t distance = 0;  // best upper bound; equals d when exact
    std::size_t lower = 0;
    std::uint64_t work = 0;
    bool is_exact() const noexcept { return status == Status::exact; }
};

/// Exact minimum distance by the Brouwer-Zimmermann method: for w = 1, 2, ... enumerate all
/// weight-w message combinations in each information set, keeping the lightest codeword as the
/// upper bound, until the bound from the disjoint information sets meets it.
inline DistanceResult min_distance_bz(const LinearCode& c, const BzOptions& opt = {}) {
    DistanceResult r;
    const std::size_t k = c.dimension();
    if (k == 0) return r;
    const auto sets = information_sets(c);
    std::size_t upper = c.length();
    // rows of the first systematic generator are codewords
    for (std::size_t i = 0; i < k; ++i) upper = std::min(upper, hamming_weight(sets.front().generator.row(i)));

    bool stop = false;
    auto visit = [&](std::span<const elem_t> word) {
        ++r.work;
        const std::size_t wt = hamming_weight(word);
        if (wt > 0 && wt < upper) upper = wt;
        if (opt.give_up_at && upper <= opt.give_up_at) {
            r.status = DistanceResult::Status::gave_up;
            stop = true;
        } else if (opt.work_budget && r.work >= opt.work_budget) {
            r.status = DistanceResult::Status::budget_exhausted;
            stop = true;
        }
        return !stop;
    };

    std::size_t lower = 1;
    if (opt.give_up_at && upper <= opt.give_up_at) {
        r.status = DistanceResult::Status::gave_up;
        stop = true;
    }
    for (std::size_t w = 1; w <= k && !stop; ++w) {
        for (const auto& s : sets)
            if (!detail::for_each_normalized_combination(s.generator, w, visit)) break;
        if (stop) break;
        lower = std::max(lower, detail::bz_lower_bound(sets, k, w));
        if (lower >= upper || w == k) {
            lower = upper;
            break;
        }
    }
    r.distance = upper;
    r.lower = std::min(lower, upper);
    if (r.status == DistanceResult::Status::exact) r.lower = upper;
    return r;
}

/// Projective representatives (first nonzero entry 1) of every codeword of weight in [1, max_weight],
/// sorted. Uses the information-set bound to stop as soon as no heavier message can yield such a word.
inline std::vector<Vector> codewords_up_to_weight(const LinearCode& c, std::size_t max_weight,
                                                  std::uint64_t work_budget = 0) {
    std::set<Vector> found;
    const std::size_t k = c.dimension();
    if (k == 0) return {};
    const auto sets = information_sets(c);
    const auto& f = c.field();
    std::uint64_t work = 0;
    for (std::size_t w = 1; w <= k; ++w) {
        for (const auto& s : sets) {
            detail::for_each_normalized_combination(s.generator, w, [&](std::span<const elem_t> word) {
                if (work_budget && ++work > work_budget)
                    throw cap_exceeded("low-weight codeword enumeration exceeded its work budget");
                const std::size_t wt = hamming_weight(word);
                if (wt == 0 || wt > max_weight) return true;
                Vector v(word.begin(), word.end());
                const elem_t lead = *std::find_if(v.begin(), v.end(), [](elem_t x) { return x != 0; });
                const elem_t inv = f.inv(lead);
                for (auto& x : v) x = f.mul(x, inv);
                found.insert(std::move(v));
                return true;
            });
        }
        if (detail::bz_lower_bound(sets, k, w) > max_weight) break;
    }
    return {found.begin(), found.end()};
}

// Dispatch --------------------------------------------------------------------------

enum class DistanceEngine { automatic, exhaustive, bz, mds_certificate };

inline std::string to_string(DistanceEngine e) {
    switch (e) {
        case DistanceEngine::automatic: return "auto";
        case DistanceEngine::exhaustive: return "exhaustive";
        case DistanceEngine::bz: return "bz";
        default: return "mds-cert";
    }
}

inline DistanceEngine distance_engine_from_string(const std::string& s) {
    if (s == "auto") return DistanceEngine::automatic;
    if (s == "exhaustive") return DistanceEngine::exhaustive;
    if (s == "bz") return DistanceEngine::bz;
    if (s == "mds-cert") return DistanceEngine::mds_certificate;
    throw invalid_argument("unknown distance engine '" + s + "'");
}

struct DistancePolicy {
    DistanceEngine engine = DistanceEngine::automatic;
    std::uint64_t exhaustive_cap = 10'000'000;  // q^k at or below this is enumerated
    std::uint64_t bz_budget = 200'000'000;      // codewords examined by BZ before giving up
};

struct DistanceOutcome {
    enum class Kind { exact, mds_certified, not_mds, unresolved };
    Kind kind = Kind::unresolved;
    std::size_t distance = 0;  // exact d, or n-k+1 when certified MDS, or best upper bound
    DistanceEngine used = DistanceEngine::automatic;
};

/// Minimum distance with the exhaustive engine when q^k is small, BZ otherwise, and the
/// all-minors MDS certificate as the last resort (or when requested).
inline DistanceOutcome compute_distance(const LinearCode& c, const DistancePolicy& p) {
    const bool small = detail::code_size(c) <= p.exhaustive_cap;
    auto certify = [&] {
        const bool mds = is_mds_systematic(c);
        return DistanceOutcome{mds ? DistanceOutcome::Kind::mds_certified : DistanceOutcome::Kind::not_mds,
                               mds ? c.length() - c.dimension() + 1 : 0, DistanceEngine::mds_certificate};
    };
    switch (p.engine) {
        case DistanceEngine::exhaustive:
            return {DistanceOutcome::Kind::exact, min_distance_exhaustive(c, p.exhaustive_cap), DistanceEngine::exhaustive};
        case DistanceEngine::mds_certificate: return certify();
        case DistanceEngine::bz: {
            auto r = min_distance_bz(c, {p.bz_budget, 0});
            return {r.is_exact() ? DistanceOutcome::Kind::exact : DistanceOutcome::Kind::unresolved, r.distance,
                    DistanceEngine::bz};
        }
        default: break;
    }
    if (small) return {DistanceOutcome::Kind::exact, min_distance_exhaustive(c, p.exhaustive_cap), DistanceEngine::exhaustive};
    auto r = min_distance_bz(c, {p.bz_budget, 0});
    if (r.is_exact()) return {DistanceOutcome::Kind::exact, r.distance, DistanceEngine::bz};
    auto cert = certify();
    if (cert.kind == DistanceOutcome::Kind::mds_certified) return cert;
    return {DistanceOutcome::Kind::unresolved, r.distance, DistanceEngine::bz};
}

}  // namespace sdc
