#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "group.hpp"
#include "search.hpp"
#include "table2.hpp"

namespace sdc {

struct StrategyOutcome {
    Construction construction;
    SearchMode mode;
    std::uint64_t seed;
    std::uint64_t iterations;
    std::size_t best_distance;  // 0 when nothing was produced
    bool exhausted;
};

struct CellReport {
    enum class Status {
        met,                  // achieved d >= target
        budget_insufficient,  // some strategy was sampled, not exhausted, and fell short
        exhausted_below,      // every strategy exhausted its space below the target
    };
    Table2Cell cell{};
    std::size_t target = 0;
    std::size_t achieved = 0;
    Status status = Status::budget_insufficient;
    unsigned attempts = 0;
    std::vector<StrategyOutcome> strategies;
    std::optional<CodeRecord> best;

    bool met() const noexcept { return status == Status::met; }
};

inline std::string to_string(CellReport::Status s) {
    switch (s) {
        case CellReport::Status::met: return "met";
        case CellReport::Status::budget_insufficient: return "budget insufficient";
        default: return "exhausted below target";
    }
}

/// Constructions tried for a cell, in order. Eq. (1) needs q = 1 (mod 4); the block constructions
/// need even n. Orthogonal groups small enough to list are exhausted rather than sampled.
inline std::vector<SearchSpec> cell_strategies(unsigned q, std::size_t n, std::uint64_t budget, std::uint64_t seed) {
    std::vector<SearchSpec> out;
    const PrimeField f(q);
    auto add = [&](Construction c) {
        SearchSpec s;
        s.q = q;
        s.n = n;
        s.construction = c;
        s.budget = budget;
        s.seed = seed;
        try {
            s.validate();
        } catch (const invalid_argument&) {
            return;
        }
        const std::size_t dim = s.group_dimension();
        if (dim >= 1 && dim <= 3) {
            const BigInt order = orthogonal_group_order_formula(dim, f);
            const std::size_t choices = c == Construction::eq1 ? 2 : all_two_squares_minus_one(f).size();
            if (order * choices <= std::min<std::uint64_t>(budget, 100'000)) s.mode = SearchMode::exhaustive;
        }
        out.push_back(s);
    };
    if (q % 4 == 1) add(Construction::eq1);
    if (n % 2 == 0) {
        add(Construction::eq2);
        add(Construction::eq3);
    }
    // exhaustive strategies are cheap: run them first
    std::stable_partition(out.begin(), out.end(), [](const SearchSpec& s) { return s.mode == SearchMode::exhaustive; });
    return out;
}

/// Attempts a populated cell of the best-known table. The random budget is shared among the
/// sampled strategies; if the target is missed, one retry runs with a derived seed.
inline CellReport reproduce_cell(unsigned q, unsigned two_n, std::uint64_t budget, std::uint64_t seed,
                                 bool retry_once = true) {
    const auto cell = table2_lookup(q, two_n);
    if (!cell) throw not_found("no target recorded for q = " + std::to_string(q) + ", 2n = " + std::to_string(two_n));
    if (budget == 0) throw invalid_argument("budget must be at least 1");
    CellReport rep;
    rep.cell = *cell;
    rep.target = cell->target_distance();
    const std::size_t n = two_n / 2;

    const unsigned attempts = retry_once ? 2 : 1;
    for (unsigned attempt = 0; attempt < attempts; ++attempt) {
        ++rep.attempts;
        const std::uint64_t s = attempt == 0 ? seed : derive_seed(seed, 0x7265747279ull);
        auto strategies = cell_strategies(q, n, budget, s);
        if (strategies.empty()) throw invalid_argument("no construction applies to this cell");
        std::size_t sampled = 0;
        for (const auto& st : strategies) sampled += st.mode == SearchMode::random;
        std::uint64_t remaining = budget;
        bool all_exhausted = true;
        for (auto& st : strategies) {
            if (st.mode == SearchMode::random) {
                st.budget = std::max<std::uint64_t>(1, remaining / sampled--);
            }
            st.target = rep.target;
            auto r = run_search(st);
            if (st.mode == SearchMode::random) remaining -= std::min(remaining, r.iterations);
            all_exhausted = all_exhausted && r.exhausted;
            rep.strategies.push_back({st.construction, st.mode, st.seed, r.iterations, r.record.distance, r.exhausted});
            if (!rep.best || r.record.distance > rep.best->distance) rep.best = std::move(r.record);
            if (rep.best->distance >= rep.target) break;
        }
        rep.achieved = rep.best ? rep.best->distance : 0;
        if (rep.achieved > n + 1) throw internal_error("Singleton bound violated");
        if (rep.achieved >= rep.target) {
            rep.status = CellReport::Status::met;
            return rep;
        }
        if (all_exhausted) {
            rep.status = CellReport::Status::exhausted_below;
            return rep;  // deterministic: a retry cannot change the outcome
        }
        rep.status = CellReport::Status::budget_insufficient;
    }
    return rep;
}

}  // namespace sdc
