#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "code.hpp"
#include "construct.hpp"
#include "distance.hpp"
#include "errors.hpp"
#include "extend.hpp"
#include "field.hpp"
#include "group.hpp"
#include "matrix.hpp"
#include "provenance.hpp"
#include "rng.hpp"

namespace sdc {

enum class Construction { eq1, eq2, eq3, eq4_diffuse, extend_two, extend_four, extend_two_plus_two, split };

inline std::string to_string(Construction c) {
    switch (c) {
        case Construction::eq1: return "eq1";
        case Construction::eq2: return "eq2";
        case Construction::eq3: return "eq3";
        case Construction::eq4_diffuse: return "eq4-diffuse";
        case Construction::extend_two: return "extend-two";
        case Construction::extend_four: return "extend-four";
        case Construction::extend_two_plus_two: return "extend-2+2";
        default: return "split";
    }
}

inline Construction construction_from_string(const std::string& s) {
    for (auto c : {Construction::eq1, Construction::eq2, Construction::eq3, Construction::eq4_diffuse,
                   Construction::extend_two, Construction::extend_four, Construction::extend_two_plus_two,
                   Construction::split})
        if (to_string(c) == s) return c;
    throw invalid_argument("unknown construction '" + s + "'");
}

/// random: `budget` seeded samples. exhaustive: every L of the (small) orthogonal group times
/// every admissible root choice, in a fixed order; only for eq1/eq2/eq3.
enum class SearchMode { random, exhaustive };

inline std::string to_string(SearchMode m) { return m == SearchMode::random ? "random" : "exhaustive"; }

struct SearchSpec {
    unsigned q = 3;
    std::size_t n = 2;  // half length; codes are [2n, n]
    Construction construction = Construction::eq2;
    SearchMode mode = SearchMode::random;
    std::uint64_t budget = 1000;
    std::size_t word_length = 0;  // 0: default for the group dimension
    std::uint64_t seed = 1;
    DistancePolicy policy{};
    std::uint64_t screen_budget = 1'000'000;  // BZ work per sample; the winner is re-checked with policy.bz_budget
    std::optional<GroupFamily> family;  // default: K_u for dimension >= 5, the full group below
    std::size_t diffusion_factors = 2;
    std::optional<std::size_t> target;  // stop once a code with d >= target is found
    unsigned threads = 1;

    /// Side of the orthogonal matrices sampled by the construction.
    std::size_t group_dimension() const {
        switch (construction) {
            case Construction::eq3: return n / 2;
            case Construction::extend_two:
            case Construction::split: return n - 1;
            case Construction::extend_four:
            case Construction::extend_two_plus_two: return n - 2;
            default: return n;
        }
    }

    GroupFamily group_family() const {
        if (family) return *family;
        return group_dimension() >= 5 ? GroupFamily::ku : GroupFamily::full;
    }

    std::size_t effective_word_length() const {
        return word_length ? word_length : default_word_length(std::max<std::size_t>(group_dimension(), 1));
    }

    void validate() const {
        if (!PrimeField::is_prime(q) || q > (1u << 20)) throw invalid_argument("q must be a prime <= 2^20");
        if (q == 2) throw invalid_argument("searches need an odd prime");
        if (n == 0) throw invalid_argument("n must be positive");
        if (budget == 0) throw invalid_argument("budget must be at least 1");
        if (screen_budget == 0) throw invalid_argument("screen budget must be at least 1");
        if (q % 4 == 3 && n % 2)
            throw invalid_argument("no self-dual [2n, n] code exists for q = 3 (mod 4) and odd n");
        const bool one_mod_four = q % 4 == 1;
        auto need = [](bool ok, const std::string& why) {
            if (!ok) throw invalid_argument(why);
        };
        const std::string name = to_string(construction);
        switch (construction) {
            case Construction::eq1: need(one_mod_four, "eq1 needs q = 1 (mod 4)"); break;
            case Construction::eq2: need(n % 2 == 0, "eq2 needs even n"); break;
            case Construction::eq3: need(n % 2 == 0, "eq3 needs even n (A is 2m x 2m)"); break;
            case Construction::eq4_diffuse:
                need(one_mod_four || n % 2 == 0, "eq4-diffuse needs a base witness: q = 1 (mod 4) or even n");
                break;
            case Construction::extend_two:
            case Construction::split:
                need(one_mod_four, name + " needs q = 1 (mod 4)");
                need(n >= 2, name + " needs n >= 2");
                break;
            case Construction::extend_four:
                need(n >= 3, "extend-four needs n >= 3");
                need(one_mod_four || (n - 2) % 2 == 0, "extend-four needs a self-dual base of half length n - 2");
                break;
            case Construction::extend_two_plus_two:
                need(one_mod_four, "extend-2+2 needs q = 1 (mod 4)");
                need(n >= 3, "extend-2+2 needs n >= 3");
                break;
        }
        if (mode == SearchMode::exhaustive && construction != Construction::eq1 && construction != Construction::eq2 &&
            construction != Construction::eq3)
            throw invalid_argument("exhaustive mode supports eq1, eq2 and eq3 only");
        if (policy.engine == DistanceEngine::exhaustive) {
            const BigInt size = boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(n));
            if (size > policy.exhaustive_cap)
                throw invalid_argument("exhaustive engine: q^n = " + size.str() + " exceeds the enumeration cap");
        }
        if (target && *target > n + 1) throw invalid_argument("target exceeds the Singleton bound n + 1");
    }

    Provenance provenance() const {
        Provenance p;
        p.set("q", q);
        p.set("n", n);
        p.set("construction", to_string(construction));
        p.set("mode", to_string(mode));
        p.set("budget", budget);
        p.set("word_length", effective_word_length());
        p.set("seed", seed);
        p.set("engine", to_string(policy.engine));
        p.set("max_enum", policy.exhaustive_cap);
        p.set("bz_budget", policy.bz_budget);
        p.set("screen_budget", screen_budget);
        p.set("group_family", to_string(group_family()));
        if (construction == Construction::eq4_diffuse) p.set("diffusion_factors", diffusion_factors);
        if (target) p.set("target", *target);
        return p;
    }
};

/// A found self-dual code together with everything needed to re-verify it.
struct CodeRecord {
    unsigned q = 0;
    std::size_t length = 0, dimension = 0, distance = 0;
    Classification classification = Classification::other;
    FqMatrix generator{PrimeField(2), 0, 0};
    std::optional<WeightEnumerator> enumerator;
    bool mds_certificate = false;
    Provenance provenance;  // search spec (search.*), construction details, sample seed
    std::string timestamp;  // empty unless stamped by the caller

    LinearCode code() const { return LinearCode(generator); }
    friend bool operator==(const CodeRecord&, const CodeRecord&) = default;
};

struct SearchResult {
    CodeRecord record;
    std::uint64_t iterations = 0;  // samples drawn (whole blocks)
    std::uint64_t failed = 0;      // samples that produced no code (e.g. no completion found)
    bool exhausted = false;        // every element of the search space was tried
};

namespace detail {

struct Sample {
    LinearCode code;
    Provenance provenance;
};

// Generator sets and root choices shared by every iteration.
struct SearchContext {
    PrimeField field;
    std::optional<GeneratorSet> gens;
    std::vector<SquarePair> pairs;
    std::vector<elem_t> roots;  // square roots of -1, when they exist
    std::vector<FqMatrix> elements;  // exhaustive mode: the whole group

    explicit SearchContext(const SearchSpec& s) : field(s.q) {
        const std::size_t dim = s.group_dimension();
        if (dim >= 1) gens = make_generators(s.group_family(), dim, field);
        pairs = all_two_squares_minus_one(field);
        if (s.q % 4 == 1) {
            const elem_t a = sqrt_minus_one(field);
            roots = {a, field.neg(a)};
        }
        if (s.mode == SearchMode::exhaustive) {
            const GeneratorSet full = full_orthogonal_generators(dim, field);
            const BigInt order = orthogonal_group_order_formula(dim, field);
            const BigInt choices = s.construction == Construction::eq1 ? roots.size() : pairs.size();
            if (order * choices > s.budget)
                throw invalid_argument("exhaustive mode: |O_" + std::to_string(dim) + "(" + std::to_string(s.q) +
                                       ")| x root choices = " + BigInt(order * choices).str() + " exceeds the budget");
            elements = enumerate_group(full, static_cast<std::size_t>(order));
            if (BigInt(elements.size()) != order) throw internal_error("enumerated orthogonal group has the wrong order");
        }
    }

    std::uint64_t space_size(const SearchSpec& s) const {
        const std::size_t choices = s.construction == Construction::eq1 ? roots.size() : pairs.size();
        return static_cast<std::uint64_t>(elements.size()) * choices;
    }
};

inline std::vector<elem_t> random_lambdas(const PrimeField& f, std::size_t count, Rng& rng) {
    std::vector<elem_t> out(count);
    for (auto& l : out) l = static_cast<elem_t>(uniform_below(rng, f.q()));
    return out;
}

inline std::string join(const std::vector<elem_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

// Self-dual base code of half length m for the extension constructions.
inline Sample base_code(const SearchSpec& s, const SearchContext& ctx, Rng& rng) {
    const std::size_t m = s.group_dimension();
    const FqMatrix l = random_orthogonal(*ctx.gens, s.effective_word_length(), rng);
    if (s.q % 4 == 1) {
        auto w = build_eq1(l);
        return {from_witness(w), w.provenance()};
    }
    if (m % 2) throw internal_error("extension base of odd half length for q = 3 (mod 4)");
    auto w = build_eq2(l, ctx.pairs[uniform_below(rng, ctx.pairs.size())]);
    return {from_witness(w), w.provenance()};
}

inline Sample witness_sample(const NegOrthogonalWitness& w) { return {from_witness(w), w.provenance()}; }

inline std::optional<Sample> draw(const SearchSpec& s, const SearchContext& ctx, std::uint64_t iteration) {
    const auto& f = ctx.field;
    if (s.mode == SearchMode::exhaustive) {
        const auto& l = ctx.elements[iteration % ctx.elements.size()];
        const std::size_t choice = iteration / ctx.elements.size();
        Sample out = s.construction == Construction::eq1 ? witness_sample(build_eq1(l, ctx.roots[choice]))
                     : s.construction == Construction::eq2 ? witness_sample(build_eq2(l, ctx.pairs[choice]))
                                                            : witness_sample(build_eq3(l, ctx.pairs[choice]));
        out.provenance.set("group_element", iteration % ctx.elements.size());
        return out;
    }

    Rng rng(derive_seed(s.seed, iteration));
    const std::size_t wl = s.effective_word_length();
    auto pair = [&] { return ctx.pairs[uniform_below(rng, ctx.pairs.size())]; };
    switch (s.construction) {
        case Construction::eq1: return witness_sample(build_eq1(random_orthogonal(*ctx.gens, wl, rng)));
        case Construction::eq2: {
            auto l = random_orthogonal(*ctx.gens, wl, rng);
            return witness_sample(build_eq2(l, pair()));
        }
        case Construction::eq3: {
            auto l = random_orthogonal(*ctx.gens, wl, rng);
            return witness_sample(build_eq3(l, pair()));
        }
        case Construction::eq4_diffuse: {
            auto l = random_orthogonal(*ctx.gens, wl, rng);
            auto w = s.q % 4 == 1 ? build_eq1(l) : build_eq2(l, pair());
            std::vector<FqMatrix> ls;
            for (std::size_t i = 0; i < s.diffusion_factors; ++i) ls.push_back(random_orthogonal(*ctx.gens, wl, rng));
            return witness_sample(diffuse_eq4(w, ls));
        }
        default: break;
    }

    auto base = base_code(s, ctx, rng);
    Provenance p;
    p.merge(base.provenance, "base.");
    p.set("construction", to_string(s.construction));
    const std::size_t k = base.code.dimension();
    std::optional<LinearCode> partial;
    switch (s.construction) {
        case Construction::extend_two: {
            auto pattern = two_col_pattern(f, random_lambdas(f, k, rng));
            p.set("lambdas", join(pattern.lambdas));
            partial = extend_two(base.code, pattern);
            break;
        }
        case Construction::split: {
            auto pattern = two_col_pattern(f, random_lambdas(f, k, rng));
            p.set("lambdas", join(pattern.lambdas));
            try {
                auto sp = split_extend(base.code, pattern, s.policy.bz_budget);
                p.set("split_subcode_dimension", sp.subcode_dimension);
                partial = std::move(sp.code);
            } catch (const degenerate_split&) {
                p.set("split_subcode_dimension", "degenerate");
                partial = extend_two(base.code, pattern);
            }
            break;
        }
        case Construction::extend_four: {
            const auto fs = four_squares_zero(f);
            ExtensionPattern pattern{ExtensionKind::four_col, {fs.a, fs.b, fs.c, fs.d}, random_lambdas(f, k, rng)};
            p.set("constants", join(pattern.constants));
            p.set("lambdas", join(pattern.lambdas));
            auto rows = four_col_rows(base.code, pattern);
            auto x = random_isotropic_outside(rows, rng, 64 * std::size_t{s.q} + 256);
            if (!x) return std::nullopt;
            partial = extend_four(base.code, pattern, *x);
            break;
        }
        case Construction::extend_two_plus_two: {
            const elem_t a = ctx.roots[uniform_below(rng, 2)], c = ctx.roots[uniform_below(rng, 2)];
            ExtensionPattern pattern{ExtensionKind::two_plus_two, {a, c}, random_lambdas(f, k + 1, rng)};
            p.set("constants", join(pattern.constants));
            p.set("lambdas", join(pattern.lambdas));
            const auto candidates = two_plus_two_candidates(base.code, pattern);
            if (candidates.empty()) return std::nullopt;
            const auto& x = candidates[uniform_below(rng, candidates.size())];
            p.set("x", join(x));
            partial = extend_two_plus_two(base.code, pattern, x);
            break;
        }
        default: throw internal_error("unhandled construction");
    }
    auto done = complete_once(*partial, rng, 64 * std::size_t{s.q} + 256);
    if (!done) return std::nullopt;
    if (!is_subcode(*partial, *done)) throw internal_error("completion dropped the extended code");
    return Sample{std::move(*done), std::move(p)};
}

struct Score {
    std::size_t d = 0;
    bool proven = false;
    std::string status;  // exact | mds-certified | upper-bound
};

// Minimum distance of a sample, screened with a bounded BZ run. Codes that provably fall below
// `give_up_at` + 1 are abandoned early; codes the screen cannot settle rank by their upper bound.
inline Score score(const LinearCode& c, const DistancePolicy& policy, std::uint64_t screen_budget,
                   std::size_t give_up_at) {
    const std::size_t mds_d = c.length() - c.dimension() + 1;
    if (policy.engine == DistanceEngine::exhaustive)
        return {min_distance_exhaustive(c, policy.exhaustive_cap, 1), true, "exact"};
    if (policy.engine == DistanceEngine::mds_certificate && is_mds_systematic(c)) return {mds_d, true, "mds-certified"};
    const auto r = min_distance_bz(c, {std::min(screen_budget, policy.bz_budget), give_up_at});
    switch (r.status) {
        case DistanceResult::Status::exact: return {r.distance, true, "exact"};
        case DistanceResult::Status::gave_up: return {r.distance, false, "upper-bound"};
        default:
            if (policy.engine != DistanceEngine::mds_certificate && r.distance == mds_d && is_mds_systematic(c))
                return {mds_d, true, "mds-certified"};
            return {r.distance, false, "upper-bound"};
    }
}

struct Candidate {
    std::size_t d = 0;
    bool proven = false;
    std::string text;
    std::uint64_t iteration = 0;
    std::string status;
    std::optional<Sample> sample;

    bool beats(const Candidate& o) const {
        if (!sample) return false;
        if (!o.sample) return true;
        if (d != o.d) return d > o.d;
        if (proven != o.proven) return proven;
        if (text != o.text) return text < o.text;
        return iteration < o.iteration;
    }
};

inline void evaluate(const SearchSpec& s, const SearchContext& ctx, std::uint64_t iteration, Candidate& best,
                     std::uint64_t& failed) {
    auto sample = draw(s, ctx, iteration);
    if (!sample) {
        ++failed;
        return;
    }
    if (!is_self_dual(sample->code)) throw internal_error(to_string(s.construction) + " produced a non-self-dual code");
    const std::size_t threshold = best.sample && best.d > 1 ? best.d - 1 : 0;
    const auto sc = score(sample->code, s.policy, s.screen_budget, threshold);
    if (sc.d > s.n + 1) throw internal_error("Singleton bound violated: d = " + std::to_string(sc.d));
    if (best.sample && sc.d < best.d) return;
    Candidate c{sc.d, sc.proven, canonical_text(sample->code), iteration, sc.status, std::move(sample)};
    if (c.beats(best)) best = std::move(c);
}

inline constexpr std::uint64_t search_block = 256;

}  // namespace detail

/// Final distance bookkeeping for a found code: enumerator when q^k is within the cap, the
/// all-minors certificate for MDS codes beyond it, BZ otherwise.
inline CodeRecord make_record(const LinearCode& code, std::size_t claimed_d, const std::string& claimed_status,
                              const DistancePolicy& policy, Provenance provenance) {
    if (!is_self_dual(code)) throw internal_error("record for a code that is not self-dual");
    CodeRecord r;
    r.q = code.field().q();
    r.length = code.length();
    r.dimension = code.dimension();
    r.generator = row_echelon(code.generator()).reduced;
    std::size_t d = claimed_d;
    std::string status = claimed_status;
    if (detail::code_size(code) <= policy.exhaustive_cap) {
        r.enumerator = weight_enumerator(code, policy.exhaustive_cap, 1);
        d = r.enumerator->minimum_distance();
        status = "exact";
        provenance.set("distance_engine", "exhaustive");
    } else if (claimed_status == "mds-certified" || (claimed_d == r.dimension + 1 && is_mds_systematic(code))) {
        if (!is_mds_systematic(code)) throw internal_error("MDS certificate does not hold");
        r.mds_certificate = true;
        d = r.dimension + 1;
        status = "mds-certified";
        provenance.set("distance_engine", "mds-cert");
    } else {
        provenance.set("distance_engine", "bz");
        if (claimed_status != "exact") {
            const auto res = min_distance_bz(code, {policy.bz_budget, 0});
            d = res.is_exact() ? res.distance : res.lower;
            status = res.is_exact() ? "exact" : "lower-bound";
            if (d > claimed_d) throw internal_error("re-proof exceeds the screened upper bound");
        }
    }
    if (claimed_status == "exact" && d != claimed_d)
        throw internal_error("distance engines disagree: " + std::to_string(claimed_d) + " vs " + std::to_string(d));
    r.distance = d;
    r.classification = classify(r.length, d).kind;
    provenance.set("distance_status", status);
    r.provenance = std::move(provenance);
    return r;
}

/// Best code over the search space of `spec`. Deterministic: iteration i draws from
/// derive_seed(seed, i), blocks of iterations are split over threads, and the reduction keeps the
/// higher d, then the smaller canonical generator text.
inline SearchResult run_search(const SearchSpec& spec) {
    spec.validate();
    const detail::SearchContext ctx(spec);
    const std::uint64_t total = spec.mode == SearchMode::exhaustive ? ctx.space_size(spec) : spec.budget;
    const unsigned threads = std::max(1u, spec.threads);

    detail::Candidate best;
    SearchResult out;
    for (std::uint64_t begin = 0; begin < total; begin += detail::search_block) {
        const std::uint64_t end = std::min(total, begin + detail::search_block);
        std::vector<detail::Candidate> local(threads, best);
        std::vector<std::uint64_t> failed(threads, 0);
        auto work = [&](unsigned t) {
            for (std::uint64_t i = begin + t; i < end; i += threads) detail::evaluate(spec, ctx, i, local[t], failed[t]);
        };
        if (threads == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errors(threads);
            for (unsigned t = 0; t < threads; ++t)
                pool.emplace_back([&, t] {
                    try {
                        work(t);
                    } catch (...) {
                        errors[t] = std::current_exception();
                    }
                });
            for (auto& th : pool) th.join();
            for (auto& e : errors)
                if (e) std::rethrow_exception(e);
        }
        for (unsigned t = 0; t < threads; ++t) {
            if (local[t].beats(best)) best = std::move(local[t]);
            out.failed += failed[t];
        }
        out.iterations = end;
        if (best.sample && best.proven && (best.d == spec.n + 1 || (spec.target && best.d >= *spec.target))) break;
    }
    out.exhausted = spec.mode == SearchMode::exhaustive && out.iterations == total;
    if (!best.sample) throw not_found("no sample produced a code in " + std::to_string(out.iterations) + " iterations");

    Provenance p;
    p.merge(spec.provenance(), "search.");
    p.merge(best.sample->provenance);
    p.set("iteration", best.iteration);
    if (spec.mode == SearchMode::random) p.set("sample_seed", derive_seed(spec.seed, best.iteration));
    out.record = make_record(best.sample->code, best.d, best.status, spec.policy, std::move(p));
    return out;
}

}  // namespace sdc
