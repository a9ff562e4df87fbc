// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "oracle.hpp"
#include "sdc/sdc.hpp"

using namespace sdc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// shared by criteria 5 and 6: every distance computed must respect the Singleton bound
std::size_t singleton_checks = 0, singleton_violations = 0;

void note_distance(std::size_t length, std::size_t dimension, std::size_t d) {
    ++singleton_checks;
    if (d > length - dimension + 1) ++singleton_violations;
}

oracle::Mat to_oracle(const FqMatrix& m) {
    oracle::Mat out(m.rows(), oracle::Vec(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    return out;
}

std::string big(const BigInt& x) { return x.str(); }

Outcome group_orders() {
    Outcome o;
    std::ostringstream msg;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) {
            o.pass = false;
            msg << "mismatch: " << what << "; ";
        }
    };
    struct Row {
        std::size_t n;
        unsigned q;
        const char* ku;
        const char* formula;
    };
    const Row rows[] = {{5, 5, "18720000", "18720000"},
                        {5, 11, "51442617600", "51442617600"},
                        {5, 13, "274075925760", "274075925760"},
                        {5, 7, "276595200", "553190400"},
                        {6, 3, "26127360", "26127360"}};
    for (const auto& r : rows) {
        const PrimeField f(r.q);
        const auto ku = group_order(ku_generators(r.n, f));
        const auto on = orthogonal_group_order_formula(r.n, f);
        expect(big(ku) == r.ku, "K_u(" + std::to_string(r.n) + "," + std::to_string(r.q) + ") = " + big(ku));
        expect(big(on) == r.formula, "O(" + std::to_string(r.n) + "," + std::to_string(r.q) + ") = " + big(on));
        msg << "(" << r.n << "," << r.q << ") K_u=" << big(ku) << " O=" << big(on) << "; ";
    }
    const PrimeField f7(7), f3(3);
    expect(orthogonal_group_order_formula(5, f7) == 2 * group_order(ku_generators(5, f7)), "index 2 at (5,7)");
    expect(group_order(full_orthogonal_generators(6, f3)) == orthogonal_group_order_formula(6, f3),
           "full generators at (6,3)");
    o.detail = msg.str();
    return o;
}

Outcome orbit_claim() {
    const PrimeField f(3);
    const auto orb = orbit(unit_vector(6, 0), ku_generators(6, f));
    std::set<oracle::Vec> got, expected;
    for (const auto& v : orb) got.insert(oracle::Vec(v.begin(), v.end()));
    for (const auto& v : oracle::messages(6, 3))
        if (oracle::dot(v, v, 3) == 1) expected.insert(v);
    Outcome o;
    o.pass = got == expected && expected.size() == 252 && orb.size() == got.size();
    o.detail = "orbit size " + std::to_string(orb.size()) + ", norm-1 vectors " + std::to_string(expected.size());
    return o;
}

Outcome deterministic_cells() {
    Outcome o;
    const auto c34 = reproduce_cell(3, 4, 1000, 1);
    const auto c54 = reproduce_cell(5, 4, 1000, 1);
    SearchSpec s;
    s.q = 5;
    s.n = 2;
    s.construction = Construction::eq2;
    s.mode = SearchMode::exhaustive;
    const auto ex = run_search(s);
    const PrimeField f(5);
    const std::size_t group = enumerate_group(full_orthogonal_generators(2, f)).size();
    o.pass = c34.met() && c34.achieved == 3 && c54.met() && c54.achieved == 2 && ex.exhausted && ex.record.distance == 2 &&
             group == 8;
    o.detail = "(3,4) d=" + std::to_string(c34.achieved) + " [" + to_string(c34.status) + "]; (5,4) d=" +
               std::to_string(c54.achieved) + " [" + to_string(c54.status) + "]; eq2 over all " + std::to_string(group) +
               " elements of O_2(5): best d=" + std::to_string(ex.record.distance) +
               (ex.exhausted ? " (exhausted)" : " (not exhausted)");
    return o;
}

Outcome stochastic_cells() {
    Outcome o;
    std::ostringstream msg;
    const std::pair<unsigned, unsigned> cells[] = {{7, 8}, {11, 8}, {13, 6}, {13, 10}, {17, 12}};
    const std::uint64_t budget = 200'000;
    for (auto [q, len] : cells) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto rep = reproduce_cell(q, len, budget, 1);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::uint64_t iters = 0;
        for (const auto& st : rep.strategies) iters += st.iterations;
        msg << "(" << q << "," << len << ") target " << rep.target << " got " << rep.achieved << " ["
            << to_string(rep.status) << ", " << iters << " samples, " << rep.attempts << " attempt(s), "
            << static_cast<int>(secs) << "s]; ";
        if (!rep.met()) o.pass = false;
    }
    msg << "budget " << budget << " per cell";
    o.detail = msg.str();
    return o;
}

std::map<std::pair<unsigned, std::size_t>, GeneratorSet> generator_cache;

const GeneratorSet& generators(unsigned q, std::size_t m) {
    auto it = generator_cache.find({q, m});
    if (it == generator_cache.end())
        it = generator_cache.emplace(std::pair{q, m}, full_orthogonal_generators(m, PrimeField(q))).first;
    return it->second;
}

FqMatrix random_l(unsigned q, std::size_t m, Rng& rng) { return random_orthogonal(generators(q, m), 8 * m, rng); }

// a random self-dual [2k, k] code from one of the witness constructions
LinearCode random_self_dual(unsigned q, std::size_t k, Rng& rng) {
    std::vector<int> options;
    if (q % 4 == 1) options.push_back(1);
    if (k % 2 == 0) options.insert(options.end(), {2, 3});
    switch (options[uniform_below(rng, options.size())]) {
        case 1: return from_witness(build_eq1(random_l(q, k, rng)));
        case 2: return from_witness(build_eq2(random_l(q, k, rng)));
        default: return from_witness(build_eq3(random_l(q, k / 2, rng)));
    }
}

std::size_t macwilliams_checks = 0, macwilliams_failures = 0;

void check_macwilliams(const LinearCode& c) {
    if (detail::code_size(c) > 100'000) return;
    const auto w = weight_enumerator(c);
    ++macwilliams_checks;
    note_distance(c.length(), c.dimension(), w.minimum_distance());
    if (macwilliams_transform(w, c.field().q(), c.dimension(), c.length()) != w) ++macwilliams_failures;
}

Outcome oracle_equivalence() {
    Outcome o;
    Rng rng(20240611);
    const unsigned qs[] = {3, 5, 7, 11, 13};
    std::size_t codes = 0, disagree = 0, mds_checked = 0, mds_wrong = 0;
    std::map<std::size_t, std::size_t> by_gap;  // (n - k + 1) - d
    for (std::size_t i = 0; codes < 250; ++i) {
        const unsigned q = qs[i % 5];
        const std::size_t k = 1 + uniform_below(rng, 6);
        if (q % 4 == 3 && k % 2) continue;
        const auto c = random_self_dual(q, k, rng);
        ++codes;
        const auto bz = min_distance_bz(c);
        const auto ex = min_distance_exhaustive(c);
        if (!bz.is_exact() || bz.distance != ex) ++disagree;
        note_distance(c.length(), k, ex);
        ++by_gap[k + 1 - std::min(ex, k + 1)];
        if (detail::code_size(c) <= 100'000) {
            ++mds_checked;
            if (is_mds_systematic(c) != (ex == k + 1)) ++mds_wrong;
        }
        check_macwilliams(c);
    }
    o.pass = codes >= 200 && disagree == 0 && mds_wrong == 0 && mds_checked > 0;
    std::ostringstream msg;
    msg << codes << " codes, " << disagree << " BZ/exhaustive disagreements; MDS test on " << mds_checked << " codes, "
        << mds_wrong << " wrong; distance gaps below Singleton:";
    for (auto [g, n] : by_gap) msg << " " << g << "x" << n;
    o.detail = msg.str();
    return o;
}

Outcome invariants() {
    Outcome o;
    std::ostringstream msg;

    // (a) transvections
    std::size_t tcount = 0, tbad = 0;
    for (unsigned q : {2u, 3u, 5u, 7u, 13u}) {
        const PrimeField f(q);
        for (std::size_t n : {4u, 5u, 6u})
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = a + 1; b < n; ++b)
                    for (std::size_t c = b + 1; c < n; ++c)
                        for (std::size_t d = c + 1; d < n; ++d) {
                            const auto t = transvection_matrix(BinaryVector4(n, {a, b, c, d}), f);
                            ++tcount;
                            if (!(t * t).is_identity() || !is_orthogonal(t) || !(t == t.transpose())) ++tbad;
                        }
    }
    msg << "(a) " << tcount << " transvections, " << tbad << " bad; ";
    if (tbad || tcount == 0) o.pass = false;

    // (b) random construction and extension specs
    Rng rng(777);
    const unsigned qs[] = {3, 5, 7, 11, 13, 17, 29};
    std::map<std::string, std::size_t> counts;
    std::size_t bad = 0, degenerate = 0, no_x = 0;
    auto so = [&](const LinearCode& c) {
        const bool ok = oracle::self_orthogonal(to_oracle(c.generator()), c.field().q());
        if (!ok) ++bad;
        return ok;
    };
    auto sd = [&](const LinearCode& c) {
        if (so(c) && 2 * c.dimension() != c.length()) ++bad;
        check_macwilliams(c);
    };
    for (std::size_t done = 0; done < 1000;) {
        const unsigned q = qs[uniform_below(rng, 7)];
        const PrimeField f(q);
        const bool one = q % 4 == 1;
        const int kind = static_cast<int>(uniform_below(rng, 8));
        const std::size_t m = 1 + uniform_below(rng, 5);  // half length of the base code
        if (q % 4 == 3 && m % 2) continue;
        ++done;
        switch (kind) {
            case 0:
                if (!one) {
                    --done;
                    continue;
                }
                sd(from_witness(build_eq1(random_l(q, m, rng))));
                break;
            case 1:
                if (m % 2) {
                    --done;
                    continue;
                }
                sd(from_witness(build_eq2(random_l(q, m, rng))));
                break;
            case 2:
                if (m % 2) {
                    --done;
                    continue;
                }
                sd(from_witness(build_eq3(random_l(q, m / 2, rng))));
                break;
            case 3: {
                auto w = one ? build_eq1(random_l(q, m, rng)) : build_eq2(random_l(q, m, rng));
                w = diffuse_eq4(w, {random_l(q, m, rng), random_l(q, m, rng)});
                sd(from_witness(w));
                break;
            }
            case 4: {
                if (!one) {
                    --done;
                    continue;
                }
                const auto c = random_self_dual(q, m, rng);
                std::vector<elem_t> l(m);
                for (auto& x : l) x = static_cast<elem_t>(uniform_below(rng, q));
                const auto e = extend_two(c, two_col_pattern(f, l));
                if (so(e)) sd(complete_to_self_dual(e, 1, rng()).code);
                break;
            }
            case 5: {
                const auto c = random_self_dual(q, m, rng);
                const auto s = four_squares_zero(f);
                std::vector<elem_t> l(m);
                for (auto& x : l) x = static_cast<elem_t>(uniform_below(rng, q));
                const ExtensionPattern p{ExtensionKind::four_col, {s.a, s.b, s.c, s.d}, l};
                const auto rows = four_col_rows(c, p);
                so(rows);
                const auto x = random_isotropic_outside(rows, rng, 4096);
                if (!x) {
                    ++no_x;
                    break;
                }
                const auto e = extend_four(c, p, *x);
                if (so(e)) sd(complete_to_self_dual(e, 1, rng()).code);
                break;
            }
            case 6: {
                if (!one) {
                    --done;
                    continue;
                }
                const auto c = random_self_dual(q, m, rng);
                const elem_t a = sqrt_minus_one(f);
                std::vector<elem_t> l(m + 1);
                for (auto& x : l) x = static_cast<elem_t>(uniform_below(rng, q));
                const ExtensionPattern p{ExtensionKind::two_plus_two, {a, uniform_below(rng, 2) ? a : f.neg(a)}, l};
                const auto cands = two_plus_two_candidates(c, p);
                if (cands.empty()) {
                    ++no_x;
                    break;
                }
                const auto e = extend_two_plus_two(c, p, cands[uniform_below(rng, cands.size())]);
                if (so(e)) sd(complete_to_self_dual(e, 1, rng()).code);
                break;
            }
            default: {
                if (!one) {
                    --done;
                    continue;
                }
                const auto c = random_self_dual(q, m, rng);
                std::vector<elem_t> l(m);
                for (auto& x : l) x = static_cast<elem_t>(uniform_below(rng, q));
                try {
                    const auto e = split_extend(c, two_col_pattern(f, l));
                    if (so(e.code)) sd(complete_to_self_dual(e.code, 1, rng()).code);
                } catch (const degenerate_split&) {
                    ++degenerate;
                }
                break;
            }
        }
        ++counts[std::to_string(kind)];
    }
    msg << "(b) 1000 specs [";
    for (auto [k, n] : counts) msg << k << ":" << n << " ";
    msg << "], " << bad << " failures, " << degenerate << " degenerate splits, " << no_x << " without an extension vector; ";
    if (bad) o.pass = false;

    // (c), (d)
    msg << "(c) MacWilliams on " << macwilliams_checks << " enumerators, " << macwilliams_failures << " failures; ";
    msg << "(d) Singleton on " << singleton_checks << " distances, " << singleton_violations << " violations";
    if (macwilliams_failures || macwilliams_checks == 0 || singleton_violations) o.pass = false;
    o.detail = msg.str();
    return o;
}

Outcome archive_round_trip() {
    Outcome o;
    const auto dir = fs::temp_directory_path() / "sdc_acceptance_archive";
    fs::remove_all(dir);
    struct Case {
        unsigned q;
        std::size_t n;
        Construction c;
    };
    const Case cases[] = {{3, 2, Construction::eq2},  {5, 2, Construction::eq1},   {5, 3, Construction::eq1},
                          {7, 4, Construction::eq2},  {11, 4, Construction::eq3},  {13, 3, Construction::eq1},
                          {13, 4, Construction::eq4_diffuse}, {13, 5, Construction::extend_two},
                          {17, 4, Construction::extend_two_plus_two}, {29, 6, Construction::eq1}};
    std::vector<std::string> names;
    for (std::uint64_t seed = 1; names.size() < 20; ++seed) {
        const auto& cs = cases[names.size() % 10];
        SearchSpec s;
        s.q = cs.q;
        s.n = cs.n;
        s.construction = cs.c;
        s.budget = 30;
        s.seed = seed;
        names.push_back(archive_write(run_search(s).record, dir));
    }
    const auto clean = archive_verify(dir);
    const auto victim = names[7];
    auto g = matrix_from_text(detail::read_file(dir / victim / "generator.txt"));
    g(0, g.cols() - 1) = (g(0, g.cols() - 1) + 1) % g.field().q();
    detail::write_file(dir / victim / "generator.txt", to_text(g));
    const auto dirty = archive_verify(dir);
    std::set<std::string> flagged;
    for (const auto& i : dirty.issues) flagged.insert(i.path);
    o.pass = clean.records == 20 && clean.clean() && dirty.records == 20 && flagged == std::set<std::string>{victim};
    o.detail = std::to_string(clean.records) + " records, " + std::to_string(clean.issues.size()) +
               " mismatches; after corrupting " + victim + ": " + std::to_string(dirty.issues.size()) + " issue(s)" +
               (dirty.issues.empty() ? "" : " (" + dirty.issues.front().path + ": " + dirty.issues.front().message + ")");
    fs::remove_all(dir);
    return o;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"group orders", group_orders},
        {"orbit of e1 over GF(3), n=6", orbit_claim},
        {"deterministic cells (3,4) and (5,4)", deterministic_cells},
        {"stochastic cells", stochastic_cells},
        {"oracle equivalence", oracle_equivalence},
        {"algebraic invariants", invariants},
        {"archive round trip", archive_round_trip},
    };
    int failures = 0, index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %d %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", index, name, secs, o.detail.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures ? 1 : 0;
}
