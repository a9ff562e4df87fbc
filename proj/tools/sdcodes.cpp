// sdcodes: self-dual codes from orthogonal matrices.
//
// exit codes: 0 ok, 1 target not met / verification failed, 2 invalid spec, 3 I/O error,
// 4 internal consistency failure.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdc/sdc.hpp"

namespace {

using namespace sdc;

constexpr int exit_ok = 0, exit_unmet = 1, exit_invalid = 2, exit_io = 3, exit_internal = 4;

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void print_record(std::ostream& os, const CodeRecord& r) {
    os << "[" << r.length << ", " << r.dimension << ", " << r.distance << "] over GF(" << r.q << ")  "
       << to_string(r.classification) << "\n";
    if (r.enumerator) {
        os << "weight enumerator:";
        for (const auto& a : r.enumerator->coefficients) os << ' ' << a;
        os << "\n";
    }
    if (r.mds_certificate) os << "MDS certificate: all square minors of the redundancy part are nonsingular\n";
    os << "generator:\n" << r.generator;
    os << "provenance:\n" << r.provenance.to_text();
}

int archive_out(CodeRecord r, const std::string& dir, bool stamp) {
    if (dir.empty()) return exit_ok;
    if (stamp) r.timestamp = utc_timestamp();
    const auto name = archive_write(r, dir);
    std::cout << "archived: " << (std::filesystem::path(dir) / name).string() << "\n";
    return exit_ok;
}

Vector parse_vector(const std::string& s) {
    Vector v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            const long long x = std::stoll(tok);
            if (x < 0) throw invalid_argument("negative entry");
            v.push_back(static_cast<elem_t>(x));
        } catch (const std::logic_error&) {
            throw invalid_argument("cannot parse vector entry '" + tok + "'");
        }
    }
    return v;
}

FqMatrix read_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot read " + path);
    return matrix_from_text(in);
}

// key=value block shared by the group subcommands
void print_kv(const std::vector<std::pair<std::string, std::string>>& kv) {
    std::size_t w = 0;
    for (const auto& [k, v] : kv) w = std::max(w, k.size());
    for (const auto& [k, v] : kv) std::cout << std::left << std::setw(static_cast<int>(w) + 2) << (k + ":") << v << "\n";
    std::cout << "\n";
    for (const auto& [k, v] : kv) std::cout << k << "=" << v << "\n";
}

struct Common {
    unsigned q = 0;
    std::size_t n = 0;
    std::uint64_t seed = 1;
    std::string engine = "auto";
    std::uint64_t max_enum = 10'000'000;
    std::string out;
    bool no_timestamp = false;

    DistancePolicy policy() const {
        DistancePolicy p;
        p.engine = distance_engine_from_string(engine);
        p.exhaustive_cap = max_enum;
        return p;
    }
};

void add_engine(CLI::App* app, Common& c) {
    app->add_option("--engine", c.engine, "distance engine")
        ->check(CLI::IsMember({"auto", "exhaustive", "bz", "mds-cert"}))
        ->capture_default_str();
    app->add_option("--max-enum", c.max_enum, "enumerate codes with q^k up to this cap")->capture_default_str();
}

int run(int argc, char** argv) {
    CLI::App app{"Self-dual codes over prime fields from orthogonal matrices"};
    app.require_subcommand(1);
    Common c;

    // search
    auto* search = app.add_subcommand("search", "randomized (or exhaustive) search campaign");
    SearchSpec spec;
    std::string construction = "eq1", family;
    std::size_t target = 0;
    bool exhaust = false;
    search->add_option("--q", c.q, "prime field size")->required();
    search->add_option("--n", c.n, "half length: codes are [2n, n]")->required();
    search->add_option("--construction", construction, "eq1|eq2|eq3|eq4-diffuse|extend-two|extend-four|extend-2+2|split")
        ->capture_default_str();
    search->add_option("--iters", spec.budget, "iteration budget")->capture_default_str();
    search->add_option("--word-length", spec.word_length, "random word length (0: 8 x group dimension)");
    search->add_option("--seed", c.seed, "master seed")->capture_default_str();
    search->add_option("--family", family, "ku|full (default: ku from dimension 5)");
    search->add_option("--target", target, "stop at this d; exit 1 if not reached");
    search->add_option("--threads", spec.threads, "worker threads")->capture_default_str();
    search->add_option("--screen-budget", spec.screen_budget, "BZ work per sample")->capture_default_str();
    search->add_flag("--exhaust", exhaust, "enumerate the whole orthogonal group (eq1/eq2/eq3, small n)");
    search->add_option("--out", c.out, "archive directory");
    search->add_flag("--no-timestamp", c.no_timestamp, "omit the timestamp from archived records");
    add_engine(search, c);

    // cell
    auto* cell = app.add_subcommand("cell", "reproduce a cell of the best-known table");
    std::uint64_t cell_budget = 1'000'000;
    cell->add_option("--q", c.q, "prime field size")->required();
    cell->add_option("--n", c.n, "half length (the cell is at length 2n)")->required();
    cell->add_option("--iters", cell_budget, "sample budget")->capture_default_str();
    cell->add_option("--seed", c.seed, "master seed")->capture_default_str();
    cell->add_option("--out", c.out, "archive directory");
    cell->add_flag("--no-timestamp", c.no_timestamp, "omit the timestamp from archived records");

    // extend
    auto* extend = app.add_subcommand("extend", "extend a self-dual code and complete it to a self-dual code");
    std::string in_path, kind = "two";
    std::size_t trials = 16;
    extend->add_option("--in", in_path, "generator matrix file of a self-dual code")->required();
    extend->add_option("--kind", kind, "two|four|2+2|split")
        ->check(CLI::IsMember({"two", "four", "2+2", "split"}))
        ->capture_default_str();
    extend->add_option("--trials", trials, "random completions to try")->capture_default_str();
    extend->add_option("--seed", c.seed, "master seed")->capture_default_str();
    extend->add_option("--out", c.out, "archive directory");
    extend->add_flag("--no-timestamp", c.no_timestamp, "omit the timestamp from archived records");
    add_engine(extend, c);

    // group
    auto* group = app.add_subcommand("group", "orthogonal group computations");
    group->require_subcommand(1);
    std::string gfamily = "ku", point;
    std::uint64_t cap = default_point_cap;
    auto group_opts = [&](CLI::App* a) {
        a->add_option("--q", c.q, "prime field size")->required();
        a->add_option("--n", c.n, "matrix size")->required();
        a->add_option("--cap", cap, "point cap for orbit computations")->capture_default_str();
    };
    auto* gorder = group->add_subcommand("order", "group order by Schreier-Sims");
    group_opts(gorder);
    gorder->add_option("--family", gfamily, "ku|full")->check(CLI::IsMember({"ku", "full"}))->capture_default_str();
    auto* gorbit = group->add_subcommand("orbit", "orbit of a vector");
    group_opts(gorbit);
    gorbit->add_option("--family", gfamily, "ku|full")->check(CLI::IsMember({"ku", "full"}))->capture_default_str();
    gorbit->add_option("--vector", point, "comma-separated vector (default e_1)");
    auto* gprobe = group->add_subcommand("probe", "compare |K_u| with |O_n(q)|");
    group_opts(gprobe);

    // verify
    auto* verify = app.add_subcommand("verify", "check a generator matrix file");
    verify->add_option("--in", in_path, "generator matrix file")->required();
    add_engine(verify, c);

    // archive check
    auto* archive = app.add_subcommand("archive", "archive maintenance");
    archive->require_subcommand(1);
    auto* check = archive->add_subcommand("check", "re-verify every record of an archive");
    std::string dir;
    check->add_option("--dir", dir, "archive directory")->required();
    add_engine(check, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_invalid;
    }

    if (*search) {
        spec.q = c.q;
        spec.n = c.n;
        spec.construction = construction_from_string(construction);
        spec.mode = exhaust ? SearchMode::exhaustive : SearchMode::random;
        spec.seed = c.seed;
        spec.policy = c.policy();
        if (!family.empty()) {
            if (family != "ku" && family != "full") throw invalid_argument("unknown family '" + family + "'");
            spec.family = family == "ku" ? GroupFamily::ku : GroupFamily::full;
        }
        if (target) spec.target = target;
        const auto r = run_search(spec);
        print_record(std::cout, r.record);
        std::cout << "iterations: " << r.iterations << (r.exhausted ? " (search space exhausted)" : "") << "\n";
        if (r.failed) std::cout << "failed samples: " << r.failed << "\n";
        archive_out(r.record, c.out, !c.no_timestamp);
        return target && r.record.distance < target ? exit_unmet : exit_ok;
    }

    if (*cell) {
        if (!table2_lookup(c.q, static_cast<unsigned>(2 * c.n)))
            throw invalid_argument("no target recorded for q = " + std::to_string(c.q) + ", 2n = " + std::to_string(2 * c.n));
        const auto rep = reproduce_cell(c.q, static_cast<unsigned>(2 * c.n), cell_budget, c.seed);
        std::cout << "cell (q=" << c.q << ", 2n=" << 2 * c.n << "): entry " << rep.cell.entry << ", target d = " << rep.target
                  << "\n";
        for (const auto& s : rep.strategies)
            std::cout << "  " << std::left << std::setw(12) << to_string(s.construction) << std::setw(11) << to_string(s.mode)
                      << " iterations " << std::setw(8) << s.iterations << " best d " << s.best_distance
                      << (s.exhausted ? "  (exhausted)" : "") << "\n";
        std::cout << "achieved d = " << rep.achieved << ": " << to_string(rep.status) << " (attempts: " << rep.attempts
                  << ")\n";
        if (rep.best) {
            print_record(std::cout, *rep.best);
            archive_out(*rep.best, c.out, !c.no_timestamp);
        }
        return rep.met() ? exit_ok : exit_unmet;
    }

    if (*extend) {
        const LinearCode base(read_matrix(in_path));
        if (!is_self_dual(base)) throw invalid_argument("input code is not self-dual");
        const auto& f = base.field();
        Rng rng(derive_seed(c.seed, 0));
        auto lambdas = [&](std::size_t k) {
            std::vector<elem_t> l(k);
            for (auto& x : l) x = static_cast<elem_t>(uniform_below(rng, f.q()));
            return l;
        };
        Provenance p;
        p.set("construction", "extend-" + kind);
        p.set("seed", c.seed);
        std::optional<LinearCode> partial;
        const std::size_t k = base.dimension();
        if (kind == "two") {
            partial = extend_two(base, two_col_pattern(f, lambdas(k)));
        } else if (kind == "split") {
            auto pattern = two_col_pattern(f, lambdas(k));
            try {
                partial = split_extend(base, pattern, c.policy().bz_budget).code;
            } catch (const degenerate_split& e) {
                std::cout << "split degenerate (" << e.what() << "); using the two-coordinate extension\n";
                partial = extend_two(base, pattern);
            }
        } else if (kind == "four") {
            const auto fs = four_squares_zero(f);
            ExtensionPattern pattern{ExtensionKind::four_col, {fs.a, fs.b, fs.c, fs.d}, lambdas(k)};
            const auto rows = four_col_rows(base, pattern);
            const auto x = random_isotropic_outside(rows, rng, 4096);
            if (!x) throw not_found("no isotropic x found for the four-coordinate extension");
            partial = extend_four(base, pattern, *x);
        } else {
            const elem_t a = sqrt_minus_one(f);
            ExtensionPattern pattern{ExtensionKind::two_plus_two, {a, a}, lambdas(k + 1)};
            const auto cands = two_plus_two_candidates(base, pattern);
            if (cands.empty()) throw not_found("no isotropic x for the two-plus-two extension");
            partial = extend_two_plus_two(base, pattern, cands[uniform_below(rng, cands.size())]);
        }
        const auto done = complete_to_self_dual(*partial, trials, derive_seed(c.seed, 1), c.policy().bz_budget);
        p.set("completion_trial", done.trial);
        const auto rec = make_record(done.code, done.distance, done.distance_exact ? "exact" : "upper-bound", c.policy(), p);
        print_record(std::cout, rec);
        archive_out(rec, c.out, !c.no_timestamp);
        return exit_ok;
    }

    if (*group) {
        const PrimeField f(c.q);
        const auto fam = gfamily == "ku" ? GroupFamily::ku : GroupFamily::full;
        if (*gorder) {
            const auto gens = make_generators(fam, c.n, f);
            const auto order = group_order(gens, cap);
            std::vector<std::pair<std::string, std::string>> kv{
                {"n", std::to_string(c.n)}, {"q", std::to_string(c.q)}, {"family", to_string(fam)}, {"order", order.str()}};
            std::string orbits;
            for (auto s : basic_orbit_sizes(gens, cap)) orbits += (orbits.empty() ? "" : ",") + std::to_string(s);
            kv.emplace_back("basic_orbits", orbits);
            if (f.is_odd()) kv.emplace_back("formula_O_n", orthogonal_group_order_formula(c.n, f).str());
            print_kv(kv);
        } else if (*gorbit) {
            const auto gens = make_generators(fam, c.n, f);
            const Vector v = point.empty() ? unit_vector(c.n, 0) : parse_vector(point);
            if (v.size() != c.n) throw invalid_argument("vector length differs from n");
            const auto orb = orbit(v, gens, cap);
            const elem_t norm = dot(f, v, v);
            std::vector<std::pair<std::string, std::string>> kv{{"n", std::to_string(c.n)},
                                                                {"q", std::to_string(c.q)},
                                                                {"family", to_string(fam)},
                                                                {"norm", std::to_string(norm)},
                                                                {"orbit_size", std::to_string(orb.size())}};
            std::uint64_t total = 1;
            for (std::size_t i = 0; i < c.n && total <= cap; ++i) total *= c.q;
            if (total <= cap) {
                std::size_t same_norm = 0;
                for (std::uint64_t code = 1; code < total; ++code) {
                    const auto w = decode_point(code, c.n, c.q);
                    same_norm += dot(f, w, w) == norm;
                }
                kv.emplace_back("vectors_with_norm", std::to_string(same_norm));
            }
            print_kv(kv);
        } else {
            const auto rep = conjecture_probe(c.n, f, cap);
            print_kv({{"n", std::to_string(rep.n)},
                      {"q", std::to_string(rep.q)},
                      {"ku_order", rep.ku_order.str()},
                      {"on_order", rep.on_order.str()},
                      {"index", rep.index.str()}});
        }
        return exit_ok;
    }

    if (*verify) {
        const FqMatrix g = read_matrix(in_path);
        const LinearCode code(g);
        const bool sd = is_self_dual(code), so = is_self_orthogonal(code);
        const auto d = compute_distance(code, c.policy());
        std::cout << "[" << code.length() << ", " << code.dimension() << "] over GF(" << g.field().q() << ")\n";
        std::cout << "self-orthogonal: " << (so ? "yes" : "no") << "\nself-dual: " << (sd ? "yes" : "no") << "\n";
        switch (d.kind) {
            case DistanceOutcome::Kind::exact: std::cout << "d = " << d.distance << " (" << to_string(d.used) << ")\n"; break;
            case DistanceOutcome::Kind::mds_certified: std::cout << "d = " << d.distance << " (MDS certificate)\n"; break;
            case DistanceOutcome::Kind::not_mds: std::cout << "not MDS (d unknown)\n"; break;
            default: std::cout << "d <= " << d.distance << " (unresolved within budget)\n";
        }
        if (sd && d.kind != DistanceOutcome::Kind::unresolved && d.kind != DistanceOutcome::Kind::not_mds)
            std::cout << "classification: " << to_string(classify(code, d.distance).kind) << "\n";
        return sd ? exit_ok : exit_unmet;
    }

    if (*check) {
        const auto rep = archive_verify(dir, c.policy());
        std::cout << "records: " << rep.records << "\nissues: " << rep.issues.size() << "\n";
        for (const auto& i : rep.issues) std::cout << "  " << i.path << ": " << i.message << "\n";
        return rep.clean() ? exit_ok : exit_unmet;
    }
    return exit_invalid;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const sdc::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const sdc::internal_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_internal;
    } catch (const sdc::not_found& e) {
        std::cerr << "not found: " << e.what() << "\n";
        return exit_unmet;
    } catch (const sdc::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    }
}
