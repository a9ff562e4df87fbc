#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "sdc/sdc.hpp"

using namespace sdc;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / ("sdc_harness_" + name);
    fs::remove_all(p);
    return p;
}

SearchSpec spec(unsigned q, std::size_t n, Construction c, std::uint64_t budget, std::uint64_t seed = 1) {
    SearchSpec s;
    s.q = q;
    s.n = n;
    s.construction = c;
    s.budget = budget;
    s.seed = seed;
    return s;
}

}  // namespace

TEST(Spec, ConstructionNames) {
    for (auto c : {Construction::eq1, Construction::eq2, Construction::eq3, Construction::eq4_diffuse,
                   Construction::extend_two, Construction::extend_four, Construction::extend_two_plus_two,
                   Construction::split})
        EXPECT_EQ(construction_from_string(to_string(c)), c);
    EXPECT_THROW(construction_from_string("eq9"), invalid_argument);
}

TEST(Spec, Validation) {
    EXPECT_THROW(spec(2, 2, Construction::eq2, 1).validate(), invalid_argument);
    EXPECT_THROW(spec(9, 2, Construction::eq2, 1).validate(), invalid_argument);
    EXPECT_THROW(spec(7, 3, Construction::eq3, 1).validate(), invalid_argument);
    EXPECT_THROW(spec(7, 4, Construction::eq1, 1).validate(), invalid_argument);
    EXPECT_THROW(spec(13, 3, Construction::eq2, 1).validate(), invalid_argument);
    EXPECT_THROW(spec(13, 4, Construction::eq2, 0).validate(), invalid_argument);
    auto s = spec(13, 4, Construction::split, 1);
    s.mode = SearchMode::exhaustive;
    EXPECT_THROW(s.validate(), invalid_argument);
    s = spec(13, 4, Construction::eq1, 1);
    s.target = 6;
    EXPECT_THROW(s.validate(), invalid_argument);
    s = spec(109, 11, Construction::eq1, 1);
    s.policy.engine = DistanceEngine::exhaustive;
    EXPECT_THROW(s.validate(), invalid_argument);
    EXPECT_NO_THROW(spec(13, 4, Construction::extend_two_plus_two, 1).validate());
    EXPECT_EQ(spec(13, 8, Construction::eq3, 1).group_dimension(), 4u);
    EXPECT_EQ(spec(13, 8, Construction::eq3, 1).group_family(), GroupFamily::full);
    EXPECT_EQ(spec(13, 8, Construction::eq1, 1).group_family(), GroupFamily::ku);
}

TEST(Search, SmallRandomSearch) {
    const auto r = run_search(spec(3, 2, Construction::eq2, 20));
    EXPECT_EQ(r.record.distance, 3u);
    EXPECT_EQ(r.record.classification, Classification::mds);
    EXPECT_TRUE(is_self_dual(r.record.code()));
    ASSERT_TRUE(r.record.enumerator);
    EXPECT_EQ(r.record.enumerator->minimum_distance(), 3u);
    EXPECT_EQ(r.record.provenance.get("search.construction"), "eq2");
    EXPECT_TRUE(r.record.provenance.get("sample_seed"));
    EXPECT_TRUE(r.record.timestamp.empty());
}

TEST(Search, EveryConstructionYieldsSelfDualCodes) {
    for (auto c : {Construction::eq1, Construction::eq2, Construction::eq3, Construction::eq4_diffuse,
                   Construction::extend_two, Construction::extend_four, Construction::extend_two_plus_two,
                   Construction::split}) {
        auto s = spec(13, 4, c, 40, 7);
        s.policy.bz_budget = 1'000'000;
        try {
            const auto r = run_search(s);
            EXPECT_TRUE(is_self_dual(r.record.code())) << to_string(c);
            EXPECT_EQ(r.record.length, 8u);
            EXPECT_LE(r.record.distance, 5u);
        } catch (const not_found&) {
            EXPECT_EQ(c, Construction::split) << to_string(c);  // every sample may be MDS, hence degenerate
        }
    }
}

TEST(Search, DeterministicAcrossThreadCounts) {
    auto s = spec(13, 5, Construction::eq1, 600, 42);
    const auto a = run_search(s);
    s.threads = 3;
    const auto b = run_search(s);
    EXPECT_EQ(a.record, b.record);
    EXPECT_EQ(a.iterations, b.iterations);
    EXPECT_EQ(to_text(a.record.generator), to_text(b.record.generator));
    EXPECT_EQ(a.record.provenance.to_text(), b.record.provenance.to_text());
}

TEST(Search, ExhaustiveEq2OverGf5) {
    auto s = spec(5, 2, Construction::eq2, 1);
    s.mode = SearchMode::exhaustive;
    EXPECT_THROW(run_search(s), invalid_argument);  // 8 elements x 4 root pairs exceed a budget of 1
    s.budget = 1000;
    const auto r = run_search(s);
    EXPECT_TRUE(r.exhausted);
    EXPECT_EQ(r.record.distance, 2u);
    EXPECT_EQ(r.failed, 0u);
}

TEST(Table, Lookups) {
    EXPECT_EQ(table2_lookup(11, 8)->target_distance(), 5u);
    EXPECT_EQ(table2_lookup(17, 12)->target_distance(), 6u);
    EXPECT_EQ(table2_lookup(37, 18)->target_distance(), 8u);
    EXPECT_EQ(table2_lookup(5, 4)->target_distance(), 2u);
    EXPECT_EQ(table2_lookup(13, 12)->symbol(), "A");
    EXPECT_TRUE(table2_lookup(53, 4)->is_new());
    EXPECT_FALSE(table2_lookup(3, 4)->is_new());
    EXPECT_FALSE(table2_lookup(3, 6));
    EXPECT_FALSE(table2_lookup(113, 4));
    for (const auto& c : table2_cells()) {
        EXPECT_LE(c.target_distance(), c.length / 2 + 1);
        EXPECT_GE(c.target_distance(), 2u);
    }
}

TEST(Cell, SmallCellsAreMet) {
    for (auto [q, len] : {std::pair{3u, 4u}, {5u, 4u}}) {
        const auto rep = reproduce_cell(q, len, 1000, 1);
        EXPECT_TRUE(rep.met()) << q << " " << len;
        EXPECT_EQ(rep.achieved, rep.target);
        ASSERT_TRUE(rep.best);
        EXPECT_TRUE(is_self_dual(rep.best->code()));
    }
    EXPECT_THROW(reproduce_cell(3, 6, 100, 1), not_found);
}

TEST(Archive, RoundTripAndVerify) {
    const auto dir = fresh_dir("roundtrip");
    const auto r1 = run_search(spec(3, 2, Construction::eq2, 20)).record;
    const auto r2 = run_search(spec(13, 3, Construction::eq1, 50)).record;
    const auto n1 = archive_write(r1, dir);
    const auto n2 = archive_write(r1, dir);
    EXPECT_NE(n1, n2);
    archive_write(r2, dir);
    const auto idx = read_index(dir);
    ASSERT_EQ(idx.size(), 3u);
    EXPECT_EQ(archive_read(dir, idx[0]), r1);
    EXPECT_EQ(archive_read(dir, idx[2]), r2);
    const auto rep = archive_verify(dir);
    EXPECT_EQ(rep.records, 3u);
    EXPECT_TRUE(rep.clean());
    fs::remove_all(dir);
}

TEST(Archive, TamperingIsDetected) {
    const auto dir = fresh_dir("tamper");
    const auto r = run_search(spec(13, 3, Construction::eq1, 50)).record;
    const auto name = archive_write(r, dir);
    ASSERT_TRUE(archive_verify(dir).clean());

    auto text = to_text(r.generator);
    auto g = r.generator;
    g(0, g.cols() - 1) = (g(0, g.cols() - 1) + 1) % 13;
    {
        std::ofstream out(dir / name / "generator.txt");
        out << to_text(g);
    }
    auto rep = archive_verify(dir);
    EXPECT_FALSE(rep.clean());
    {
        std::ofstream out(dir / name / "generator.txt");
        out << text;
    }
    EXPECT_TRUE(archive_verify(dir).clean());
    fs::remove(dir / name / "provenance.txt");
    rep = archive_verify(dir);
    ASSERT_EQ(rep.issues.size(), 1u);
    EXPECT_NE(rep.issues[0].message.find("unreadable"), std::string::npos);
    EXPECT_THROW(archive_verify(dir / "missing"), io_error);
    fs::remove_all(dir);
}

TEST(Archive, CertificateAndBzRecords) {
    PrimeField f(13);
    const auto gens = full_orthogonal_generators(4, f);
    std::optional<LinearCode> mds, other;
    for (std::uint64_t s = 0; (!mds || !other) && s < 5000; ++s) {
        auto c = from_witness(build_eq1(random_orthogonal(gens, 32, s)));
        const auto d = min_distance_exhaustive(c);
        if (d == 5 && !mds) mds = c;
        if (d == 4 && !other) other = c;
    }
    ASSERT_TRUE(mds && other);
    DistancePolicy small;
    small.exhaustive_cap = 1000;  // below 13^4, so neither record carries an enumerator
    const auto rm = make_record(*mds, 5, "upper-bound", small, {});
    EXPECT_TRUE(rm.mds_certificate);
    EXPECT_FALSE(rm.enumerator);
    const auto ro = make_record(*other, 4, "exact", small, {});
    EXPECT_FALSE(ro.mds_certificate);
    EXPECT_FALSE(ro.enumerator);
    EXPECT_EQ(ro.provenance.get("distance_engine"), "bz");

    const auto dir = fresh_dir("cert");
    const auto nm = archive_write(rm, dir);
    archive_write(ro, dir);
    EXPECT_TRUE(fs::exists(dir / nm / "mds_certificate.txt"));
    EXPECT_TRUE(archive_verify(dir, small).clean());

    // claim MDS for the d = 4 code: the certificate must fail
    auto forged = ro;
    forged.distance = 5;
    forged.classification = Classification::mds;
    forged.mds_certificate = true;
    archive_write(forged, dir);
    const auto rep = archive_verify(dir, small);
    EXPECT_EQ(rep.issues.size(), 1u);
    fs::remove_all(dir);
}
