#include <gtest/gtest.h>

#include <set>

#include "oracle.hpp"
#include "sdc/construct.hpp"
#include "sdc/extend.hpp"
#include "sdc/group.hpp"

using namespace sdc;

namespace {

oracle::Mat to_oracle(const FqMatrix& m) {
    oracle::Mat out(m.rows(), oracle::Vec(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    return out;
}

// isotropic vectors of dual(c) outside c, by enumeration of all of F_q^n
std::vector<oracle::Vec> isotropic_outside(const LinearCode& c) {
    const auto g = to_oracle(c.generator());
    const std::int64_t q = c.field().q();
    std::set<oracle::Vec> words;
    for (const auto& m : oracle::messages(c.dimension(), q)) words.insert(oracle::encode(m, g, q));
    std::vector<oracle::Vec> out;
    for (const auto& v : oracle::messages(c.length(), q)) {
        bool ok = oracle::dot(v, v, q) == 0 && !words.count(v);
        for (const auto& r : g) ok = ok && oracle::dot(v, r, q) == 0;
        if (ok) out.push_back(v);
    }
    return out;
}

std::size_t best_completion_distance(const LinearCode& c) {
    std::size_t best = 0;
    for (auto v : isotropic_outside(c)) {
        auto g = to_oracle(c.generator());
        g.push_back(v);
        best = std::max(best, oracle::min_distance(g, c.length(), c.field().q()));
    }
    return best;
}

}  // namespace

TEST(ExtendTwo, Example) {
    PrimeField f(5);
    const LinearCode c(FqMatrix::from_rows(f, {{1, 2}}));
    const auto e = extend_two(c, two_col_pattern(f, {1}));
    EXPECT_EQ(e.generator(), FqMatrix::from_rows(f, {{1, 2, 2, 1}}));
    EXPECT_TRUE(is_self_orthogonal(e));
}

TEST(ExtendTwo, ZeroLambdasPadWithZeros) {
    PrimeField f(13);
    const auto c = from_witness(build_eq1(random_orthogonal(full_orthogonal_generators(3, f), 24, 3)));
    const auto e = extend_two(c, two_col_pattern(f, {0, 0, 0}));
    EXPECT_TRUE(is_self_orthogonal(e));
    EXPECT_EQ(min_distance_exhaustive(e), min_distance_exhaustive(c));
}

TEST(ExtendTwo, KeepsDistanceOfFoundMdsCode) {
    PrimeField f(13);
    const auto gens = full_orthogonal_generators(4, f);
    std::optional<LinearCode> c;
    for (std::uint64_t s = 0; !c && s < 5000; ++s) {
        auto cand = from_witness(build_eq1(random_orthogonal(gens, 32, s)));
        if (min_distance_bz(cand).distance == 5) c = cand;
    }
    ASSERT_TRUE(c) << "no [8,4,5] code over GF(13) among 5000 samples";
    Rng rng(1);
    for (int t = 0; t < 20; ++t) {
        std::vector<elem_t> l(4);
        for (auto& x : l) x = static_cast<elem_t>(uniform_below(rng, 13));
        const auto e = extend_two(*c, two_col_pattern(f, l));
        EXPECT_TRUE(is_self_orthogonal(e));
        EXPECT_EQ(e.length(), 10u);
        EXPECT_GE(min_distance_exhaustive(e), 5u);
    }
}

TEST(ExtendTwo, RejectsBadPatterns) {
    PrimeField f(5);
    const LinearCode c(FqMatrix::from_rows(f, {{1, 2}}));
    EXPECT_THROW(extend_two(c, {ExtensionKind::two_col, {1}, {1}}), invalid_argument);
    EXPECT_THROW(extend_two(c, two_col_pattern(f, {1, 1})), invalid_argument);
    EXPECT_THROW(extend_two(LinearCode(FqMatrix::from_rows(f, {{1, 1}})), two_col_pattern(f, {1})), invalid_argument);
}

TEST(ExtendFour, PatternOrthogonality) {
    for (unsigned q : {3u, 5u, 7u, 11u}) {
        PrimeField f(q);
        const auto s = four_squares_zero(f);
        const oracle::Vec p1{s.a, s.b, s.c, s.d}, p2{q - s.b, s.a, q - s.d, s.c};
        EXPECT_EQ(oracle::dot(p1, p1, q), 0);
        EXPECT_EQ(oracle::dot(p2, p2, q), 0);
        EXPECT_EQ(oracle::dot(p1, p2, q), 0);
    }
}

TEST(ExtendFour, Gf3Example) {
    PrimeField f(3);
    const auto c = from_witness(build_eq2(FqMatrix::identity(f, 2), SquarePair{1, 1}));
    const ExtensionPattern pattern{ExtensionKind::four_col, {1, 1, 1, 0}, {1, 1}};
    const auto rows = four_col_rows(c, pattern);
    EXPECT_TRUE(oracle::self_orthogonal(to_oracle(rows.generator()), 3));
    const auto xs = isotropic_outside(rows);
    ASSERT_FALSE(xs.empty());
    Vector x(xs.front().begin(), xs.front().end());
    const auto e = extend_four(c, pattern, x);
    EXPECT_EQ(e.length(), 8u);
    EXPECT_EQ(e.dimension(), 3u);
    EXPECT_TRUE(oracle::self_orthogonal(to_oracle(e.generator()), 3));

    const std::size_t best = best_completion_distance(e);
    const auto done = complete_to_self_dual(e, 64, 5);
    EXPECT_TRUE(is_self_dual(done.code));
    EXPECT_TRUE(is_subcode(e, done.code));
    EXPECT_EQ(done.distance, min_distance_exhaustive(done.code));
    EXPECT_EQ(done.distance, best);

    EXPECT_THROW(extend_four(c, pattern, Vector(8, 0)), invalid_argument);  // zero lies in the code
    EXPECT_THROW(extend_four(c, pattern, Vector(7, 0)), invalid_argument);
}

TEST(ExtendTwoPlusTwo, Gf5Example) {
    PrimeField f(5);
    const LinearCode c(FqMatrix::from_rows(f, {{1, 2}}));
    const ExtensionPattern pattern{ExtensionKind::two_plus_two, {2, 2}, {1, 1}};
    // (a,1,c,1).(a,1,c,1) and the cross pattern vanish
    EXPECT_EQ(oracle::dot({2, 1, 2, 1}, {2, 1, 2, 1}, 5), 0);
    EXPECT_EQ(oracle::dot({2, 1, 2, 1}, {4, 2, 4, 2}, 5), 0);

    // brute force: x in GF(5)^3, orthogonal to the extended A-row (2 | 2, 1), isotropic, nonzero
    std::set<oracle::Vec> lines;
    for (const auto& v : oracle::messages(3, 5)) {
        if (!oracle::weight(v) || oracle::dot(v, v, 5) || oracle::dot(v, {2, 2, 1}, 5)) continue;
        const auto lead = *std::find_if(v.begin(), v.end(), [](auto x) { return x != 0; });
        oracle::Vec n = v;
        for (auto& x : n) x = oracle::mod(x * (lead == 1 ? 1 : lead == 2 ? 3 : lead == 3 ? 2 : 4), 5);
        lines.insert(n);
    }
    const auto cands = two_plus_two_candidates(c, pattern);
    std::set<oracle::Vec> got;
    for (auto x : cands) {
        const auto lead = *std::find_if(x.begin(), x.end(), [](auto y) { return y != 0; });
        const elem_t inv = f.inv(lead);
        oracle::Vec n;
        for (auto y : x) n.push_back(f.mul(y, inv));
        got.insert(n);
    }
    EXPECT_EQ(got, lines);
    ASSERT_FALSE(cands.empty());
    for (const auto& x : cands) {
        const auto e = extend_two_plus_two(c, pattern, x);
        EXPECT_EQ(e.length(), 6u);
        EXPECT_EQ(e.dimension(), 2u);
        EXPECT_TRUE(oracle::self_orthogonal(to_oracle(e.generator()), 5));
        const auto done = complete_to_self_dual(e, 8, 1);
        EXPECT_TRUE(is_self_dual(done.code));
        EXPECT_EQ(done.code.dimension(), 3u);
    }
    EXPECT_THROW(extend_two_plus_two(c, pattern, Vector{1, 0, 0}), invalid_argument);
}

TEST(SplitExtend, DegenerateForMdsCodes) {
    PrimeField f(13);
    const auto gens = full_orthogonal_generators(3, f);
    for (std::uint64_t s = 0; s < 200; ++s) {
        const auto c = from_witness(build_eq1(random_orthogonal(gens, 24, s)));
        if (min_distance_exhaustive(c) != 4) continue;
        EXPECT_THROW(split_extend(c, two_col_pattern(f, {1, 1, 1})), degenerate_split);
        return;
    }
    FAIL() << "no [6,3,4] code found";
}

TEST(SplitExtend, MatchesSpanOfMinimumWeightWords) {
    PrimeField f(13);
    const auto gens = full_orthogonal_generators(3, f);
    std::size_t proper = 0;
    for (std::uint64_t s = 0; s < 300; ++s) {
        const auto c = from_witness(build_eq1(random_orthogonal(gens, 24, s)));
        const auto g = to_oracle(c.generator());
        const std::size_t d = oracle::min_distance(g, 6, 13);
        oracle::Mat low;
        for (const auto& m : oracle::messages(3, 13)) {
            auto w = oracle::encode(m, g, 13);
            if (oracle::weight(w) == d) low.push_back(w);
        }
        // rank of the span: count its elements through a reduced basis
        const std::size_t r = rank(LinearCode::spanned_by([&] {
                                        FqMatrix m(f, 0, 6);
                                        for (const auto& w : low) m.append_row(Vector(w.begin(), w.end()));
                                        return m;
                                    }()).generator());
        const auto pattern = two_col_pattern(f, {1, 2, 3});
        if (r == 3) {
            EXPECT_THROW(split_extend(c, pattern), degenerate_split);
            continue;
        }
        ++proper;
        const auto sp = split_extend(c, pattern);
        EXPECT_EQ(sp.subcode_dimension, r);
        EXPECT_EQ(sp.base_distance, d);
        EXPECT_TRUE(oracle::self_orthogonal(to_oracle(sp.code.generator()), 13));
        EXPECT_EQ(sp.code.length(), 8u);
        EXPECT_EQ(sp.code.dimension(), 3u);
        for (std::size_t i = 0; i < r; ++i) {
            EXPECT_EQ(hamming_weight(sp.code.generator().row(i)), d);
            EXPECT_EQ(sp.code.generator()(i, 6), 0u);
            EXPECT_EQ(sp.code.generator()(i, 7), 0u);
        }
        EXPECT_GE(min_distance_exhaustive(sp.code), d);
        if (proper >= 5) break;
    }
    EXPECT_GT(proper, 0u);
}

TEST(Completion, Examples) {
    PrimeField f(5);
    const LinearCode c(FqMatrix::from_rows(f, {{1, 2}}));
    const auto same = complete_to_self_dual(c, 4, 1);
    EXPECT_TRUE(same_code(same.code, c));

    const auto e = extend_two(c, two_col_pattern(f, {1}));
    EXPECT_EQ(dual(e).dimension(), 3u);
    EXPECT_FALSE(isotropic_outside(e).empty());
    const auto done = complete_to_self_dual(e, 4, 1);
    EXPECT_TRUE(is_self_dual(done.code));
    EXPECT_EQ(done.code.dimension(), 2u);
    EXPECT_TRUE(is_subcode(e, done.code));
    EXPECT_EQ(done.distance, best_completion_distance(e));
}

TEST(Completion, Deterministic) {
    PrimeField f(13);
    const auto c = from_witness(build_eq1(random_orthogonal(full_orthogonal_generators(3, f), 24, 8)));
    const auto e = extend_two(c, two_col_pattern(f, {3, 1, 4}));
    const auto a = complete_to_self_dual(e, 6, 99), b = complete_to_self_dual(e, 6, 99);
    EXPECT_EQ(a.code.generator(), b.code.generator());
    EXPECT_EQ(a.trial, b.trial);
    EXPECT_THROW(complete_to_self_dual(LinearCode(FqMatrix::from_rows(f, {{1, 1, 0}})), 1, 1), invalid_argument);
}
