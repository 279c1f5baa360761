#include "convert.hpp"
#include "oracles.hpp"

#include <wrtnct/dp_engine.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace wrtnct;

namespace {

int nonzero(const CoeffTable &t) {
    int count = 0;
    for (const Complex &z : t.values()) count += std::abs(z) > 1e-12;
    return count;
}

/// Coefficient vector of prod_i (e_{v_i} + e_{-v_i}) read off the dense operator's column at e_{0,0}.
std::vector<oracle::cd> oracle_table(const std::vector<std::pair<long long, long long>> &ins, int n) {
    oracle::Mat w = oracle::Mat::Identity(n * n, n * n);
    for (const auto &[p, s] : ins) w = oracle::L_B(p, s, n) * w;
    std::vector<oracle::cd> out(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n * n; ++i) out[static_cast<std::size_t>(i)] = w(i, 0);
    return out;
}

}  // namespace

TEST(InitTable, Delta) {
    const Level level(5);
    const CoeffTable t = init_table(level);
    EXPECT_EQ(t.size(), 25);
    EXPECT_EQ((t[WeylIndex{0, 0}]), Complex(1.0, 0.0));
    EXPECT_EQ(nonzero(t), 1);
    EXPECT_DOUBLE_EQ(t.l1_norm(), 1.0);
}

TEST(DpUpdate, Examples) {
    const Level level(5);
    const CoeffTable t1 = dp_update(init_table(level), {1, 0});
    EXPECT_LT(std::abs(t1[WeylIndex{1, 0}] - 1.0), 1e-14);
    EXPECT_LT(std::abs(t1[WeylIndex{4, 0}] - 1.0), 1e-14);
    EXPECT_EQ(nonzero(t1), 2);

    const CoeffTable t2 = dp_update(t1, {0, 1});
    EXPECT_EQ(nonzero(t2), 4);
    EXPECT_LT(std::abs(t2[WeylIndex{1, 1}] - level.root(4)), 1e-14);
}

TEST(DpUpdate, NormAtMostDoubles) {
    std::mt19937_64 rng(43);
    std::uniform_int_distribution<std::int64_t> coord(-6, 6);
    for (int n : {3, 5, 7}) {
        CoeffTable t = init_table(Level(n));
        for (int k = 0; k < 12; ++k) {
            const double before = t.l1_norm();
            t = dp_update(t, {coord(rng), coord(rng)});
            EXPECT_LE(t.l1_norm(), 2.0 * before + 1e-9);
            EXPECT_LE(t.l1_norm(), std::ldexp(1.0, k + 1) + 1e-9);
        }
    }
}

TEST(DpUpdate, RejectsAliasing) {
    CoeffTable t = init_table(Level(3));
    EXPECT_THROW(dp_update_into(t, {1, 0}, t), std::invalid_argument);
}

TEST(DpUpdate, PrecomputedGridAgrees) {
    std::mt19937_64 rng(47);
    for (int n : {3, 7, 11}) {
        const auto ins = testing_util::to_insertions(oracle::random_insertions(rng, 10, 9));
        const Level level(n);
        EXPECT_LT(run_dp(ins, level, true).max_abs_diff(run_dp(ins, level, false)), 1e-12);
    }
}

TEST(BruteForce, Examples) {
    const Level level(5);
    EXPECT_LT(brute_force_table({}, level).max_abs_diff(init_table(level)), 1e-15);
    EXPECT_LT(brute_force_table({{1, 0}}, level).max_abs_diff(dp_update(init_table(level), {1, 0})), 1e-15);
    EXPECT_THROW(brute_force_table(InsertionList(21, IntPair{1, 0}), level), std::length_error);
}

TEST(BruteForce, EqualsDp) {
    std::mt19937_64 rng(53);
    for (int n : {3, 5, 7}) {
        const Level level(n);
        for (int i = 0; i < 50; ++i) {
            const auto ins = testing_util::to_insertions(oracle::random_insertions(rng, 10, 12));
            EXPECT_LT(run_dp(ins, level).max_abs_diff(brute_force_table(ins, level)), 1e-9);
        }
    }
}

TEST(RunDp, MatchesDenseOracleTable) {
    std::mt19937_64 rng(59);
    for (int n : {3, 5, 7}) {
        const Level level(n);
        for (int i = 0; i < 10; ++i) {
            const auto raw = oracle::random_insertions(rng, 5, 8);
            const CoeffTable t = run_dp(testing_util::to_insertions(raw), level);
            const auto expected = oracle_table(raw, n);
            for (int k = 0; k < level.dim(); ++k) {
                EXPECT_LT(std::abs(t.at_flat(k) - expected[static_cast<std::size_t>(k)]), 1e-10);
            }
        }
    }
}

TEST(RunDp, OrderMatters) {
    const Level level(5);
    const CoeffTable ab = run_dp({{1, 0}, {0, 1}}, level);
    const CoeffTable ba = run_dp({{0, 1}, {1, 0}}, level);
    EXPECT_GT(ab.max_abs_diff(ba), 0.1);
}

TEST(WrtTrace, Examples) {
    const Level level(5);
    const WrtValue id = wrt_trace(SL2Matrix::identity(), {}, level);
    EXPECT_LT(std::abs(id.z - Complex(25.0, 0.0)), 1e-12);
    EXPECT_LT(std::abs(id.normalized - Complex(1.0, 0.0)), 1e-12);
    EXPECT_LT(std::abs(wrt_trace(SL2Matrix::identity(), {{1, 0}}, level).z), 1e-12);
}

TEST(WrtTrace, MatchesDenseOracle) {
    std::mt19937_64 rng(61);
    for (int n : {3, 5, 7, 9}) {
        for (int i = 0; i < 10; ++i) {
            const auto w = oracle::random_word(rng, 12);
            const auto ins = oracle::random_insertions(rng, 4, 10);
            const WrtValue v = wrt_trace(testing_util::to_word(w), testing_util::to_insertions(ins), Level(n));
            const oracle::cd expected = oracle::dense_trace(w, ins, n);
            EXPECT_LT(std::abs(v.z - expected), 1e-8) << "N=" << n;
            EXPECT_NEAR(v.magnitude, std::abs(expected), 1e-8);
        }
    }
}

TEST(WrtTrace, MatrixOverloadUsesDecomposition) {
    const Level level(7);
    const SL2Matrix g = SL2Matrix::make(2, 1, 1, 1);
    const InsertionList ins{{1, 2}, {3, -1}};
    EXPECT_LT(std::abs(wrt_trace(g, ins, level).z - wrt_trace(decompose(g), ins, level).z), 1e-14);
}
