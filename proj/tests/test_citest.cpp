#include <gtest/gtest.h>

#include <random>

#include <cbnet/citest.hpp>
#include <cbnet/error.hpp>

#include "test_support.hpp"

using namespace cbnet;
using cbnet::testing::make_db;

namespace {

PairTable table2x2(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    PairTable t;
    t.rows = 2;
    t.cols = 2;
    t.counts = {a, b, c, d};
    return t;
}

CaseDatabase diagonal_db(int per_cell) {
    std::vector<std::vector<int>> rows;
    for (int k = 0; k < per_cell; ++k) {
        rows.push_back({0, 0});
        rows.push_back({1, 1});
    }
    return make_db({2, 2}, rows);
}

}  // namespace

TEST(ChiSquareStat, BalancedTableIsZero) {
    std::vector<PairTable> t{table2x2(5, 5, 5, 5)};
    auto s = chi_square_stat(t);
    EXPECT_DOUBLE_EQ(s.statistic, 0.0);
    EXPECT_EQ(s.dof, 1);
}

TEST(ChiSquareStat, PerfectCorrelation) {
    std::vector<PairTable> t{table2x2(10, 0, 0, 10)};
    auto s = chi_square_stat(t);
    EXPECT_DOUBLE_EQ(s.statistic, 20.0);
    EXPECT_EQ(s.dof, 1);
}

TEST(ChiSquareStat, PoolsStrata) {
    std::vector<PairTable> t{table2x2(1, 0, 0, 1), table2x2(1, 0, 0, 1)};
    auto s = chi_square_stat(t);
    EXPECT_DOUBLE_EQ(s.statistic, 4.0);
    EXPECT_EQ(s.dof, 2);
}

TEST(ChiSquareStat, DropsEmptyRowsAndColumns) {
    PairTable t;
    t.rows = 3;
    t.cols = 3;
    // Middle row and column are empty; the rest is [[10,0],[0,10]].
    t.counts = {10, 0, 0, 0, 0, 0, 0, 0, 10};
    std::vector<PairTable> tables{t};
    auto s = chi_square_stat(tables);
    EXPECT_DOUBLE_EQ(s.statistic, 20.0);
    EXPECT_EQ(s.dof, 1);

    std::vector<PairTable> single_row{table2x2(3, 4, 0, 0)};
    EXPECT_EQ(chi_square_stat(single_row).dof, 0);
    EXPECT_EQ(chi_square_stat(single_row).statistic, 0.0);
    EXPECT_EQ(chi_square_stat({}).dof, 0);
}

TEST(ChiSquareStat, NegativeCellIsAnError) {
    std::vector<PairTable> t{table2x2(1, -1, 0, 1)};
    EXPECT_THROW(chi_square_stat(t), ArgumentError);
}

TEST(ChiSquarePvalue, Examples) {
    EXPECT_DOUBLE_EQ(chi_square_pvalue(0.0, 1), 1.0);
    EXPECT_DOUBLE_EQ(chi_square_pvalue(5.0, 0), 1.0);
    EXPECT_NEAR(chi_square_pvalue(20.0, 1), 7.74e-6, 1e-7);
    EXPECT_NEAR(chi_square_pvalue(2.706, 1), 0.100, 0.002);
}

TEST(ChiSquarePvalue, AgreesWithQuadrature) {
    for (int dof : {1, 2, 3, 5, 8})
        for (double x : {0.1, 0.5, 1.0, 2.706, 4.0, 9.0, 20.0, 35.0}) {
            const double expected = cbnet::testing::quadrature_chi_square_tail(x, dof);
            EXPECT_NEAR(chi_square_pvalue(x, dof), expected, 1e-8 + 1e-6 * expected) << "x=" << x << " dof=" << dof;
        }
}

TEST(ChiSquarePvalue, MonotoneInStatistic) {
    for (int dof = 1; dof <= 6; ++dof) {
        double prev = 1.0;
        for (double x = 0.0; x <= 60.0; x += 0.25) {
            const double p = chi_square_pvalue(x, dof);
            EXPECT_LE(p, prev);
            EXPECT_GE(p, 0.0);
            prev = p;
        }
    }
}

TEST(CiTest, CorrelatedPairIsDependent) {
    auto v = ci_test(diagonal_db(10), 0, 1, {}, 0.1);
    EXPECT_FALSE(v.independent);
    EXPECT_DOUBLE_EQ(v.statistic, 20.0);
    EXPECT_EQ(v.dof, 1);
    EXPECT_NEAR(v.p_value, 7.74e-6, 1e-7);
}

TEST(CiTest, BalancedPairIsIndependent) {
    std::vector<std::vector<int>> rows;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int k = 0; k < 5; ++k) rows.push_back({a, b});
    auto v = ci_test(make_db({2, 2}, rows), 0, 1, {}, 0.1);
    EXPECT_TRUE(v.independent);
    EXPECT_DOUBLE_EQ(v.p_value, 1.0);
}

TEST(CiTest, DegenerateStrataAreIndependent) {
    // a, b and the mediator s are copies of each other.
    std::vector<std::vector<int>> rows;
    for (int k = 0; k < 10; ++k) {
        rows.push_back({0, 0, 0});
        rows.push_back({1, 1, 1});
    }
    std::vector<int> cond{2};
    auto v = ci_test(make_db({2, 2, 2}, rows), 0, 1, cond, 0.1);
    EXPECT_TRUE(v.independent);
    EXPECT_EQ(v.dof, 0);
    EXPECT_EQ(v.statistic, 0.0);
}

TEST(CiTest, EmptyDatabaseIsIndependent) {
    auto v = ci_test(make_db({2, 2}, {}), 0, 1, {}, 0.1);
    EXPECT_TRUE(v.independent);
    EXPECT_EQ(v.dof, 0);
}

TEST(CiTest, ArgumentErrors) {
    auto db = make_db({2, 2, 2}, {{0, 0, 0}, {1, 1, 1}});
    std::vector<int> overlap{0};
    EXPECT_THROW(ci_test(db, 0, 1, overlap, 0.1), ArgumentError);
    EXPECT_THROW(ci_test(db, 1, 1, {}, 0.1), ArgumentError);
    EXPECT_THROW(ci_test(db, 0, 1, {}, 0.0), ArgumentError);
    EXPECT_THROW(ci_test(db, 0, 1, {}, 1.0), ArgumentError);
}

TEST(CiTest, Symmetric) {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 200; ++trial) {
        auto db = cbnet::testing::random_db(rng, 4, 3, 80);
        std::vector<int> cond;
        if (trial % 2) cond.push_back(2);
        if (trial % 3 == 0) cond.push_back(3);
        auto ab = ci_test(db, 0, 1, cond, 0.1);
        auto ba = ci_test(db, 1, 0, cond, 0.1);
        EXPECT_EQ(ab.independent, ba.independent);
        EXPECT_EQ(ab.statistic, ba.statistic);
        EXPECT_EQ(ab.dof, ba.dof);
        EXPECT_EQ(ab.p_value, ba.p_value);
        EXPECT_EQ(ab.independent, ab.p_value > 0.1 || ab.dof == 0);
    }
}

TEST(CiTest, CalibratedUnderIndependence) {
    std::mt19937_64 rng(2024);
    std::bernoulli_distribution coin(0.5);
    int rejections = 0;
    const int trials = 500;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<std::vector<int>> rows(1000, std::vector<int>(2));
        for (auto& row : rows) row = {coin(rng) ? 1 : 0, coin(rng) ? 1 : 0};
        if (!ci_test(make_db({2, 2}, rows), 0, 1, {}, 0.1).independent) ++rejections;
    }
    const double rate = static_cast<double>(rejections) / trials;
    EXPECT_GE(rate, 0.05);
    EXPECT_LE(rate, 0.15);
}

TEST(CiTest, ChiSquareCiMatchesCiTest) {
    auto db = diagonal_db(10);
    auto ci = chi_square_ci(db, 0.1);
    EXPECT_FALSE(ci(0, 1, {}));
    EXPECT_FALSE(ci(1, 0, {}));
}

TEST(DSeparated, Examples) {
    // a=0, c=1, b=2
    Dag chain(3);
    chain.add_edge(0, 1);
    chain.add_edge(1, 2);
    std::vector<int> c{1};
    EXPECT_TRUE(d_separated(chain, 0, 2, c));
    EXPECT_FALSE(d_separated(chain, 0, 2, {}));

    Dag collider(3);
    collider.add_edge(0, 1);
    collider.add_edge(2, 1);
    EXPECT_TRUE(d_separated(collider, 0, 2, {}));
    EXPECT_FALSE(d_separated(collider, 0, 2, c));

    Dag with_child(4);
    with_child.add_edge(0, 1);
    with_child.add_edge(2, 1);
    with_child.add_edge(1, 3);
    std::vector<int> descendant{3};
    EXPECT_FALSE(d_separated(with_child, 0, 2, descendant));
}

TEST(DSeparated, AgreesWithPathEnumerationExhaustively) {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = std::uniform_int_distribution<int>(2, 6)(rng);
        auto dag = cbnet::testing::random_dag(rng, n, n, 0.4);
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                std::vector<int> rest;
                for (int v = 0; v < n; ++v)
                    if (v != a && v != b) rest.push_back(v);
                for (const auto& s : cbnet::testing::all_subsets(rest)) {
                    const bool expected = cbnet::testing::brute_d_separated(dag, a, b, s);
                    ASSERT_EQ(d_separated(dag, a, b, s), expected);
                    ASSERT_EQ(d_separated(dag, b, a, s), expected);
                }
            }
    }
}
