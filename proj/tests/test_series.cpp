#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "quasikit/series.hpp"

using namespace quasikit;

namespace {

log_sequence fam(family f, std::size_t n, double p = 1.0) { return make_sequence({f, p, {}, n}); }

log_sequence constant_one(std::size_t n) { return log_sequence(std::vector<double>(n, 0.0)); }

} // namespace

TEST(Beta, Examples)
{
    auto b = beta_sequence(log_sequence({0, 3, 1, 4}));
    EXPECT_DOUBLE_EQ(b[0], 0.5);
    auto f = beta_sequence(fam(family::factorial, 40));
    for (std::size_t n = 1; n < 40; ++n) EXPECT_NEAR(f[n - 1], std::lgamma(double(n) + 1) / double(n), 1e-14);
    for (double v : beta_sequence(constant_one(10))) EXPECT_EQ(v, 0.0);
}

TEST(Beta, MatchesBruteForce)
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 50.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> L(2 + trial * 4);
        for (std::size_t i = 1; i < L.size(); ++i) L[i] = u(rng);
        EXPECT_EQ(beta_sequence(L), oracle::beta_bruteforce(L));
    }
}

TEST(SeriesReport, PartialSumsAndShortInput)
{
    auto r = make_series_report({1, 2, 3}, 1);
    EXPECT_EQ(r.partial_sums, (std::vector<double>{1, 3, 6}));
    EXPECT_EQ(r.trend, verdict::inconclusive);
}

TEST(SeriesReport, ConstantOneDiverges)
{
    auto m = constant_one(100);
    auto mc = convex_regularize(m);
    EXPECT_EQ(carleman_series(m).trend, verdict::diverging_trend);
    EXPECT_EQ(root_series(mc).trend, verdict::diverging_trend);
    auto ratio = ratio_series(mc);
    EXPECT_EQ(ratio.trend, verdict::diverging_trend);
    for (double t : ratio.terms) EXPECT_EQ(t, 1.0);
}

TEST(SeriesReport, FactorialDiverges)
{
    auto rep = analyze(fam(family::factorial, 2000));
    EXPECT_EQ(rep.carleman.trend, verdict::diverging_trend);
    EXPECT_EQ(rep.root_c.trend, verdict::diverging_trend);
    EXPECT_EQ(rep.ratio_c.trend, verdict::diverging_trend);
    EXPECT_TRUE(rep.chain_ok);
    EXPECT_FALSE(rep.liminf_flag);
    for (std::size_t n = 1; n < 50; ++n) EXPECT_NEAR(rep.ratio_c.terms[n - 1], 1.0 / double(n), 1e-12);
    // self-regularized: root and carleman series coincide
    for (std::size_t k = 0; k < rep.root_c.terms.size(); ++k)
        EXPECT_NEAR(rep.root_c.terms[k], rep.carleman.terms[k], 1e-15);
}

TEST(SeriesReport, Gevrey2Converges)
{
    auto rep = analyze(fam(family::gevrey, 2000, 2.0));
    EXPECT_EQ(rep.carleman.trend, verdict::converging_trend);
    EXPECT_EQ(rep.root_c.trend, verdict::converging_trend);
    EXPECT_EQ(rep.ratio_c.trend, verdict::converging_trend);
    EXPECT_TRUE(rep.chain_ok);
    for (std::size_t n = 1; n < 30; ++n) EXPECT_NEAR(rep.ratio_c.terms[n - 1], 1.0 / double(n * n), 1e-12);
}

TEST(SeriesReport, PartialSumInvariants)
{
    auto rep = analyze(fam(family::denjoy1, 500));
    for (const auto* s : {&rep.carleman, &rep.root_c, &rep.ratio_c}) {
        double acc = 0;
        for (std::size_t k = 0; k < s->terms.size(); ++k) {
            acc += s->terms[k];
            EXPECT_NEAR(s->partial_sums[k], acc, 1e-12 * acc);
            if (k) {
                EXPECT_GE(s->partial_sums[k], s->partial_sums[k - 1]);
            }
        }
    }
}

TEST(CarlemanInequality, Examples)
{
    auto a = carleman_inequality_check(std::vector<double>{1, 1, 1, 1});
    EXPECT_NEAR(a.lhs, 4.0, 1e-15);
    EXPECT_NEAR(a.rhs, 4 * std::numbers::e, 1e-14);
    EXPECT_TRUE(a.ok);
    auto b = carleman_inequality_check(std::vector<double>{4, 1});
    EXPECT_NEAR(b.lhs, 6.0, 1e-14);
    EXPECT_NEAR(b.rhs, 5 * std::numbers::e, 1e-14);
    EXPECT_THROW(carleman_inequality_check(std::vector<double>{1, 0}), validation_error);
    EXPECT_THROW(carleman_inequality_check(std::vector<double>{1, -2}), validation_error);
}

TEST(CarlemanInequality, RandomVectors)
{
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> len(1, 64);
    std::uniform_real_distribution<double> lg(-10, 10);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> a(len(rng));
        for (double& v : a) v = std::exp(lg(rng));
        EXPECT_TRUE(carleman_inequality_check(a).ok);
    }
}

TEST(Liminf, Examples)
{
    EXPECT_TRUE(liminf_check(constant_one(20)));
    EXPECT_FALSE(liminf_check(fam(family::factorial, 2000)));
    std::vector<double> two(20);
    for (std::size_t n = 0; n < two.size(); ++n) two[n] = double(n) * std::log(2.0);
    EXPECT_TRUE(liminf_check(log_sequence(two)));
    EXPECT_THROW(liminf_check(constant_one(7)), validation_error);
}

TEST(Chain, RandomSequences)
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> L(200);
        for (std::size_t i = 1; i < L.size(); ++i) L[i] = u(rng);
        L[1] = 3;
        L[2] = 1;
        L[3] = 4;
        EXPECT_TRUE(analyze(log_sequence(L)).chain_ok);
    }
}
