#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "quasikit/weight.hpp"

using namespace quasikit;

namespace {

constexpr double e = std::numbers::e;

std::vector<weight_function> catalog_weights()
{
    return {make_weight(mu_kind::zero), make_weight(mu_kind::loglog), make_weight(mu_kind::log),
            make_weight(mu_kind::power, std::nullopt, 0.5)};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

} // namespace

TEST(Weight, MEvalExamples)
{
    auto z = make_weight(mu_kind::zero);
    auto v = m_eval(z, e);
    EXPECT_NEAR(v.m, e, 1e-15);
    EXPECT_NEAR(v.dm, 2.0, 1e-15);
    EXPECT_NEAR(v.d2m, 1 / e, 1e-15);
    EXPECT_DOUBLE_EQ(z.delta, 1.0);
    EXPECT_THROW(m_eval(z, 0.5), validation_error);

    auto ll = make_weight(mu_kind::loglog);
    double t = std::exp(e);
    EXPECT_NEAR(m_eval(ll, t).m, t * (e + 1), 1e-12 * t);
}

TEST(Weight, Construction)
{
    EXPECT_EQ(mu_from_string(to_string(mu_kind::loglog)), mu_kind::loglog);
    EXPECT_THROW(mu_from_string("cubic"), validation_error);
    EXPECT_THROW(make_weight(mu_kind::power, std::nullopt, 1.5), validation_error);
    EXPECT_THROW(make_weight(mu_kind::zero, -1.0), validation_error);
    EXPECT_THROW(make_weight(mu_kind::loglog, 1.0), validation_error);
    for (const auto& w : catalog_weights()) {
        for (int i = 0; i <= 200; ++i) {
            double t = w.t0 * std::exp2(i / 5.0);
            auto v = m_eval(w, t);
            EXPECT_GT(v.dm, 0);
            EXPECT_GT(v.d2m, 0);
            EXPECT_LE(v.d2m, w.delta);
        }
    }
}

TEST(Lambda, ZeroClosedForm)
{
    auto w = make_weight(mu_kind::zero);
    auto a = Lambda(w, e);
    EXPECT_NEAR(a.log_value, -1.0, 1e-12);
    EXPECT_NEAR(a.t_star, 1.0, 1e-12);
    for (double r = 10; r <= 1e6; r *= 1.7) {
        auto l = Lambda(w, r);
        EXPECT_LE(rel(l.log_value, -r / e), 1e-9);
        EXPECT_LE(rel(l.t_star, r / e), 1e-9);
        EXPECT_LE(rel(omega(w, r).value, r / e), 1e-9);
    }
    EXPECT_THROW(Lambda(w, 2.0), validation_error);
    EXPECT_THROW(Lambda(w, -1.0), validation_error);
}

TEST(Lambda, BelowValueAtT0)
{
    for (const auto& w : catalog_weights()) {
        double m0 = m_eval(w, w.t0).m;
        for (double lr = m_eval(w, w.t0).dm + 0.1; lr < 40; lr += 1.3)
            EXPECT_LE(Lambda_log(w, lr).log_value, m0 - w.t0 * lr + 1e-12);
    }
}

TEST(Omega, ParametricFormsAndMonotonicity)
{
    for (const auto& w : catalog_weights()) {
        double prev = -std::numeric_limits<double>::infinity();
        for (double lr = m_eval(w, w.t0).dm + 0.05; lr < 30; lr += 0.25) {
            auto o = omega_log(w, lr);
            EXPECT_TRUE(o.consistent) << to_string(w.mu) << " " << lr;
            EXPECT_LE(rel(o.value, o.parametric), 1e-9);
            EXPECT_LE(rel(o.value, o.mu_form), 1e-9);
            EXPECT_GT(o.value, prev);
            prev = o.value;
        }
    }
    auto ll = make_weight(mu_kind::loglog);
    auto o = omega(ll, 1e5);
    double t = o.t_star;
    EXPECT_LE(rel(o.value, t + t / std::log(t)), 1e-9);
}

TEST(Omega, LoglogIncrementsSublinear)
{
    auto ll = make_weight(mu_kind::loglog);
    double prev_ratio = std::numeric_limits<double>::infinity();
    for (double r = 1e3; r <= 1e8; r *= 10) {
        double inc = omega(ll, 2 * r).value - omega(ll, r).value;
        double ratio = inc / r;
        EXPECT_LT(ratio, prev_ratio);
        prev_ratio = ratio;
    }
}

TEST(LambdaInteger, ExamplesAndSandwich)
{
    auto z = make_weight(mu_kind::zero);
    auto li = lambda_integer(z, e);
    EXPECT_NEAR(li.log_value, -1.0, 1e-15);
    EXPECT_EQ(li.n, 1);

    for (const auto& w : catalog_weights()) {
        double lo = m_eval(w, w.t0).dm + 0.5;
        for (int i = 0; i < 100; ++i) {
            double lr = lo + (30.0 - lo) * i / 99.0;
            auto s = lambda_sandwich(w, lr);
            EXPECT_TRUE(s.ok) << to_string(w.mu) << " " << lr;
            EXPECT_GE(s.log_lambda_int, s.log_Lambda - 1e-9 * std::max(1.0, std::abs(s.log_Lambda)));
        }
    }
}

TEST(Integral, ZeroClosedForm)
{
    auto w = make_weight(mu_kind::zero);
    auto rep = integral_test(w, 10, 1e5, 400);
    EXPECT_LE(rel(rep.integral, std::log(1e4) / e), 1e-8);
    EXPECT_EQ(integral_test(w, 50, 50, 4).integral, 0.0);
}

TEST(Integral, CoherenceWithRatioSeries)
{
    auto z = series_integral_coherence(make_weight(mu_kind::zero), 1, 2000);
    EXPECT_EQ(z.series.trend, verdict::diverging_trend);
    EXPECT_TRUE(z.agree);
    auto lg = series_integral_coherence(make_weight(mu_kind::log), 1, 2000);
    EXPECT_EQ(lg.series.trend, verdict::converging_trend);
    EXPECT_TRUE(lg.agree);
    for (const auto& w : catalog_weights())
        EXPECT_TRUE(series_integral_coherence(w, std::size_t(std::ceil(w.t0)), 2000).agree) << to_string(w.mu);
}

TEST(RatioSeries, ZeroTerms)
{
    auto w = make_weight(mu_kind::zero);
    auto s = ratio_series_weight(w, 1, 10000);
    EXPECT_EQ(s.trend, verdict::diverging_trend);
    for (std::size_t n = 1; n < 50; ++n)
        EXPECT_NEAR(s.terms[n - 1], std::exp(double(n) * std::log(double(n)) - double(n + 1) * std::log(double(n + 1))),
                    1e-14);
    EXPECT_THROW(ratio_series_weight(make_weight(mu_kind::loglog), 1, 10), validation_error);
}

TEST(ShiftAndAlgebra, Sweeps)
{
    auto z = make_weight(mu_kind::zero);
    auto ll = make_weight(mu_kind::loglog);
    EXPECT_TRUE(shift_bound_check(z, 0, 1, 100));
    EXPECT_TRUE(shift_bound_check(z, 1, 1, 10000));
    EXPECT_TRUE(shift_bound_check(ll, 3, 1, 10000));
    for (const auto& w : catalog_weights()) EXPECT_TRUE(algebra_check(w, 200)) << to_string(w.mu);
    // a constant below the true one must fail somewhere
    EXPECT_FALSE(shift_bound_check(z, 1, 1, 100, shift_constant(z) - 1.0));
}

TEST(Analytic, ZeroHoldsLoglogRejects)
{
    EXPECT_TRUE(analytic_criterion(make_weight(mu_kind::zero), analytic_c, analytic_A, 1, 10000));
    EXPECT_TRUE(analytic_criterion(make_weight(mu_kind::zero), analytic_c, analytic_A, 5, 4));
    try {
        analytic_criterion(make_weight(mu_kind::loglog), analytic_c, analytic_A, 1, 100);
        FAIL();
    } catch (const validation_error& err) {
        EXPECT_NE(std::string(err.what()).find("r = "), std::string::npos);
    }
}

TEST(Asymptotics, LoglogTrend)
{
    auto rep = loglog_asymptotics_check(1e6);
    ASSERT_FALSE(rep.ratios.empty());
    EXPECT_NEAR(rep.s.back(), 1e6, 1e-6);
    EXPECT_TRUE(rep.monotone_toward_one);
    for (std::size_t i = 1; i < rep.ratios.size(); ++i) EXPECT_LT(rep.ratios[i], rep.ratios[i - 1]);
    EXPECT_GT(rep.ratios.back(), 1.0);
    EXPECT_THROW(loglog_asymptotics_check(100), validation_error);
}

TEST(ShiftInvariance, Residual)
{
    for (const auto& w : catalog_weights()) {
        for (double lr = 8; lr < 30; lr += 3.1)
            EXPECT_LE(std::abs(shift_invariance_residual(w, 0.7, -2.5, lr)),
                      1e-9 * std::max(1.0, std::abs(Lambda_log(w, lr).log_value)));
    }
}
