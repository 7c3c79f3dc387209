#pragma once

/**
 * @file weight.hpp
 * @brief Continuous weight functions m(t) = t log t + t mu(t) + a t + b and
 *        their Legendre-type transforms.
 *
 *   Lambda(r) = inf_{t >= t0} exp(m(t)) / r^t = exp(-omega(r))
 *   lambda(r) = same infimum over integers n >= t0
 *
 * The minimizer solves m'(t) = log r. All transforms take log r so that very
 * large r never has to be formed.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quasikit/error.hpp"
#include "quasikit/series.hpp"

namespace quasikit {

enum class mu_kind { zero, loglog, log, power };

inline std::string_view to_string(mu_kind k)
{
    switch (k) {
    case mu_kind::zero: return "zero";
    case mu_kind::loglog: return "loglog";
    case mu_kind::log: return "log";
    case mu_kind::power: return "power";
    }
    return "?";
}

inline mu_kind mu_from_string(std::string_view s)
{
    for (mu_kind k : {mu_kind::zero, mu_kind::loglog, mu_kind::log, mu_kind::power})
        if (to_string(k) == s) return k;
    throw validation_error("unknown mu '" + std::string(s) + "'");
}

struct weight_values {
    double m = 0.0;
    double dm = 0.0;
    double d2m = 0.0;
};

struct weight_function {
    mu_kind mu = mu_kind::zero;
    /// Exponent for mu = t^alpha, 0 < alpha < 1.
    double power = 0.5;
    /// Linear shift m + shift_a t + shift_b (class-preserving).
    double shift_a = 0.0;
    double shift_b = 0.0;
    double t0 = 1.0;
    /// Upper bound for m'' on [t0, inf).
    double delta = 1.0;
};

namespace detail {

struct mu_values {
    double v, d1, d2;
};

inline mu_values mu_eval(const weight_function& w, double t)
{
    switch (w.mu) {
    case mu_kind::zero: return {0.0, 0.0, 0.0};
    case mu_kind::loglog: {
        double L = std::log(t);
        return {std::log(L), 1.0 / (t * L), -(L + 1.0) / (t * t * L * L)};
    }
    case mu_kind::log: return {std::log(t), 1.0 / t, -1.0 / (t * t)};
    case mu_kind::power: {
        double a = w.power;
        double p = std::pow(t, a);
        return {p, a * p / t, a * (a - 1.0) * p / (t * t)};
    }
    }
    return {0.0, 0.0, 0.0};
}

inline weight_values m_raw(const weight_function& w, double t)
{
    auto u = mu_eval(w, t);
    double L = std::log(t);
    weight_values v;
    v.m = t * L + t * u.v + w.shift_a * t + w.shift_b;
    v.dm = L + 1.0 + u.v + t * u.d1 + w.shift_a;
    v.d2m = 1.0 / t + 2.0 * u.d1 + t * u.d2;
    return v;
}

} // namespace detail

inline double default_t0(mu_kind k) { return k == mu_kind::loglog ? std::numbers::e : 1.0; }

/// Validates the hypotheses at t0 and fixes delta as the largest m'' seen on [t0, 2^40 t0].
inline weight_function make_weight(mu_kind mu, std::optional<double> t0 = std::nullopt, double power = 0.5,
                                   double shift_a = 0.0, double shift_b = 0.0)
{
    weight_function w;
    w.mu = mu;
    w.power = power;
    w.shift_a = shift_a;
    w.shift_b = shift_b;
    w.t0 = t0.value_or(default_t0(mu));
    detail::require(std::isfinite(w.t0) && w.t0 > 0.0, "weight: t0 must be positive");
    if (mu == mu_kind::loglog) detail::require(w.t0 > 1.0, "weight: loglog needs t0 > 1");
    if (mu == mu_kind::power)
        detail::require(power > 0.0 && power < 1.0, "weight: power exponent must lie in (0, 1)");
    detail::require(std::isfinite(shift_a) && std::isfinite(shift_b), "weight: shifts must be finite");

    auto v = detail::m_raw(w, w.t0);
    detail::require(v.dm > 0.0, "weight: m'(t0) must be positive");
    detail::require(v.d2m > 0.0, "weight: m''(t0) must be positive");
    double d = v.d2m;
    for (int i = 0; i <= 160; ++i) {
        double t = w.t0 * std::exp2(double(i) / 4.0);
        auto g = detail::m_raw(w, t);
        detail::require(g.d2m > 0.0, "weight: m'' not positive on [t0, inf)");
        d = std::max(d, g.d2m);
    }
    w.delta = d;
    return w;
}

inline weight_values m_eval(const weight_function& w, double t)
{
    detail::require(t >= w.t0, "m_eval: t below t0");
    return detail::m_raw(w, t);
}

struct lambda_result {
    /// log Lambda(r)
    double log_value = 0.0;
    double t_star = 0.0;
};

inline constexpr int bisection_iterations = 200;
inline constexpr double bisection_tolerance = 1e-12;

/// log Lambda at log r = log_r.
inline lambda_result Lambda_log(const weight_function& w, double log_r)
{
    detail::require(std::isfinite(log_r), "Lambda: log r must be finite");
    const double d0 = detail::m_raw(w, w.t0).dm;
    detail::require(log_r >= d0 - 1e-12 * std::max(1.0, std::abs(d0)),
                    "Lambda: r below exp(m'(t0)); the minimizer would leave [t0, inf)");
    double lo = w.t0;
    double hi = std::max(2.0 * w.t0, w.t0 + 1.0);
    if (log_r > d0) {
        int guard = 0;
        while (detail::m_raw(w, hi).dm <= log_r) {
            lo = hi;
            hi *= 2.0;
            if (++guard > 1100 || !std::isfinite(hi)) throw numeric_error("Lambda: bisection bracket failure");
        }
        for (int i = 0; i < bisection_iterations && hi - lo > bisection_tolerance * hi; ++i) {
            double mid = 0.5 * (lo + hi);
            if (detail::m_raw(w, mid).dm < log_r)
                lo = mid;
            else
                hi = mid;
        }
    } else {
        hi = lo;
    }
    lambda_result out;
    out.t_star = 0.5 * (lo + hi);
    out.log_value = detail::m_raw(w, out.t_star).m - out.t_star * log_r;
    return out;
}

inline lambda_result Lambda(const weight_function& w, double r)
{
    detail::require(r > 0.0, "Lambda: r must be positive");
    return Lambda_log(w, std::log(r));
}

struct omega_result {
    /// -log Lambda(r)
    double value = 0.0;
    double t_star = 0.0;
    /// t m'(t) - m(t) at t_star
    double parametric = 0.0;
    /// t + t^2 mu'(t) - b at t_star
    double mu_form = 0.0;
    bool consistent = false;
};

inline constexpr double omega_tolerance = 1e-9;

inline omega_result omega_log(const weight_function& w, double log_r)
{
    auto lam = Lambda_log(w, log_r);
    omega_result out;
    out.value = -lam.log_value;
    out.t_star = lam.t_star;
    const double t = lam.t_star;
    auto v = detail::m_raw(w, t);
    out.parametric = t * v.dm - v.m;
    out.mu_form = t + t * t * detail::mu_eval(w, t).d1 - w.shift_b;
    auto close = [](double a, double b) { return std::abs(a - b) <= omega_tolerance * std::max(1.0, std::abs(a)); };
    // at the boundary t_star = t0 only the definition applies
    out.consistent = t == w.t0 || (close(out.value, out.parametric) && close(out.value, out.mu_form));
    return out;
}

inline omega_result omega(const weight_function& w, double r)
{
    detail::require(r > 0.0, "omega: r must be positive");
    return omega_log(w, std::log(r));
}

struct lambda_integer_result {
    double log_value = 0.0;
    long n = 0;
};

/// log lambda(r): min of m(n) - n log r over integers near t_star, n >= t0.
inline lambda_integer_result lambda_integer_log(const weight_function& w, double log_r)
{
    auto lam = Lambda_log(w, log_r);
    detail::require(lam.t_star < 0x1p52, "lambda_integer: t_star beyond the exactly representable integers");
    const double first = std::ceil(w.t0);
    double lo = std::max(first, std::floor(lam.t_star) - 2.0);
    double hi = std::max(first, std::ceil(lam.t_star) + 2.0);
    lambda_integer_result out;
    out.log_value = std::numeric_limits<double>::infinity();
    for (long i = 0; i <= long(hi - lo); ++i) {
        const double n = lo + double(i);
        double v = detail::m_raw(w, n).m - n * log_r;
        if (v < out.log_value) {
            out.log_value = v;
            out.n = long(n);
        }
    }
    return out;
}

inline lambda_integer_result lambda_integer(const weight_function& w, double r)
{
    detail::require(r > 0.0, "lambda_integer: r must be positive");
    return lambda_integer_log(w, std::log(r));
}

struct sandwich_check {
    double log_lambda_int = 0.0;
    double log_Lambda = 0.0;
    bool ok = false;
};

inline constexpr double sandwich_slack = 1e-9;

/// -delta + log lambda <= log Lambda <= log lambda.
inline sandwich_check lambda_sandwich(const weight_function& w, double log_r)
{
    sandwich_check s;
    s.log_Lambda = Lambda_log(w, log_r).log_value;
    s.log_lambda_int = lambda_integer_log(w, log_r).log_value;
    double slack = sandwich_slack * std::max(1.0, std::abs(s.log_Lambda));
    s.ok = s.log_lambda_int - w.delta <= s.log_Lambda + slack && s.log_Lambda <= s.log_lambda_int + slack;
    return s;
}

/// M(n)/M(n+1) for n = n0..N-1.
inline series_report ratio_series_weight(const weight_function& w, std::size_t n0, std::size_t N,
                                         const verdict_thresholds& th = {})
{
    detail::require(double(n0) >= w.t0, "ratio_series_weight: n0 below t0");
    detail::require(N > n0, "ratio_series_weight: need N > n0");
    std::vector<double> terms;
    terms.reserve(N - n0);
    for (std::size_t n = n0; n < N; ++n)
        terms.push_back(std::exp(detail::m_raw(w, double(n)).m - detail::m_raw(w, double(n + 1)).m));
    return make_series_report(std::move(terms), n0, th);
}

struct integral_report {
    /// int_{r0}^{R} omega(r) / r^2 dr
    double integral = 0.0;
    /// Contributions of [e^{m'(n)}, e^{m'(n+1)}], n = first_index.., as a series.
    series_report pieces;
    verdict trend = verdict::inconclusive;
};

namespace detail {

// omega(r)/r^2 dr in the t variable: (t m' - m) m'' exp(-m') dt.
inline double omega_density_t(const weight_function& w, double t)
{
    auto v = m_raw(w, t);
    return (t * v.dm - v.m) * v.d2m * std::exp(-v.dm);
}

inline double simpson_composite(auto&& g, double a, double b, std::size_t panels)
{
    if (panels % 2) ++panels;
    const double h = (b - a) / double(panels);
    double s = g(a) + g(b);
    for (std::size_t i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * g(a + h * double(i));
    return s * h / 3.0;
}

} // namespace detail

inline constexpr std::size_t piece_panels = 16;

/// Simpson on a log grid (K panels) for the integral, and integer-matched pieces for the trend.
inline integral_report integral_test_log(const weight_function& w, double log_r0, double log_R, std::size_t K,
                                         const verdict_thresholds& th = {})
{
    detail::require(log_r0 <= log_R, "integral_test: need r0 <= R");
    detail::require(K >= 2, "integral_test: need at least 2 panels");
    integral_report rep;
    if (log_R > log_r0) {
        rep.integral = detail::simpson_composite(
            [&](double u) { return omega_log(w, u).value * std::exp(-u); }, log_r0, log_R, K);
    }
    const double ta = Lambda_log(w, log_r0).t_star;
    const double tb = Lambda_log(w, log_R).t_star;
    std::vector<double> pieces;
    std::size_t first = std::size_t(std::ceil(ta));
    for (double n = double(first); n + 1.0 <= tb; n += 1.0)
        pieces.push_back(detail::simpson_composite([&](double t) { return detail::omega_density_t(w, t); }, n,
                                                   n + 1.0, piece_panels));
    rep.pieces = make_series_report(std::move(pieces), first, th);
    rep.trend = rep.pieces.trend;
    return rep;
}

inline integral_report integral_test(const weight_function& w, double r0, double R, std::size_t K,
                                     const verdict_thresholds& th = {})
{
    detail::require(r0 > 0.0 && R > 0.0, "integral_test: r0 and R must be positive");
    return integral_test_log(w, std::log(r0), std::log(R), K, th);
}

/// Trends of the ratio series and of the matched integral pieces over n = n0..N-1.
struct coherence_report {
    series_report series;
    integral_report integral;
    bool agree = false;
};

inline coherence_report series_integral_coherence(const weight_function& w, std::size_t n0, std::size_t N,
                                         const verdict_thresholds& th = {})
{
    coherence_report c;
    c.series = ratio_series_weight(w, n0, N, th);
    double lr0 = detail::m_raw(w, double(n0)).dm;
    double lR = detail::m_raw(w, double(N)).dm;
    c.integral = integral_test_log(w, lr0, lR, 2 * (N - n0), th);
    c.agree = c.series.trend == c.integral.trend;
    return c;
}

/// Smallest C with m'(t) <= delta t + C on [t0, inf); m'' <= delta makes m' - delta t nonincreasing.
inline double shift_constant(const weight_function& w)
{
    auto v = detail::m_raw(w, w.t0);
    return v.dm - w.delta * w.t0;
}

inline constexpr double weight_check_slack = 1e-9;

/// m(p+j) - m(p) <= j (C + j delta) + p j delta for integers p in [p_lo, p_hi], p >= t0.
inline bool shift_bound_check(const weight_function& w, std::size_t j, std::size_t p_lo, std::size_t p_hi,
                              std::optional<double> C = std::nullopt)
{
    const double c = C.value_or(shift_constant(w));
    const double d = w.delta;
    const double J = double(j);
    for (std::size_t p = std::max<std::size_t>(p_lo, std::size_t(std::ceil(w.t0))); p <= p_hi; ++p) {
        double P = double(p);
        double hi = detail::m_raw(w, P + J).m;
        double lhs = hi - detail::m_raw(w, P).m;
        double rhs = J * (c + J * d) + P * J * d;
        if (lhs > rhs + weight_check_slack * std::max(1.0, std::abs(hi))) return false;
    }
    return true;
}

/// Convex extension: 0 on [0, t0], m(t) - m(t0) beyond.
inline double m_extended(const weight_function& w, double t)
{
    if (t <= w.t0) return 0.0;
    return detail::m_raw(w, t).m - detail::m_raw(w, w.t0).m;
}

/// m(n-j) + m(j) <= m(n) for 0 <= j <= n <= n_max, on the convex extension.
inline bool algebra_check(const weight_function& w, std::size_t n_max)
{
    for (std::size_t n = 0; n <= n_max; ++n) {
        double mn = m_extended(w, double(n));
        for (std::size_t j = 0; j <= n; ++j) {
            double lhs = m_extended(w, double(n - j)) + m_extended(w, double(j));
            if (lhs > mn + weight_check_slack * std::max(1.0, std::abs(mn))) return false;
        }
    }
    return true;
}

inline constexpr double analytic_c = 0.36;
inline constexpr double analytic_A = 1000.0;
inline constexpr std::size_t analytic_grid = 1024;

/// Hypothesis omega(r) >= c r on a log grid over [A, 2^10 A], then m(p) <= delta + log p! - p log c
/// for p in [p_lo, p_hi], p >= t0.
inline bool analytic_criterion(const weight_function& w, double c, double A, std::size_t p_lo, std::size_t p_hi)
{
    detail::require(c > 0.0 && A > 0.0, "analytic_criterion: c and A must be positive");
    const double la = std::log(A);
    const double span = 10.0 * std::numbers::ln2;
    for (std::size_t i = 0; i < analytic_grid; ++i) {
        double lr = la + span * double(i) / double(analytic_grid - 1);
        double om = omega_log(w, lr).value;
        if (om < c * std::exp(lr)) {
            std::string r = std::to_string(std::exp(lr));
            throw validation_error("analytic_criterion: omega(r) >= c r fails at r = " + r);
        }
    }
    for (std::size_t p = std::max<std::size_t>(p_lo, std::size_t(std::ceil(w.t0))); p <= p_hi; ++p) {
        double P = double(p);
        double m = detail::m_raw(w, P).m;
        double rhs = w.delta + std::lgamma(P + 1.0) - P * std::log(c);
        if (m > rhs + weight_check_slack * std::max(1.0, std::abs(m))) return false;
    }
    return true;
}

struct asymptotics_report {
    std::vector<double> s;
    /// omega(s) e log s / s
    std::vector<double> ratios;
    bool final_within = false;
    /// |ratio - 1| nonincreasing over the last decade.
    bool monotone_toward_one = false;
};

inline constexpr double asymptotic_band = 0.15;

inline asymptotics_report loglog_asymptotics_check(double r_max, std::size_t per_decade = 10)
{
    detail::require(r_max >= 1e3, "loglog_asymptotics_check: r_max must be >= 1e3");
    detail::require(per_decade >= 1, "loglog_asymptotics_check: need at least one sample per decade");
    auto w = make_weight(mu_kind::loglog);
    asymptotics_report rep;
    const double l0 = std::log10(1e3), l1 = std::log10(r_max);
    const std::size_t steps = std::max<std::size_t>(1, std::size_t(std::ceil((l1 - l0) * double(per_decade))));
    for (std::size_t i = 0; i <= steps; ++i) {
        double lg = l0 + (l1 - l0) * double(i) / double(steps);
        double lr = lg * std::numbers::ln10;
        double s = std::exp(lr);
        rep.s.push_back(s);
        rep.ratios.push_back(omega_log(w, lr).value * std::numbers::e * lr / s);
    }
    rep.final_within = std::abs(rep.ratios.back() - 1.0) <= asymptotic_band;
    rep.monotone_toward_one = true;
    const double last_decade = l1 - 1.0;
    for (std::size_t i = 1; i < rep.s.size(); ++i) {
        if (std::log10(rep.s[i - 1]) < last_decade - 1e-12) continue;
        if (std::abs(rep.ratios[i] - 1.0) > std::abs(rep.ratios[i - 1] - 1.0)) rep.monotone_toward_one = false;
    }
    return rep;
}

/// log Lambda_{m + a t + b}(r) - (b + log Lambda_m(r e^{-a})).
inline double shift_invariance_residual(const weight_function& w, double a, double b, double log_r)
{
    weight_function shifted = w;
    shifted.shift_a += a;
    shifted.shift_b += b;
    double lhs = Lambda_log(shifted, log_r).log_value;
    double rhs = b + Lambda_log(w, log_r - a).log_value;
    return lhs - rhs;
}

} // namespace quasikit
