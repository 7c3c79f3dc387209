#pragma once

/**
 * @file series.hpp
 * @brief Quasianalyticity criterion series on truncated weight sequences.
 *
 * Three series are built from a weight sequence M and its regularization M^c:
 *
 *   carleman : sum 1/beta_n,            beta_n = inf_{k >= n} M_k^{1/k}
 *   root_c   : sum (M^c_n)^{-1/n}
 *   ratio_c  : sum M^c_{n-1} / M^c_n
 *
 * All start at n = 1. Divergence cannot be decided from finitely many terms, so
 * every report carries a heuristic verdict together with the fitted numbers it
 * was derived from:
 *
 *   - fit S_k against log n over the last quartile of the horizon;
 *     slope >= divergence_slope           -> diverging_trend
 *   - otherwise, last term / final sum < convergence_increment
 *                                          -> converging_trend
 *   - otherwise                            -> inconclusive
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

#include "quasikit/error.hpp"
#include "quasikit/sequence.hpp"

namespace quasikit {

enum class verdict { diverging_trend, converging_trend, inconclusive };

inline std::string_view to_string(verdict v)
{
    switch (v) {
    case verdict::diverging_trend: return "diverging_trend";
    case verdict::converging_trend: return "converging_trend";
    case verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

struct verdict_thresholds {
    double divergence_slope = 0.1;
    double convergence_increment = 1e-6;
};

struct series_report {
    /// Index n of terms[0].
    std::size_t first_index = 1;
    std::vector<double> terms;
    std::vector<double> partial_sums;
    verdict trend = verdict::inconclusive;
    /// Least-squares slope of partial sums against log n on the last quartile.
    double slope_estimate = 0.0;
    /// terms.back() / partial_sums.back().
    double tail_increment = 0.0;
};

inline series_report make_series_report(std::vector<double> terms, std::size_t first_index,
                                        const verdict_thresholds& th = {})
{
    series_report rep;
    rep.first_index = first_index;
    rep.terms = std::move(terms);
    rep.partial_sums.resize(rep.terms.size());
    double s = 0.0;
    for (std::size_t k = 0; k < rep.terms.size(); ++k) {
        s += rep.terms[k];
        rep.partial_sums[k] = s;
    }

    const std::size_t K = rep.terms.size();
    if (K < 4) return rep;

    const std::size_t start = (3 * K) / 4;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double cnt = double(K - start);
    for (std::size_t k = start; k < K; ++k) {
        double x = std::log(double(first_index + k));
        double y = rep.partial_sums[k];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = cnt * sxx - sx * sx;
    rep.slope_estimate = denom > 0 ? (cnt * sxy - sx * sy) / denom : 0.0;
    rep.tail_increment = rep.partial_sums.back() > 0 ? rep.terms.back() / rep.partial_sums.back() : 0.0;

    if (rep.slope_estimate >= th.divergence_slope)
        rep.trend = verdict::diverging_trend;
    else if (rep.tail_increment < th.convergence_increment)
        rep.trend = verdict::converging_trend;
    else
        rep.trend = verdict::inconclusive;
    return rep;
}

/// log beta_n = min_{n <= k < N} L_k / k for n = 1..N-1 (element i holds n = i+1).
inline std::vector<double> beta_sequence(std::span<const double> logs)
{
    detail::require(logs.size() >= 2, "beta_sequence: need at least 2 entries");
    const std::size_t N = logs.size();
    std::vector<double> beta(N - 1);
    double running = logs[N - 1] / double(N - 1);
    for (std::size_t n = N - 1; n >= 1; --n) {
        running = std::min(running, logs[n] / double(n));
        beta[n - 1] = running;
    }
    return beta;
}

inline std::vector<double> beta_sequence(const log_sequence& m) { return beta_sequence(m.logs()); }

inline series_report carleman_series(const log_sequence& m, const verdict_thresholds& th = {})
{
    auto beta = beta_sequence(m);
    std::vector<double> terms(beta.size());
    for (std::size_t i = 0; i < beta.size(); ++i) terms[i] = std::exp(-beta[i]);
    return make_series_report(std::move(terms), 1, th);
}

inline series_report root_series(const regularized_sequence& mc, const verdict_thresholds& th = {})
{
    detail::require(mc.size() >= 2, "root_series: need at least 2 entries");
    std::vector<double> terms(mc.size() - 1);
    for (std::size_t n = 1; n < mc.size(); ++n) terms[n - 1] = std::exp(-mc.logs_c[n] / double(n));
    return make_series_report(std::move(terms), 1, th);
}

inline series_report ratio_series(const regularized_sequence& mc, const verdict_thresholds& th = {})
{
    detail::require(mc.size() >= 2, "ratio_series: need at least 2 entries");
    std::vector<double> terms(mc.size() - 1);
    for (std::size_t n = 1; n < mc.size(); ++n) terms[n - 1] = std::exp(mc.logs_c[n - 1] - mc.logs_c[n]);
    return make_series_report(std::move(terms), 1, th);
}

struct carleman_inequality {
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = false;
};

/// sum_k (a_1...a_k)^{1/k} <= e * sum_k a_k, geometric means taken through running log sums.
inline carleman_inequality carleman_inequality_check(std::span<const double> a)
{
    carleman_inequality out;
    double log_prod = 0.0;
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (!(a[k] > 0.0) || !std::isfinite(a[k]))
            throw validation_error("carleman_inequality_check: entry " + std::to_string(k) + " is not positive");
        log_prod += std::log(a[k]);
        out.lhs += std::exp(log_prod / double(k + 1));
        sum += a[k];
    }
    out.rhs = std::numbers::e * sum;
    out.ok = out.lhs <= out.rhs;
    return out;
}

/// Cap on M_n^{1/n} used by liminf_check.
inline constexpr double default_liminf_cap = 50.0;

/// Flags the trivial quasianalytic case liminf M_n^{1/n} < infinity: true iff
/// min L_n / n over the second half of the horizon is below log(cap).
inline bool liminf_check(const log_sequence& m, double cap = default_liminf_cap)
{
    detail::require(m.size() >= 8, "liminf_check: horizon must be >= 8");
    detail::require(cap > 0.0, "liminf_check: cap must be positive");
    const std::size_t N = m.size();
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t n = std::max<std::size_t>(N / 2, 1); n < N; ++n) lowest = std::min(lowest, m[n] / double(n));
    return lowest < std::log(cap);
}

struct qa_report {
    std::vector<double> beta;
    series_report carleman;
    series_report root_c;
    series_report ratio_c;
    bool liminf_flag = false;
    bool chain_ok = false;
    regularized_sequence regularized;
};

/// Relative slack for the finite-horizon inequality chain.
inline constexpr double chain_tolerance = 1e-9;

/// Checks, on every prefix 1..K of the horizon,
///   S_root >= S_carleman >= S_ratio   and   S_root <= e * S_ratio.
inline bool inequality_chain_holds(const series_report& carleman, const series_report& root_c,
                                   const series_report& ratio_c, double tol = chain_tolerance)
{
    const std::size_t K = std::min({carleman.partial_sums.size(), root_c.partial_sums.size(),
                                    ratio_c.partial_sums.size()});
    for (std::size_t k = 0; k < K; ++k) {
        double root = root_c.partial_sums[k];
        double carl = carleman.partial_sums[k];
        double ratio = ratio_c.partial_sums[k];
        if (root < carl * (1.0 - tol)) return false;
        if (carl < ratio * (1.0 - tol)) return false;
        if (root > std::numbers::e * ratio * (1.0 + tol)) return false;
    }
    return true;
}

inline qa_report analyze(const log_sequence& m, const verdict_thresholds& th = {},
                         double liminf_cap = default_liminf_cap)
{
    detail::require(m.size() >= 8, "analyze: horizon must be >= 8");
    qa_report rep;
    rep.regularized = convex_regularize(m);
    rep.beta = beta_sequence(m);
    rep.carleman = carleman_series(m, th);
    rep.root_c = root_series(rep.regularized, th);
    rep.ratio_c = ratio_series(rep.regularized, th);
    rep.liminf_flag = liminf_check(m, liminf_cap);
    rep.chain_ok = inequality_chain_holds(rep.carleman, rep.root_c, rep.ratio_c);
    return rep;
}

} // namespace quasikit
