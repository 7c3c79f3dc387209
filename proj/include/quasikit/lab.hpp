#pragma once

/**
 * @file lab.hpp
 * @brief Derivative experiments on catalog functions: envelopes, B_{f,n},
 *        positivity propagation and zero spacing.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "quasikit/error.hpp"
#include "quasikit/jet.hpp"
#include "quasikit/sequence.hpp"

namespace quasikit {

inline constexpr std::size_t default_envelope_grid = 256;
inline constexpr std::size_t zero_scan_grid = 1024;
inline constexpr double zero_tolerance = 1e-12;

/// Uniform grid of `points` abscissae on [lo, hi], endpoints included.
inline std::vector<double> uniform_grid(double lo, double hi, std::size_t points)
{
    detail::require(points >= 2, "grid needs at least 2 points");
    std::vector<double> g(points);
    const double h = (hi - lo) / double(points - 1);
    for (std::size_t i = 0; i < points; ++i) g[i] = lo + h * double(i);
    g.back() = hi;
    return g;
}

struct envelope_report {
    std::vector<double> grid;
    /// log of max over the grid of |f^(n)|, n = 0..nmax; -inf where the max is 0.
    std::vector<double> log_m_est;
    /// Grid maxima never exceed the true sup.
    bool lower_bound = true;

    double m_est(std::size_t n) const { return std::exp(log_m_est.at(n)); }
};

inline envelope_report derivative_envelope(const function_spec& f, std::size_t nmax,
                                           std::size_t grid_size = default_envelope_grid)
{
    detail::require(grid_size >= 2, "derivative_envelope: grid_size must be >= 2");
    envelope_report rep;
    rep.grid = uniform_grid(f.lo, f.hi, grid_size);
    rep.log_m_est.assign(nmax + 1, -std::numeric_limits<double>::infinity());
    for (double x : rep.grid) {
        jet j = jet_eval(f, x, nmax);
        for (std::size_t n = 0; n <= nmax; ++n) rep.log_m_est[n] = std::max(rep.log_m_est[n], j.log_abs_derivative(n));
    }
    return rep;
}

struct b_value {
    double log_value = -std::numeric_limits<double>::infinity();
    std::size_t argmax = 0;
    /// The maximum sits on the horizon J, so the true sup may be larger.
    bool truncated = false;

    double value() const { return std::exp(log_value); }
};

/// B_{f,n}(t) = max_{n <= j <= J} |f^(j)(t)| e^{-j} / M_j, from an existing jet.
inline b_value b_fn(const jet& jt, std::size_t n, const log_sequence& m, std::size_t J)
{
    detail::require(n <= J, "B_fn: n must not exceed the horizon J");
    detail::require(J <= jt.order(), "B_fn: horizon exceeds the jet order");
    detail::require(J < m.size(), "B_fn: horizon exceeds the weight sequence");
    b_value b;
    b.argmax = n;
    for (std::size_t j = n; j <= J; ++j) {
        double v = jt.log_abs_derivative(j) - double(j) - m[j];
        if (v > b.log_value) {
            b.log_value = v;
            b.argmax = j;
        }
    }
    b.truncated = b.argmax == J && std::isfinite(b.log_value);
    return b;
}

inline b_value b_fn(const function_spec& f, double t, std::size_t n, const log_sequence& m, std::size_t J)
{
    return b_fn(jet_eval(f, t, J), n, m, J);
}

struct b_growth {
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = false;
    /// |f^(j)| <= M_j for j <= J at both t and t + tau.
    bool hypothesis = false;
};

inline constexpr double b_growth_slack = 1e-9;

/// B_{f,n}(t+tau) <= max(B_{f,n}(t), e^{-q}) exp(e |tau| M_q / M_{q-1}), q > n, on horizon J.
inline b_growth b_growth_check(const function_spec& f, const log_sequence& m, double t, double tau, std::size_t n,
                               std::size_t q, std::size_t J)
{
    detail::require(q > n, "b_growth_check: q must exceed n");
    detail::require(q < m.size(), "b_growth_check: q beyond the weight sequence");
    detail::require(f.contains(t + tau), "b_growth_check: t + tau outside the domain");
    jet j0 = jet_eval(f, t, J);
    jet j1 = jet_eval(f, t + tau, J);
    b_growth out;
    double lhs_log = b_fn(j1, n, m, J).log_value;
    double base_log = std::max(b_fn(j0, n, m, J).log_value, -double(q));
    double rhs_log = base_log + std::numbers::e * std::abs(tau) * std::exp(m[q] - m[q - 1]);
    out.lhs = std::exp(lhs_log);
    out.rhs = std::exp(rhs_log);
    out.ok = lhs_log <= rhs_log + std::log1p(b_growth_slack);
    out.hypothesis = true;
    for (std::size_t k = 0; k <= J; ++k) {
        if (j0.log_abs_derivative(k) > m[k] || j1.log_abs_derivative(k) > m[k]) {
            out.hypothesis = false;
            break;
        }
    }
    return out;
}

struct monotonicity_result {
    bool holds = true;
    struct point {
        std::size_t n;
        double x;
    };
    std::optional<point> witness;
};

/// Positivity of f^(n), n <= nmax, over a uniform grid, given positivity at the left end.
inline monotonicity_result monotonicity_check(const function_spec& f, const log_sequence& m, std::size_t nmax,
                                              std::size_t grid_size = default_envelope_grid)
{
    detail::require(is_log_convex(m), "monotonicity_check: weight sequence is not log-convex");
    jet ja = jet_eval(f, f.lo, nmax);
    std::string failing;
    for (std::size_t n = 0; n <= nmax; ++n) {
        if (!(ja.coeff(n) > 0.0)) failing += (failing.empty() ? "" : ",") + std::to_string(n);
    }
    detail::require(failing.empty(), "monotonicity_check: f^(n)(a) > 0 fails for n = " + failing);

    auto grid = uniform_grid(f.lo, f.hi, grid_size);
    std::vector<jet> jets;
    jets.reserve(grid.size());
    for (double x : grid) jets.push_back(jet_eval(f, x, nmax));

    monotonicity_result out;
    for (std::size_t n = 0; n <= nmax && out.holds; ++n) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (!(jets[i].coeff(n) > 0.0)) {
                out.holds = false;
                out.witness = monotonicity_result::point{n, grid[i]};
                break;
            }
        }
    }
    return out;
}

/// Zeros of f^(n) on the domain: sign changes on a grid refined by bisection.
inline std::vector<double> derivative_zeros(const function_spec& f, std::size_t n,
                                            std::size_t grid_size = zero_scan_grid)
{
    auto g = [&](double x) { return jet_eval(f, x, n).coeff(n); };
    auto grid = uniform_grid(f.lo, f.hi, grid_size);
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = g(grid[i]);

    std::vector<double> zeros;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (vals[i] == 0.0) {
            zeros.push_back(grid[i]);
            continue;
        }
        if (i + 1 == grid.size() || vals[i + 1] == 0.0) continue;
        if ((vals[i] < 0.0) == (vals[i + 1] < 0.0)) continue;
        double a = grid[i], b = grid[i + 1];
        double ga = vals[i];
        while (b - a > zero_tolerance) {
            double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) break;
            double gm = g(mid);
            if (gm == 0.0) {
                a = b = mid;
                break;
            }
            if ((gm < 0.0) == (ga < 0.0)) {
                a = mid;
                ga = gm;
            } else {
                b = mid;
            }
        }
        zeros.push_back(0.5 * (a + b));
    }
    return zeros;
}

struct spacing_report {
    /// x_n, a zero of f^(n), n = 0..nmax.
    std::vector<double> x;
    /// lhs_partial[k] = sum_{j<k} |x_j - x_{j+1}|, k = 0..nmax.
    std::vector<double> lhs_partial;
    /// rhs_partial[k] = (1/e) sum_{1<=j<=k} M_{j-1} / M_j, k = 0..nmax.
    std::vector<double> rhs_partial;
};

inline spacing_report zero_spacing_experiment(const function_spec& f, const log_sequence& m, std::size_t nmax)
{
    detail::require(nmax < m.size(), "zero_spacing_experiment: nmax beyond the weight sequence");
    detail::require(is_log_convex(m), "zero_spacing_experiment: weight sequence is not log-convex");
    {
        auto grid = uniform_grid(f.lo, f.hi, zero_scan_grid);
        bool all_zero =
            std::all_of(grid.begin(), grid.end(), [&](double x) { return jet_eval(f, x, 0).coeff(0) == 0.0; });
        detail::require(!all_zero, "zero_spacing_experiment: f vanishes identically");
    }

    spacing_report rep;
    for (std::size_t n = 0; n <= nmax; ++n) {
        auto zs = derivative_zeros(f, n);
        if (zs.empty()) throw validation_error("zero_spacing_experiment: no zero of f^(" + std::to_string(n) + ") found");
        if (n == 0) {
            rep.x.push_back(zs.front());
            continue;
        }
        const double prev = rep.x.back();
        double best = zs.front();
        for (double z : zs) {
            // zs is increasing, so strict < keeps the smaller abscissa on ties
            if (std::abs(z - prev) < std::abs(best - prev)) best = z;
        }
        rep.x.push_back(best);
    }

    rep.lhs_partial.assign(nmax + 1, 0.0);
    rep.rhs_partial.assign(nmax + 1, 0.0);
    for (std::size_t k = 1; k <= nmax; ++k) {
        rep.lhs_partial[k] = rep.lhs_partial[k - 1] + std::abs(rep.x[k - 1] - rep.x[k]);
        rep.rhs_partial[k] = rep.rhs_partial[k - 1] + std::exp(m[k - 1] - m[k]) / std::numbers::e;
    }
    return rep;
}

} // namespace quasikit
