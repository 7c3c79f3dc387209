#pragma once

/**
 * @file gontcharoff.hpp
 * @brief Abel-Gontcharoff polynomials and the interpolation bounds built on them.
 *
 * Q_n(x; x_0..x_{n-1}) is stored in the scaled basis x^i / i!, where
 * differentiation and integration are index shifts and the coefficients stay
 * O(1). Construction runs from the innermost integral outwards:
 *
 *   Q_0 = 1,   Q_{m+1}(x; x_i, ...) = antiderivative of Q_m(.; x_{i+1}, ...)
 *                                     anchored to vanish at x_i.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

#include "quasikit/error.hpp"
#include "quasikit/jet.hpp"
#include "quasikit/lab.hpp"

namespace quasikit {

inline constexpr std::size_t max_gontcharoff_degree = 30;

struct gontcharoff_poly {
    std::vector<double> nodes;
    /// c_0..c_n with Q(x) = sum c_i x^i / i!; c_n = 1.
    std::vector<double> scaled_coeffs;

    std::size_t degree() const noexcept { return nodes.size(); }
};

inline double eval(const gontcharoff_poly& q, double x)
{
    const auto& c = q.scaled_coeffs;
    double acc = c.back();
    for (std::size_t i = c.size() - 1; i-- > 0;) acc = c[i] + acc * x / double(i + 1);
    return acc;
}

/// sum |c_i| |x|^i / i!, the size against which rounding in eval() is measured.
inline double magnitude(const gontcharoff_poly& q, double x)
{
    const auto& c = q.scaled_coeffs;
    const double ax = std::abs(x);
    double acc = std::abs(c.back());
    for (std::size_t i = c.size() - 1; i-- > 0;) acc = std::abs(c[i]) + acc * ax / double(i + 1);
    return acc;
}

inline gontcharoff_poly build(std::span<const double> nodes)
{
    detail::require(nodes.size() <= max_gontcharoff_degree,
                    "gontcharoff build: degree " + std::to_string(nodes.size()) + " exceeds the cap of " +
                        std::to_string(max_gontcharoff_degree));
    for (double v : nodes) detail::require(std::isfinite(v), "gontcharoff build: nodes must be finite");

    gontcharoff_poly q;
    q.scaled_coeffs = {1.0};
    for (std::size_t i = nodes.size(); i-- > 0;) {
        q.scaled_coeffs.insert(q.scaled_coeffs.begin(), 0.0);
        q.nodes.insert(q.nodes.begin(), nodes[i]);
        q.scaled_coeffs[0] = -eval(q, nodes[i]);
    }
    return q;
}

inline gontcharoff_poly build(std::initializer_list<double> nodes)
{
    return build(std::span<const double>(nodes.begin(), nodes.size()));
}

/// Q^(k) = Q_{n-k}(x; x_k..x_{n-1}).
inline gontcharoff_poly derivative(const gontcharoff_poly& q, std::size_t k)
{
    detail::require(k <= q.degree(), "gontcharoff derivative: order exceeds the degree");
    gontcharoff_poly d;
    d.nodes.assign(q.nodes.begin() + std::ptrdiff_t(k), q.nodes.end());
    d.scaled_coeffs.assign(q.scaled_coeffs.begin() + std::ptrdiff_t(k), q.scaled_coeffs.end());
    return d;
}

namespace detail {

inline double simpson(const std::function<double(double)>& g, double a, double fa, double b, double fb, double m,
                      double fm, double whole, double tol, int depth)
{
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = g(lm), frm = g(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0) throw numeric_error("adaptive Simpson: no convergence within the depth limit");
    return simpson(g, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson(g, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& g, double a, double b, double tol)
{
    if (a == b) return 0.0;
    double fa = g(a), fb = g(b), m = 0.5 * (a + b), fm = g(m);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(g, a, fa, b, fb, m, fm, whole, tol, 40);
}

} // namespace detail

inline constexpr double quadrature_tolerance = 1e-9;
inline constexpr std::size_t max_oracle_degree = 4;

/// The defining iterated integral, by nested adaptive Simpson; independent of build().
inline double integral_oracle(std::span<const double> nodes, double x)
{
    detail::require(nodes.size() <= max_oracle_degree, "integral_oracle: degree must be <= 4");
    const std::size_t n = nodes.size();
    std::function<double(std::size_t, double)> level = [&](std::size_t i, double upper) -> double {
        if (i == n) return 1.0;
        return detail::adaptive_simpson([&](double t) { return level(i + 1, t); }, nodes[i], upper,
                                        quadrature_tolerance);
    };
    return level(0, x);
}

struct residual_report {
    double residual = 0.0;
    /// Magnitude of the largest term entering the identity (at least 1).
    double scale = 1.0;
    bool ok = false;
};

inline constexpr double identity_tolerance = 1e-10;

namespace detail {

inline residual_report finish(double residual, double scale)
{
    residual_report r;
    r.residual = residual;
    r.scale = std::max(1.0, scale);
    r.ok = residual <= identity_tolerance * r.scale;
    return r;
}

inline std::span<const double> slice(std::span<const double> v, std::size_t from, std::size_t to)
{
    return v.subspan(from, to - from);
}

} // namespace detail

/// Q_n(x; nodes) - Q_n(x; nodes, x_k := y) - Q_k(x; x_0..x_{k-1}) Q_{n-k}(y; x_k..x_{n-1}).
inline residual_report swap_identity_residual(std::span<const double> nodes, std::size_t k, double y, double x)
{
    const std::size_t n = nodes.size();
    detail::require(k < n, "swap_identity_residual: need 0 <= k < n");
    std::vector<double> swapped(nodes.begin(), nodes.end());
    swapped[k] = y;
    auto qn = build(nodes);
    auto qs = build(swapped);
    auto qk = build(detail::slice(nodes, 0, k));
    auto qr = build(detail::slice(nodes, k, n));
    double lhs = eval(qn, x) - eval(qs, x);
    double rhs = eval(qk, x) * eval(qr, y);
    double scale = std::max({magnitude(qn, x), magnitude(qs, x), magnitude(qk, x) * magnitude(qr, y)});
    return detail::finish(std::abs(lhs - rhs), scale);
}

/// Q_n(x; nodes) - Q_n(x; ys) - sum_i Q_i(x; y_0..y_{i-1}) Q_{n-i}(y_i; x_i..x_{n-1}).
inline residual_report decomposition_residual(std::span<const double> nodes, std::span<const double> ys, double x)
{
    const std::size_t n = nodes.size();
    detail::require(ys.size() == n, "decomposition_residual: ys must match the node count");
    auto qn = build(nodes);
    auto qy = build(ys);
    double total = eval(qy, x);
    double scale = std::max(magnitude(qn, x), magnitude(qy, x));
    for (std::size_t i = 0; i < n; ++i) {
        auto a = build(detail::slice(ys, 0, i));
        auto b = build(detail::slice(nodes, i, n));
        total += eval(a, x) * eval(b, ys[i]);
        scale = std::max(scale, magnitude(a, x) * magnitude(b, ys[i]));
    }
    return detail::finish(std::abs(eval(qn, x) - total), scale);
}

/// log of (|x - x_0| + sum_{j=0}^{n-2} |x_j - x_{j+1}|)^n / n!; -inf when the sum is 0.
inline double log_gontcharoff_bound(std::span<const double> nodes, double x)
{
    const std::size_t n = nodes.size();
    detail::require(n >= 1, "gontcharoff_bound: need at least one node");
    double s = std::abs(x - nodes[0]);
    for (std::size_t j = 0; j + 1 < n; ++j) s += std::abs(nodes[j] - nodes[j + 1]);
    if (s == 0.0) return -std::numeric_limits<double>::infinity();
    return double(n) * std::log(s) - std::lgamma(double(n) + 1.0);
}

inline double gontcharoff_bound(std::span<const double> nodes, double x)
{
    return std::exp(log_gontcharoff_bound(nodes, x));
}

struct abel_expansion {
    double value = 0.0;
    double partial = 0.0;
    double remainder = 0.0;
    double remainder_bound = 0.0;
    /// Absolute floor for rounding in value - partial.
    double rounding = 0.0;
    bool ok = false;
};

inline constexpr double remainder_slack = 1e-6;

/// f(x) = sum_{k<=n} f^(k)(x_k) Q_k(x; x_0..x_{k-1}) + remainder, with the remainder bounded by the
/// grid envelope of f^(n+1) times the Gontcharoff estimate of Q_{n+1}(x; x_0..x_n).
inline abel_expansion abel_expand(const function_spec& f, std::span<const double> nodes, std::size_t n, double x,
                                  std::size_t grid_size = default_envelope_grid)
{
    detail::require(nodes.size() >= n + 1, "abel_expand: need nodes x_0..x_n");
    detail::require(n + 1 <= max_jet_order && n + 1 <= max_gontcharoff_degree, "abel_expand: order too large");
    detail::require(f.contains(x), "abel_expand: x outside the domain");
    for (std::size_t k = 0; k <= n; ++k)
        detail::require(f.contains(nodes[k]), "abel_expand: node " + std::to_string(k) + " outside the domain");

    abel_expansion out;
    out.value = jet_eval(f, x, 0).coeff(0);
    double absolute = std::abs(out.value);
    for (std::size_t k = 0; k <= n; ++k) {
        double dk = jet_eval(f, nodes[k], k).derivative(k);
        auto qk = build(nodes.subspan(0, k));
        double term = dk * eval(qk, x);
        out.partial += term;
        absolute += std::abs(dk) * magnitude(qk, x);
    }
    out.remainder = out.value - out.partial;
    auto env = derivative_envelope(f, n + 1, grid_size);
    double log_b = env.log_m_est[n + 1] + log_gontcharoff_bound(nodes.subspan(0, n + 1), x);
    out.remainder_bound = std::exp(log_b);
    out.rounding = 64.0 * std::numeric_limits<double>::epsilon() * absolute;
    out.ok = std::abs(out.remainder) <= out.remainder_bound * (1.0 + remainder_slack) + out.rounding;
    return out;
}

/// log M_est[n_k] <= log B + n_k log A + log n_k! for every k.
inline bool cn_membership_bound(const envelope_report& env, std::span<const std::size_t> nbar, double A, double B)
{
    detail::require(A > 0.0 && B > 0.0, "cn_membership_bound: A and B must be positive");
    for (std::size_t i = 0; i < nbar.size(); ++i) {
        detail::require(nbar[i] < env.log_m_est.size(), "cn_membership_bound: index " + std::to_string(nbar[i]) +
                                                            " beyond the envelope");
        if (i > 0) detail::require(nbar[i] > nbar[i - 1], "cn_membership_bound: nbar must be strictly increasing");
    }
    for (std::size_t nk : nbar) {
        double rhs = std::log(B) + double(nk) * std::log(A) + std::lgamma(double(nk) + 1.0);
        if (env.log_m_est[nk] > rhs) return false;
    }
    return true;
}

/// log of B A^q (m+q+1)! / (m+1)! (A|x - x_q| + A R_q)^{m+1}.
inline double log_null_test_bound(std::size_t q, std::size_t ms, double A, double B, double x, double xq, double Rq)
{
    detail::require(A > 0.0 && B > 0.0 && Rq >= 0.0, "null_test_bound: need A, B > 0 and R_q >= 0");
    double base = A * std::abs(x - xq) + A * Rq;
    double lb = base > 0.0 ? std::log(base) : -std::numeric_limits<double>::infinity();
    return std::log(B) + double(q) * std::log(A) + std::lgamma(double(ms + q) + 2.0) - std::lgamma(double(ms) + 2.0) +
           double(ms + 1) * lb;
}

inline double null_test_bound(std::size_t q, std::size_t ms, double A, double B, double x, double xq, double Rq)
{
    return std::exp(log_null_test_bound(q, ms, A, B, x, xq, Rq));
}

/// log of (A |x - c|)^n, the Taylor bound on f(x) when f^(n) vanishes at c and M_n(f) <= A^n n!.
inline double log_taylor_null_bound(double A, double x, double c, std::size_t n)
{
    detail::require(A > 0.0, "taylor_null_bound: A must be positive");
    double d = A * std::abs(x - c);
    if (d == 0.0) return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    return double(n) * std::log(d);
}

} // namespace quasikit
