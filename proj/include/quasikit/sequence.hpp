#pragma once

/**
 * @file sequence.hpp
 * @brief Weight sequences in the log domain and their convex regularization.
 *
 * A weight sequence M_0, M_1, ... is stored as L_n = log M_n with L_0 = 0.
 * M_n itself is never formed: n^n already overflows a double near n = 140.
 *
 * The regularization is the largest convex minorant of n -> L_n on the
 * truncation 0..N-1 (the lower boundary of the Newton polygon of the points
 * (n, L_n)). Its last vertex is always N-1, so principal indices close to the
 * horizon are artifacts of the truncation rather than of the sequence.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quasikit/error.hpp"

namespace quasikit {

/// Slack for log-domain convexity checks.
inline constexpr double convexity_tolerance = 1e-9;

enum class family { explicit_values, factorial, power_nn, gevrey, denjoy1, denjoy2 };

inline std::string_view to_string(family f)
{
    switch (f) {
    case family::explicit_values: return "explicit";
    case family::factorial: return "factorial";
    case family::power_nn: return "power_nn";
    case family::gevrey: return "gevrey";
    case family::denjoy1: return "denjoy1";
    case family::denjoy2: return "denjoy2";
    }
    return "unknown";
}

inline family family_from_string(std::string_view name)
{
    for (family f : {family::explicit_values, family::factorial, family::power_nn, family::gevrey,
                     family::denjoy1, family::denjoy2}) {
        if (to_string(f) == name) return f;
    }
    throw validation_error("unknown sequence family '" + std::string(name) + "'");
}

struct sequence_spec {
    family kind = family::factorial;
    /// Gevrey exponent s for `gevrey`, the constant C for `denjoy1`/`denjoy2`.
    double param = 1.0;
    /// Only for `explicit_values`.
    std::vector<double> logs;
    /// Truncation horizon N. For explicit sequences 0 means "all given values".
    std::size_t horizon = 0;
};

/// Positive weight sequence held as L_n = log M_n, n = 0..N-1.
class log_sequence {
public:
    explicit log_sequence(std::vector<double> logs, std::string generator = "explicit",
                          std::size_t filled_below = 0)
        : logs_(std::move(logs)), generator_(std::move(generator)), filled_below_(filled_below)
    {
        detail::require(!logs_.empty(), "log_sequence: empty sequence");
        detail::require(logs_.front() == 0.0, "log_sequence: L_0 must be 0 (normalization M_0 = 1)");
        for (std::size_t n = 0; n < logs_.size(); ++n) {
            if (!std::isfinite(logs_[n]))
                throw validation_error("log_sequence: entry " + std::to_string(n) + " is not finite");
        }
    }

    std::size_t size() const noexcept { return logs_.size(); }
    double operator[](std::size_t n) const { return logs_[n]; }
    std::span<const double> logs() const noexcept { return logs_; }
    const std::string& generator() const noexcept { return generator_; }

    /// Entries 0..filled_below()-1 lie below the family's validity threshold and hold
    /// the normalization value 0 instead of the closed form.
    std::size_t filled_below() const noexcept { return filled_below_; }

private:
    std::vector<double> logs_;
    std::string generator_;
    std::size_t filled_below_ = 0;
};

inline log_sequence make_sequence(const sequence_spec& spec)
{
    if (spec.kind == family::explicit_values) {
        std::size_t n = spec.horizon == 0 ? spec.logs.size() : spec.horizon;
        detail::require(n >= 3, "explicit sequence: horizon must be >= 3");
        detail::require(n <= spec.logs.size(), "explicit sequence: horizon " + std::to_string(n) +
                                                   " exceeds the " + std::to_string(spec.logs.size()) +
                                                   " given values");
        return log_sequence(std::vector<double>(spec.logs.begin(), spec.logs.begin() + n));
    }

    const std::size_t N = spec.horizon;
    detail::require(N >= 3, "sequence horizon must be >= 3");
    const double p = spec.param;
    std::vector<double> logs(N, 0.0);
    std::size_t filled = 0;

    switch (spec.kind) {
    case family::factorial:
        for (std::size_t n = 0; n < N; ++n) logs[n] = std::lgamma(double(n) + 1.0);
        break;
    case family::power_nn:
        // 0^0 := 1
        for (std::size_t n = 1; n < N; ++n) logs[n] = double(n) * std::log(double(n));
        break;
    case family::gevrey:
        detail::require(std::isfinite(p) && p > 0.0, "gevrey: exponent s must be finite and > 0");
        for (std::size_t n = 0; n < N; ++n) logs[n] = p * std::lgamma(double(n) + 1.0);
        break;
    case family::denjoy1:
        // (C n log n)^n, valid for n > 1
        detail::require(std::isfinite(p) && p > 0.0, "denjoy1: constant C must be finite and > 0");
        filled = 2;
        for (std::size_t n = 2; n < N; ++n) {
            double x = double(n);
            logs[n] = x * (std::log(p) + std::log(x) + std::log(std::log(x)));
        }
        break;
    case family::denjoy2:
        // (C n log n log log n)^n, valid for n > e
        detail::require(std::isfinite(p) && p > 0.0, "denjoy2: constant C must be finite and > 0");
        filled = 3;
        for (std::size_t n = 3; n < N; ++n) {
            double x = double(n);
            double ll = std::log(std::log(x));
            logs[n] = x * (std::log(p) + std::log(x) + std::log(std::log(x)) + std::log(ll));
        }
        break;
    case family::explicit_values:
        break;
    }
    if (filled > N) filled = N;
    return log_sequence(std::move(logs), std::string(to_string(spec.kind)), filled);
}

/// Largest convex minorant of a truncated log sequence.
struct regularized_sequence {
    std::vector<double> logs_c;
    /// Contact set {n : L^c_n = L_n}, sorted; always contains 0 and N-1.
    std::vector<std::size_t> principal;
    /// Strict corners of the hull (collinear contact points excluded).
    std::vector<std::size_t> vertices;

    std::size_t size() const noexcept { return logs_c.size(); }
};

namespace detail {

// Relative gap under which a point counts as lying on the hull.
inline constexpr double contact_tolerance = 1e-12;

inline double hull_slack(double la, double lb, double li, double width)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    return 16.0 * eps * (std::abs(la) + std::abs(lb) + std::abs(li) + 1.0) * width;
}

} // namespace detail

inline regularized_sequence convex_regularize(std::span<const double> logs)
{
    const std::size_t N = logs.size();
    detail::require(N >= 2, "convex_regularize: need at least 2 entries");

    // Monotone chain, left to right. Point b is dropped when it lies on or above the
    // chord a -> i; collinear points therefore never become vertices.
    std::vector<std::size_t> hull;
    hull.reserve(N);
    for (std::size_t i = 0; i < N; ++i) {
        while (hull.size() >= 2) {
            std::size_t a = hull[hull.size() - 2];
            std::size_t b = hull.back();
            double cross = (logs[b] - logs[a]) * double(i - a) - (logs[i] - logs[a]) * double(b - a);
            if (cross >= -detail::hull_slack(logs[a], logs[b], logs[i], double(i - a)))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(i);
    }

    regularized_sequence out;
    out.logs_c.assign(logs.begin(), logs.end());
    for (std::size_t v = 0; v + 1 < hull.size(); ++v) {
        std::size_t a = hull[v];
        std::size_t b = hull[v + 1];
        double slope = (logs[b] - logs[a]) / double(b - a);
        for (std::size_t n = a + 1; n < b; ++n)
            out.logs_c[n] = std::min(logs[n], logs[a] + slope * double(n - a));
    }
    for (std::size_t n = 0; n < N; ++n) {
        double gap = logs[n] - out.logs_c[n];
        if (gap <= detail::contact_tolerance * std::max(1.0, std::abs(logs[n]))) {
            out.logs_c[n] = logs[n];
            out.principal.push_back(n);
        }
    }
    out.vertices = std::move(hull);
    return out;
}

inline regularized_sequence convex_regularize(const log_sequence& m)
{
    return convex_regularize(m.logs());
}

/// True iff 2 L_n <= L_{n-1} + L_{n+1} (within `tol`) at every interior n.
/// Sequences shorter than 3 are vacuously convex.
inline bool is_log_convex(std::span<const double> logs, double tol = convexity_tolerance)
{
    for (std::size_t n = 1; n + 1 < logs.size(); ++n) {
        if (2.0 * logs[n] > logs[n - 1] + logs[n + 1] + tol) return false;
    }
    return true;
}

inline bool is_log_convex(const log_sequence& m, double tol = convexity_tolerance)
{
    return is_log_convex(m.logs(), tol);
}

/// r_n = log(M_n / M_{n+1}) for n = 0..N-2.
inline std::vector<double> ratio_sequence(std::span<const double> logs)
{
    detail::require(logs.size() >= 2, "ratio_sequence: need at least 2 entries");
    std::vector<double> r(logs.size() - 1);
    for (std::size_t n = 0; n + 1 < logs.size(); ++n) r[n] = logs[n] - logs[n + 1];
    return r;
}

inline std::vector<double> ratio_sequence(const log_sequence& m) { return ratio_sequence(m.logs()); }

/// rho_n = log(M_n^{1/n}) for n = 1..N-1 (element k holds n = k+1).
inline std::vector<double> root_sequence(std::span<const double> logs)
{
    detail::require(logs.size() >= 2, "root_sequence: need at least 2 entries");
    std::vector<double> rho(logs.size() - 1);
    for (std::size_t n = 1; n < logs.size(); ++n) rho[n - 1] = logs[n] / double(n);
    return rho;
}

inline std::vector<double> root_sequence(const log_sequence& m) { return root_sequence(m.logs()); }

} // namespace quasikit
