#pragma once

/**
 * @file bang.hpp
 * @brief Bang's norm on real sequences and the derivative sequences X_f(t).
 *
 *   ||X|| = inf_{k in P} max(e^{-k}, max_{n <= k} |x_n|)
 *
 * evaluated on a finite horizon. The reduced algorithm stops at the first
 * k in P (at or after the first nonzero entry n0) with e^{-k} < |x_{n0}|;
 * larger k cannot improve the maximum.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "quasikit/error.hpp"
#include "quasikit/jet.hpp"
#include "quasikit/sequence.hpp"

namespace quasikit {

struct bang_vector {
    std::vector<double> entries;
    /// Sorted, strictly increasing, contains 0, all < entries.size().
    std::vector<std::size_t> index_set;

    bang_vector() = default;
    bang_vector(std::vector<double> x, std::vector<std::size_t> p) : entries(std::move(x)), index_set(std::move(p))
    {
        validate();
    }

    /// Index set = every position.
    explicit bang_vector(std::vector<double> x) : entries(std::move(x))
    {
        index_set.resize(entries.size());
        for (std::size_t i = 0; i < index_set.size(); ++i) index_set[i] = i;
        validate();
    }

    std::size_t size() const noexcept { return entries.size(); }

    void validate() const
    {
        detail::require(!entries.empty(), "bang_vector: empty entries");
        detail::require(!index_set.empty() && index_set.front() == 0, "bang_vector: index set must contain 0");
        for (std::size_t i = 0; i < index_set.size(); ++i) {
            detail::require(index_set[i] < entries.size(), "bang_vector: index " + std::to_string(index_set[i]) +
                                                               " beyond the horizon");
            if (i > 0)
                detail::require(index_set[i] > index_set[i - 1], "bang_vector: index set must be strictly increasing");
        }
        for (double x : entries) detail::require(std::isfinite(x), "bang_vector: entries must be finite");
    }
};

struct bang_norm_result {
    double value = 0.0;
    std::size_t witness_k = 0;
    std::size_t reduction_bound = 0;
    /// True when the horizon, not the sequence, fixed the value (zero vector, or no
    /// k in P with e^{-k} below the first nonzero entry).
    bool truncated = false;
};

namespace detail {

// Minimizes max(e^{-k}, prefix max) over k in P with k <= bound; smallest k wins ties.
inline bang_norm_result bang_scan(const bang_vector& x, std::size_t bound)
{
    bang_norm_result r;
    r.value = std::numeric_limits<double>::infinity();
    double prefix = 0.0;
    std::size_t n = 0;
    for (std::size_t k : x.index_set) {
        if (k > bound) break;
        for (; n <= k; ++n) prefix = std::max(prefix, std::abs(x.entries[n]));
        double v = std::max(std::exp(-double(k)), prefix);
        if (v < r.value) {
            r.value = v;
            r.witness_k = k;
        }
    }
    r.reduction_bound = bound;
    return r;
}

} // namespace detail

inline bang_norm_result bang_norm(const bang_vector& x)
{
    x.validate();
    const std::size_t N = x.size();
    const auto first = std::find_if(x.entries.begin(), x.entries.end(), [](double v) { return v != 0.0; });
    if (first == x.entries.end()) {
        bang_norm_result r;
        r.witness_k = x.index_set.back();
        r.value = std::exp(-double(r.witness_k));
        r.reduction_bound = N - 1;
        r.truncated = true;
        return r;
    }
    const std::size_t n0 = std::size_t(first - x.entries.begin());
    const double lead = std::abs(*first);
    std::size_t bound = x.index_set.back();
    bool truncated = true;
    for (std::size_t k : x.index_set) {
        if (k >= n0 && std::exp(-double(k)) < lead) {
            bound = k;
            truncated = false;
            break;
        }
    }
    auto r = detail::bang_scan(x, bound);
    r.truncated = truncated;
    return r;
}

/// Direct minimization over every k in P.
inline double bang_norm_bruteforce(const bang_vector& x)
{
    x.validate();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k : x.index_set) {
        double m = 0.0;
        for (std::size_t n = 0; n <= k; ++n) m = std::max(m, std::abs(x.entries[n]));
        best = std::min(best, std::max(std::exp(-double(k)), m));
    }
    return best;
}

inline double bang_distance(const bang_vector& x, const bang_vector& y)
{
    detail::require(x.size() == y.size(), "bang_distance: horizons differ (" + std::to_string(x.size()) + " vs " +
                                              std::to_string(y.size()) + ")");
    detail::require(x.index_set == y.index_set, "bang_distance: index sets differ");
    std::vector<double> d(x.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = x.entries[i] - y.entries[i];
    return bang_norm(bang_vector(std::move(d), x.index_set)).value;
}

/// x_n = f^(n)(t) / (M^c_n e^n), n = 0..N-1, indexed by the principal set of mc.
inline bang_vector function_sequence(const function_spec& f, double t, const regularized_sequence& mc)
{
    const std::size_t N = mc.size();
    detail::require(N >= 1 && N - 1 <= max_jet_order, "function_sequence: horizon " + std::to_string(N) +
                                                          " needs a jet order above " +
                                                          std::to_string(max_jet_order));
    jet j = jet_eval(f, t, N - 1);
    std::vector<double> x(N);
    for (std::size_t n = 0; n < N; ++n) {
        double c = j.coeff(n);
        if (c == 0.0) {
            x[n] = 0.0;
            continue;
        }
        double lg = std::log(std::abs(c)) + std::lgamma(double(n) + 1.0) - mc.logs_c[n] - double(n);
        x[n] = std::copysign(std::exp(lg), c);
    }
    return bang_vector(std::move(x), mc.principal);
}

struct growth_check {
    double lhs = 0.0;
    double rhs = 0.0;
    /// Index l entering M^c_l / M^c_{l-1}.
    std::size_t witness_l = 0;
    bool ok = false;
};

inline constexpr double growth_slack = 1e-9;

/// ||X_f(t+tau)|| <= ||X_f(t)|| exp(e |tau| M^c_l / M^c_{l-1}), l >= 1 the smallest
/// minimizing index of ||X_f(t)||.
inline growth_check growth_estimate_check(const function_spec& f, double t, double tau,
                                          const regularized_sequence& mc)
{
    detail::require(f.contains(t + tau), "growth_estimate_check: t + tau outside the domain");
    bang_vector x = function_sequence(f, t, mc);
    const bool zero = std::all_of(x.entries.begin(), x.entries.end(), [](double v) { return v == 0.0; });
    detail::require(!zero, "growth_estimate_check: ||X_f(t)|| vanishes on the horizon");
    bang_norm_result base = bang_norm(x);

    std::size_t l = 0;
    double prefix = 0.0;
    std::size_t n = 0;
    for (std::size_t k : x.index_set) {
        for (; n <= k; ++n) prefix = std::max(prefix, std::abs(x.entries[n]));
        if (k >= 1 && std::max(std::exp(-double(k)), prefix) == base.value) {
            l = k;
            break;
        }
    }
    detail::require(l >= 1, "growth_estimate_check: no minimizing index l >= 1 in the index set");

    growth_check out;
    out.witness_l = l;
    out.lhs = bang_norm(function_sequence(f, t + tau, mc)).value;
    double ratio = std::exp(mc.logs_c[l] - mc.logs_c[l - 1]);
    out.rhs = base.value * std::exp(std::numbers::e * std::abs(tau) * ratio);
    out.ok = out.lhs <= out.rhs * (1.0 + growth_slack);
    return out;
}

} // namespace quasikit
