#pragma once

// Independent reference computations used by the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace oracle {

/// (log M_n)' = inf over k >= 0, 0 <= l <= n, (k, l) != (0, 0), n + k < N of
/// (k L_{n-l} + l L_{n+k}) / (k + l).
inline std::vector<double> minorant_infimum(const std::vector<double>& L)
{
    const std::size_t N = L.size();
    std::vector<double> out(N);
    for (std::size_t n = 0; n < N; ++n) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; n + k < N; ++k) {
            for (std::size_t l = 0; l <= n; ++l) {
                if (k == 0 && l == 0) continue;
                double v = (double(k) * L[n - l] + double(l) * L[n + k]) / double(k + l);
                best = std::min(best, v);
            }
        }
        if (N == 1) best = L[0];
        out[n] = best;
    }
    return out;
}

/// log beta_n = min_{k >= n} L_k / k by a full scan for each n.
inline std::vector<double> beta_bruteforce(const std::vector<double>& L)
{
    std::vector<double> out;
    for (std::size_t n = 1; n < L.size(); ++n) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = n; k < L.size(); ++k) best = std::min(best, L[k] / double(k));
        out.push_back(best);
    }
    return out;
}

/// Central finite difference of order `order` with step h (orders 1..4).
template <class F>
double central_difference(F f, double x, int order, double h)
{
    switch (order) {
    case 1: return (f(x + h) - f(x - h)) / (2 * h);
    case 2: return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
    case 3: return (f(x + 2 * h) - 2 * f(x + h) + 2 * f(x - h) - f(x - 2 * h)) / (2 * h * h * h);
    case 4: return (f(x + 2 * h) - 4 * f(x + h) + 6 * f(x) - 4 * f(x - h) + f(x - 2 * h)) / (h * h * h * h);
    }
    return std::nan("");
}

/// Derivatives of exp(-1/x): f^(n) = P_n(1/x) exp(-1/x) with P_0 = 1,
/// P_{n+1}(u) = u^2 (P_n(u) - P_n'(u)). Coefficients of P_n in powers of u.
inline double flat_derivative(double x, int n)
{
    std::vector<double> p{1.0};
    for (int i = 0; i < n; ++i) {
        std::vector<double> q(p.size() + 2, 0.0);
        for (std::size_t j = 0; j < p.size(); ++j) q[j + 2] += p[j];
        for (std::size_t j = 1; j < p.size(); ++j) q[j + 1] -= double(j) * p[j];
        p = q;
    }
    double u = 1.0 / x, acc = 0.0, up = 1.0;
    for (double c : p) {
        acc += c * up;
        up *= u;
    }
    return acc * std::exp(-u);
}

} // namespace oracle
