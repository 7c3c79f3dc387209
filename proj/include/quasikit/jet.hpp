#pragma once

/**
 * @file jet.hpp
 * @brief Truncated Taylor arithmetic over closed-form expressions.
 *
 * A jet of order K at t holds c_k = f^(k)(t) / k!, k = 0..K. Expressions are
 * immutable trees; jet_eval walks a tree and propagates coefficient arrays
 * through each node with the usual recurrences.
 */

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "quasikit/error.hpp"

namespace quasikit {

inline constexpr std::size_t max_jet_order = 64;
/// Any |c_k| above this aborts evaluation with numeric_error.
inline constexpr double jet_magnitude_limit = 1e280;

/// k! as a double; exact through 22!.
inline double factorial(std::size_t k)
{
    double f = 1.0;
    for (std::size_t i = 2; i <= k; ++i) f *= double(i);
    return f;
}

class jet {
public:
    jet(double center, std::vector<double> coeffs) : center_(center), c_(std::move(coeffs))
    {
        detail::require(!c_.empty(), "jet: needs at least one coefficient");
    }

    double center() const noexcept { return center_; }
    std::size_t order() const noexcept { return c_.size() - 1; }
    double coeff(std::size_t k) const { return c_.at(k); }
    std::span<const double> coeffs() const noexcept { return c_; }

    /// f^(k)(t) = k! c_k
    double derivative(std::size_t k) const { return factorial(k) * c_.at(k); }

    /// log |f^(k)(t)|, -inf for a zero coefficient.
    double log_abs_derivative(std::size_t k) const
    {
        double c = c_.at(k);
        if (c == 0.0) return -INFINITY;
        return std::log(std::abs(c)) + std::lgamma(double(k) + 1.0);
    }

private:
    double center_;
    std::vector<double> c_;
};

/// Coefficient-array kernels. All arguments share one length K+1.
namespace taylor {

using coeffs = std::vector<double>;

inline coeffs constant(double c, std::size_t K)
{
    coeffs v(K + 1, 0.0);
    v[0] = c;
    return v;
}

inline coeffs variable(double t, std::size_t K)
{
    coeffs v(K + 1, 0.0);
    v[0] = t;
    if (K >= 1) v[1] = 1.0;
    return v;
}

inline coeffs add(const coeffs& u, const coeffs& v)
{
    coeffs w(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) w[k] = u[k] + v[k];
    return w;
}

inline coeffs sub(const coeffs& u, const coeffs& v)
{
    coeffs w(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) w[k] = u[k] - v[k];
    return w;
}

inline coeffs mul(const coeffs& u, const coeffs& v)
{
    coeffs w(u.size(), 0.0);
    for (std::size_t k = 0; k < u.size(); ++k)
        for (std::size_t j = 0; j <= k; ++j) w[k] += u[j] * v[k - j];
    return w;
}

/// u / v; caller guarantees v[0] != 0.
inline coeffs div(const coeffs& u, const coeffs& v)
{
    coeffs w(u.size(), 0.0);
    for (std::size_t k = 0; k < u.size(); ++k) {
        double s = u[k];
        for (std::size_t j = 1; j <= k; ++j) s -= v[j] * w[k - j];
        w[k] = s / v[0];
    }
    return w;
}

inline coeffs exp(const coeffs& u)
{
    coeffs v(u.size(), 0.0);
    v[0] = std::exp(u[0]);
    for (std::size_t k = 1; k < u.size(); ++k) {
        double s = 0.0;
        for (std::size_t j = 1; j <= k; ++j) s += double(j) * u[j] * v[k - j];
        v[k] = s / double(k);
    }
    return v;
}

/// Caller guarantees u[0] > 0.
inline coeffs log(const coeffs& u)
{
    coeffs v(u.size(), 0.0);
    v[0] = std::log(u[0]);
    for (std::size_t k = 1; k < u.size(); ++k) {
        double s = 0.0;
        for (std::size_t j = 1; j < k; ++j) s += double(j) * v[j] * u[k - j];
        v[k] = (u[k] - s / double(k)) / u[0];
    }
    return v;
}

/// Returns {sin u, cos u}.
inline std::pair<coeffs, coeffs> sin_cos(const coeffs& u)
{
    coeffs s(u.size(), 0.0), c(u.size(), 0.0);
    s[0] = std::sin(u[0]);
    c[0] = std::cos(u[0]);
    for (std::size_t k = 1; k < u.size(); ++k) {
        double as = 0.0, ac = 0.0;
        for (std::size_t j = 1; j <= k; ++j) {
            as += double(j) * u[j] * c[k - j];
            ac += double(j) * u[j] * s[k - j];
        }
        s[k] = as / double(k);
        c[k] = -ac / double(k);
    }
    return {std::move(s), std::move(c)};
}

inline coeffs pow_nonneg_int(const coeffs& u, unsigned long p)
{
    coeffs result = constant(1.0, u.size() - 1);
    coeffs base = u;
    while (p > 0) {
        if (p & 1UL) result = mul(result, base);
        p >>= 1;
        if (p > 0) base = mul(base, base);
    }
    return result;
}

/// u^r for real r; caller guarantees u[0] > 0.
inline coeffs pow_real(const coeffs& u, double r)
{
    coeffs v(u.size(), 0.0);
    v[0] = std::pow(u[0], r);
    for (std::size_t k = 1; k < u.size(); ++k) {
        double s = 0.0;
        for (std::size_t j = 1; j <= k; ++j) s += ((r + 1.0) * double(j) - double(k)) * u[j] * v[k - j];
        v[k] = s / (double(k) * u[0]);
    }
    return v;
}

/// Coefficients of g(a x + b) around t from those of g around a t + b.
inline coeffs scale(coeffs g, double a)
{
    double ak = 1.0;
    for (double& c : g) {
        c *= ak;
        ak *= a;
    }
    return g;
}

} // namespace taylor

enum class op { constant, variable, add, sub, mul, div, exp, log, sin, cos, pow, affine };

inline std::string_view to_string(op o)
{
    switch (o) {
    case op::constant: return "const";
    case op::variable: return "x";
    case op::add: return "add";
    case op::sub: return "sub";
    case op::mul: return "mul";
    case op::div: return "div";
    case op::exp: return "exp";
    case op::log: return "log";
    case op::sin: return "sin";
    case op::cos: return "cos";
    case op::pow: return "pow";
    case op::affine: return "affine";
    }
    return "?";
}

inline op op_from_string(std::string_view s)
{
    for (op o : {op::constant, op::variable, op::add, op::sub, op::mul, op::div, op::exp, op::log, op::sin,
                 op::cos, op::pow, op::affine})
        if (to_string(o) == s) return o;
    throw validation_error("unknown expression op '" + std::string(s) + "'");
}

struct expr_node;

/// Immutable expression handle; copies share structure.
class expr {
public:
    explicit expr(std::shared_ptr<const expr_node> n) : node_(std::move(n))
    {
        detail::require(node_ != nullptr, "expr: null node");
    }
    const expr_node& node() const noexcept { return *node_; }

private:
    std::shared_ptr<const expr_node> node_;
};

struct expr_node {
    op kind = op::constant;
    /// constant value
    double value = 0.0;
    /// pow exponent num/den
    long num = 1;
    long den = 1;
    /// affine: arg(scale * x + shift)
    double scale = 1.0;
    double shift = 0.0;
    std::vector<expr> args;
};

namespace fn {

inline expr make(expr_node n) { return expr(std::make_shared<const expr_node>(std::move(n))); }

inline expr constant(double c)
{
    detail::require(std::isfinite(c), "const: value must be finite");
    expr_node n;
    n.kind = op::constant;
    n.value = c;
    return make(std::move(n));
}

inline expr x()
{
    expr_node n;
    n.kind = op::variable;
    return make(std::move(n));
}

inline expr unary(op kind, expr a)
{
    expr_node n;
    n.kind = kind;
    n.args = {std::move(a)};
    return make(std::move(n));
}

inline expr binary(op kind, expr a, expr b)
{
    expr_node n;
    n.kind = kind;
    n.args = {std::move(a), std::move(b)};
    return make(std::move(n));
}

inline expr exp(expr a) { return unary(op::exp, std::move(a)); }
inline expr log(expr a) { return unary(op::log, std::move(a)); }
inline expr sin(expr a) { return unary(op::sin, std::move(a)); }
inline expr cos(expr a) { return unary(op::cos, std::move(a)); }

inline expr pow(expr a, long num, long den = 1)
{
    detail::require(den > 0, "pow: denominator must be positive");
    expr_node n;
    n.kind = op::pow;
    n.num = num;
    n.den = den;
    n.args = {std::move(a)};
    return make(std::move(n));
}

inline expr affine(expr a, double scale, double shift)
{
    detail::require(std::isfinite(scale) && std::isfinite(shift), "affine: coefficients must be finite");
    expr_node n;
    n.kind = op::affine;
    n.scale = scale;
    n.shift = shift;
    n.args = {std::move(a)};
    return make(std::move(n));
}

} // namespace fn

inline expr operator+(expr a, expr b) { return fn::binary(op::add, std::move(a), std::move(b)); }
inline expr operator-(expr a, expr b) { return fn::binary(op::sub, std::move(a), std::move(b)); }
inline expr operator*(expr a, expr b) { return fn::binary(op::mul, std::move(a), std::move(b)); }
inline expr operator/(expr a, expr b) { return fn::binary(op::div, std::move(a), std::move(b)); }
inline expr operator+(expr a, double b) { return std::move(a) + fn::constant(b); }
inline expr operator-(double a, expr b) { return fn::constant(a) - std::move(b); }
inline expr operator*(double a, expr b) { return fn::constant(a) * std::move(b); }
inline expr operator/(double a, expr b) { return fn::constant(a) / std::move(b); }

/// Closed-form function on [lo, hi].
struct function_spec {
    expr body;
    double lo = 0.0;
    double hi = 1.0;
    std::string name = "custom";

    function_spec(expr e, double a, double b, std::string label = "custom")
        : body(std::move(e)), lo(a), hi(b), name(std::move(label))
    {
        detail::require(std::isfinite(a) && std::isfinite(b) && a < b, "function domain must satisfy lo < hi");
    }

    bool contains(double t) const noexcept { return t >= lo && t <= hi; }
};

namespace detail {

inline std::string format_point(double t)
{
    std::ostringstream os;
    os.precision(17);
    os << t;
    return os.str();
}

inline void check_conditioning(const taylor::coeffs& c, op kind, double t)
{
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (!std::isfinite(c[k]) || std::abs(c[k]) > jet_magnitude_limit)
            throw numeric_error("jet: coefficient " + std::to_string(k) + " of node '" +
                                std::string(to_string(kind)) + "' at t=" + format_point(t) +
                                " exceeds the conditioning limit");
    }
}

inline taylor::coeffs eval_node(const expr_node& n, double t, std::size_t K)
{
    auto arg = [&](std::size_t i) { return eval_node(n.args.at(i).node(), t, K); };
    auto where = [&] { return " at t=" + format_point(t); };
    taylor::coeffs out;
    switch (n.kind) {
    case op::constant: out = taylor::constant(n.value, K); break;
    case op::variable: out = taylor::variable(t, K); break;
    case op::add: out = taylor::add(arg(0), arg(1)); break;
    case op::sub: out = taylor::sub(arg(0), arg(1)); break;
    case op::mul: out = taylor::mul(arg(0), arg(1)); break;
    case op::div: {
        auto u = arg(0);
        auto v = arg(1);
        if (v[0] == 0.0) throw validation_error("div: denominator vanishes" + where());
        out = taylor::div(u, v);
        break;
    }
    case op::exp: out = taylor::exp(arg(0)); break;
    case op::log: {
        auto u = arg(0);
        if (!(u[0] > 0.0))
            throw validation_error("log: argument " + format_point(u[0]) + " is not positive" + where());
        out = taylor::log(u);
        break;
    }
    case op::sin: out = taylor::sin_cos(arg(0)).first; break;
    case op::cos: out = taylor::sin_cos(arg(0)).second; break;
    case op::pow: {
        auto u = arg(0);
        if (n.den == 1 && n.num >= 0) {
            out = taylor::pow_nonneg_int(u, static_cast<unsigned long>(n.num));
        } else if (n.den == 1) {
            if (u[0] == 0.0) throw validation_error("pow: negative power of zero" + where());
            out = taylor::div(taylor::constant(1.0, K),
                              taylor::pow_nonneg_int(u, static_cast<unsigned long>(-n.num)));
        } else {
            if (!(u[0] > 0.0))
                throw validation_error("pow: fractional power of nonpositive base " + format_point(u[0]) +
                                       where());
            out = taylor::pow_real(u, double(n.num) / double(n.den));
        }
        break;
    }
    case op::affine: {
        taylor::coeffs inner = eval_node(n.args.at(0).node(), n.scale * t + n.shift, K);
        out = taylor::scale(std::move(inner), n.scale);
        break;
    }
    }
    check_conditioning(out, n.kind, t);
    return out;
}

} // namespace detail

/// Taylor coefficients of f at t to order K.
inline jet jet_eval(const function_spec& f, double t, std::size_t K)
{
    detail::require(K <= max_jet_order, "jet_eval: order " + std::to_string(K) + " exceeds " +
                                            std::to_string(max_jet_order));
    detail::require(f.contains(t), "jet_eval: t=" + detail::format_point(t) + " outside the domain of " + f.name);
    return jet(t, detail::eval_node(f.body.node(), t, K));
}

/// Built-in functions used throughout the experiments.
namespace catalog {

inline function_spec exponential(double lo = 0.0, double hi = 1.0)
{
    return {fn::exp(fn::x()), lo, hi, "exp"};
}

inline function_spec sine(double lo = 0.0, double hi = 1.0) { return {fn::sin(fn::x()), lo, hi, "sin"}; }

inline function_spec cosine(double lo = 0.0, double hi = 1.0) { return {fn::cos(fn::x()), lo, hi, "cos"}; }

/// 1 / (1 - x/2)
inline function_spec geometric(double lo = 0.0, double hi = 1.0)
{
    return {1.0 / (1.0 - fn::constant(0.5) * fn::x()), lo, hi, "geometric"};
}

/// exp(-1/x) on a domain inside x > 0.
inline function_spec flat(double lo = 0.5, double hi = 2.0)
{
    return {fn::exp(fn::constant(-1.0) / fn::x()), lo, hi, "flat"};
}

inline function_spec constant(double c, double lo = 0.0, double hi = 1.0)
{
    return {fn::constant(c), lo, hi, "const"};
}

inline function_spec by_name(std::string_view name, double lo, double hi)
{
    if (name == "exp") return exponential(lo, hi);
    if (name == "sin") return sine(lo, hi);
    if (name == "cos") return cosine(lo, hi);
    if (name == "geometric") return geometric(lo, hi);
    if (name == "flat") return flat(lo, hi);
    if (name == "zero") return constant(0.0, lo, hi);
    throw validation_error("unknown catalog function '" + std::string(name) + "'");
}

} // namespace catalog

} // namespace quasikit
