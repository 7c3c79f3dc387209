#pragma once

/**
 * @file io.hpp
 * @brief JSON conversions for the library types and flat CSV plot data.
 *
 * Doubles are written in shortest round-trip form; non-finite values
 * (log of zero) appear as null in JSON and as "-inf"/"inf"/"nan" in CSV.
 */

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "quasikit/bang.hpp"
#include "quasikit/error.hpp"
#include "quasikit/gontcharoff.hpp"
#include "quasikit/jet.hpp"
#include "quasikit/lab.hpp"
#include "quasikit/sequence.hpp"
#include "quasikit/series.hpp"
#include "quasikit/weight.hpp"

namespace quasikit::io {

using json = nlohmann::ordered_json;

namespace detail {

template <class T>
T get(const json& j, const char* key, const char* what)
{
    if (!j.is_object() || !j.contains(key))
        throw validation_error(std::string(what) + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string(what) + ": field '" + key + "' has the wrong type");
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const char* what)
{
    if (!j.is_object() || !j.contains(key)) return fallback;
    return get<T>(j, key, what);
}

} // namespace detail

// ---- sequences ---------------------------------------------------------------

inline sequence_spec sequence_spec_from_json(const json& j)
{
    sequence_spec s;
    s.kind = family_from_string(detail::get<std::string>(j, "family", "sequence spec"));
    s.param = detail::get_or<double>(j, "param", 1.0, "sequence spec");
    if (j.contains("params")) {
        // {"s": ...} for gevrey, {"C": ...} for the Denjoy families
        const json& p = j.at("params");
        if (!p.is_object()) throw validation_error("sequence spec: 'params' must be an object");
        for (const char* key : {"s", "C"})
            if (p.contains(key)) s.param = detail::get<double>(p, key, "sequence spec params");
    }
    s.horizon = detail::get_or<std::size_t>(j, "horizon", 0, "sequence spec");
    if (s.kind == family::explicit_values) s.logs = detail::get<std::vector<double>>(j, "logs", "sequence spec");
    return s;
}

inline json to_json(const log_sequence& m)
{
    return {{"generator", m.generator()},
            {"filled_below", m.filled_below()},
            {"logs", std::vector<double>(m.logs().begin(), m.logs().end())}};
}

inline json to_json(const regularized_sequence& r)
{
    return {{"logs_c", r.logs_c}, {"principal", r.principal}, {"vertices", r.vertices}};
}

inline json to_json(const series_report& s)
{
    return {{"first_index", s.first_index},       {"terms", s.terms},
            {"partial_sums", s.partial_sums},     {"trend", std::string(to_string(s.trend))},
            {"slope_estimate", s.slope_estimate}, {"tail_increment", s.tail_increment}};
}

inline json to_json(const qa_report& q)
{
    return {{"beta", q.beta},
            {"carleman", to_json(q.carleman)},
            {"root_c", to_json(q.root_c)},
            {"ratio_c", to_json(q.ratio_c)},
            {"liminf_flag", q.liminf_flag},
            {"chain_ok", q.chain_ok},
            {"regularized", to_json(q.regularized)}};
}

// ---- bang ----------------------------------------------------------------------

/// {"entries": [...], "index_set": [...]}; a missing index set means every position.
inline bang_vector bang_vector_from_json(const json& j)
{
    auto x = detail::get<std::vector<double>>(j, "entries", "bang vector");
    if (j.contains("index_set"))
        return bang_vector(std::move(x), detail::get<std::vector<std::size_t>>(j, "index_set", "bang vector"));
    return bang_vector(std::move(x));
}

/// Either a bare array or {"index_set": [...]}.
inline std::vector<std::size_t> index_set_from_json(const json& j)
{
    if (j.is_array()) {
        try {
            return j.get<std::vector<std::size_t>>();
        } catch (const nlohmann::json::exception&) {
            throw validation_error("index set: expected an array of nonnegative integers");
        }
    }
    return detail::get<std::vector<std::size_t>>(j, "index_set", "index set");
}

inline json to_json(const bang_vector& x) { return {{"entries", x.entries}, {"index_set", x.index_set}}; }

inline json to_json(const bang_norm_result& r)
{
    return {{"value", r.value},
            {"witness_k", r.witness_k},
            {"reduction_bound", r.reduction_bound},
            {"truncated", r.truncated}};
}

// ---- expressions -----------------------------------------------------------------

inline expr expr_from_json(const json& j)
{
    const char* what = "expression";
    op kind = op_from_string(detail::get<std::string>(j, "op", what));
    switch (kind) {
    case op::constant: return fn::constant(detail::get<double>(j, "value", what));
    case op::variable: return fn::x();
    case op::add:
    case op::sub:
    case op::mul:
    case op::div:
        return fn::binary(kind, expr_from_json(detail::get<json>(j, "lhs", what)),
                          expr_from_json(detail::get<json>(j, "rhs", what)));
    case op::exp:
    case op::log:
    case op::sin:
    case op::cos: return fn::unary(kind, expr_from_json(detail::get<json>(j, "arg", what)));
    case op::pow:
        return fn::pow(expr_from_json(detail::get<json>(j, "arg", what)), detail::get<long>(j, "num", what),
                       detail::get_or<long>(j, "den", 1, what));
    case op::affine:
        return fn::affine(expr_from_json(detail::get<json>(j, "arg", what)), detail::get<double>(j, "scale", what),
                          detail::get_or<double>(j, "shift", 0.0, what));
    }
    throw validation_error("expression: unsupported op");
}

inline json to_json(const expr& e)
{
    const expr_node& n = e.node();
    json j = {{"op", std::string(to_string(n.kind))}};
    switch (n.kind) {
    case op::constant: j["value"] = n.value; break;
    case op::variable: break;
    case op::add:
    case op::sub:
    case op::mul:
    case op::div:
        j["lhs"] = to_json(n.args[0]);
        j["rhs"] = to_json(n.args[1]);
        break;
    case op::pow:
        j["arg"] = to_json(n.args[0]);
        j["num"] = n.num;
        j["den"] = n.den;
        break;
    case op::affine:
        j["arg"] = to_json(n.args[0]);
        j["scale"] = n.scale;
        j["shift"] = n.shift;
        break;
    default: j["arg"] = to_json(n.args[0]); break;
    }
    return j;
}

/// {"catalog": "exp", "domain": [a, b]} or {"expr": {...}, "domain": [a, b], "name": "..."}.
inline function_spec function_spec_from_json(const json& j)
{
    auto dom = detail::get<std::vector<double>>(j, "domain", "function");
    if (dom.size() != 2) throw validation_error("function: domain must be [lo, hi]");
    if (j.contains("catalog")) return catalog::by_name(detail::get<std::string>(j, "catalog", "function"), dom[0], dom[1]);
    return function_spec(expr_from_json(detail::get<json>(j, "expr", "function")), dom[0], dom[1],
                         detail::get_or<std::string>(j, "name", "custom", "function"));
}

inline json to_json(const function_spec& f)
{
    return {{"name", f.name}, {"domain", {f.lo, f.hi}}, {"expr", to_json(f.body)}};
}

inline json to_json(const jet& j)
{
    return {{"center", j.center()}, {"order", j.order()},
            {"coeffs", std::vector<double>(j.coeffs().begin(), j.coeffs().end())}};
}

inline json to_json(const envelope_report& e)
{
    return {{"grid_size", e.grid.size()}, {"log_m_est", e.log_m_est}, {"lower_bound", e.lower_bound}};
}

inline json to_json(const monotonicity_result& m)
{
    json j = {{"holds", m.holds}, {"witness", nullptr}};
    if (m.witness) j["witness"] = {{"n", m.witness->n}, {"x", m.witness->x}};
    return j;
}

inline json to_json(const spacing_report& s)
{
    return {{"x", s.x}, {"lhs_partial", s.lhs_partial}, {"rhs_partial", s.rhs_partial}};
}

// ---- gontcharoff -------------------------------------------------------------------

/// {"nodes": [...], "degree": n}; degree is optional but must match when present.
inline std::vector<double> nodes_from_json(const json& j)
{
    auto nodes = detail::get<std::vector<double>>(j, "nodes", "nodes");
    if (j.contains("degree") && detail::get<std::size_t>(j, "degree", "nodes") != nodes.size())
        throw validation_error("nodes: degree does not match the node count");
    return nodes;
}

inline json to_json(const gontcharoff_poly& q)
{
    return {{"degree", q.degree()}, {"nodes", q.nodes}, {"scaled_coeffs", q.scaled_coeffs}};
}

inline json to_json(const residual_report& r)
{
    return {{"residual", r.residual}, {"scale", r.scale}, {"ok", r.ok}};
}

inline json to_json(const abel_expansion& a)
{
    return {{"value", a.value},
            {"partial", a.partial},
            {"remainder", a.remainder},
            {"remainder_bound", a.remainder_bound},
            {"rounding", a.rounding},
            {"ok", a.ok}};
}

// ---- weights -------------------------------------------------------------------------

inline json to_json(const weight_function& w)
{
    json j = {{"mu", std::string(to_string(w.mu))}, {"t0", w.t0}, {"delta", w.delta}};
    if (w.mu == mu_kind::power) j["power"] = w.power;
    if (w.shift_a != 0.0 || w.shift_b != 0.0) j["shift"] = {w.shift_a, w.shift_b};
    return j;
}

inline json to_json(const integral_report& r)
{
    return {{"integral", r.integral}, {"trend", std::string(to_string(r.trend))}, {"pieces", to_json(r.pieces)}};
}

inline json to_json(const asymptotics_report& a)
{
    return {{"s", a.s},
            {"ratios", a.ratios},
            {"final_within", a.final_within},
            {"monotone_toward_one", a.monotone_toward_one}};
}

/// Samples of the transforms on a log grid.
struct weight_samples {
    std::vector<double> r;
    std::vector<double> log_Lambda;
    std::vector<double> omega;
    std::vector<double> log_lambda;
};

inline weight_samples sample_weight(const weight_function& w, double r_min, double r_max, std::size_t count)
{
    quasikit::detail::require(r_min > 0.0 && r_max >= r_min, "weight samples: need 0 < r_min <= r_max");
    quasikit::detail::require(count >= 1, "weight samples: need at least one sample");
    weight_samples s;
    const double a = std::log(r_min), b = std::log(r_max);
    for (std::size_t i = 0; i < count; ++i) {
        double lr = count == 1 ? a : a + (b - a) * double(i) / double(count - 1);
        s.r.push_back(i == 0 ? r_min : (i + 1 == count ? r_max : std::exp(lr)));
        auto lam = Lambda_log(w, lr);
        s.log_Lambda.push_back(lam.log_value);
        s.omega.push_back(-lam.log_value);
        s.log_lambda.push_back(lambda_integer_log(w, lr).log_value);
    }
    return s;
}

inline json to_json(const weight_samples& s)
{
    return {{"r", s.r}, {"log_Lambda", s.log_Lambda}, {"omega", s.omega}, {"log_lambda", s.log_lambda}};
}

// ---- CSV ---------------------------------------------------------------------------------

inline std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Flat (x, series, value) rows.
class plot_table {
public:
    void add(double x, const std::string& series, double value) { rows_.push_back({x, series, value}); }

    void add_series(const series_report& s, const std::string& prefix = "")
    {
        const std::string p = prefix.empty() ? "" : prefix + ".";
        for (std::size_t k = 0; k < s.terms.size(); ++k) add(double(s.first_index + k), p + "term", s.terms[k]);
        for (std::size_t k = 0; k < s.partial_sums.size(); ++k)
            add(double(s.first_index + k), p + "partial", s.partial_sums[k]);
    }

    std::size_t size() const noexcept { return rows_.size(); }

    void write(std::ostream& os) const
    {
        os << "x,series,value\n";
        for (const auto& r : rows_) os << format_double(r.x) << ',' << r.series << ',' << format_double(r.value) << '\n';
    }

private:
    struct row {
        double x;
        std::string series;
        double value;
    };
    std::vector<row> rows_;
};

inline plot_table emit_plotdata(const series_report& s)
{
    plot_table t;
    t.add_series(s);
    return t;
}

inline plot_table emit_plotdata(const qa_report& q)
{
    plot_table t;
    t.add_series(q.carleman, "carleman");
    t.add_series(q.root_c, "root_c");
    t.add_series(q.ratio_c, "ratio_c");
    return t;
}

inline plot_table emit_plotdata(const weight_samples& s)
{
    plot_table t;
    for (std::size_t i = 0; i < s.r.size(); ++i) t.add(s.r[i], "omega", s.omega[i]);
    for (std::size_t i = 0; i < s.r.size(); ++i) t.add(s.r[i], "log_Lambda", s.log_Lambda[i]);
    for (std::size_t i = 0; i < s.r.size(); ++i) t.add(s.r[i], "log_lambda", s.log_lambda[i]);
    return t;
}

inline plot_table emit_plotdata(const envelope_report& e)
{
    plot_table t;
    for (std::size_t n = 0; n < e.log_m_est.size(); ++n) t.add(double(n), "log_m_est", e.log_m_est[n]);
    return t;
}

inline plot_table emit_plotdata(const spacing_report& s)
{
    plot_table t;
    for (std::size_t k = 0; k < s.x.size(); ++k) t.add(double(k), "zero", s.x[k]);
    for (std::size_t k = 0; k < s.lhs_partial.size(); ++k) t.add(double(k), "lhs_partial", s.lhs_partial[k]);
    for (std::size_t k = 0; k < s.rhs_partial.size(); ++k) t.add(double(k), "rhs_partial", s.rhs_partial[k]);
    return t;
}

inline plot_table emit_plotdata(const regularized_sequence& r)
{
    plot_table t;
    for (std::size_t n = 0; n < r.logs_c.size(); ++n) t.add(double(n), "logs_c", r.logs_c[n]);
    return t;
}

inline plot_table emit_plotdata(const log_sequence& m)
{
    plot_table t;
    for (std::size_t n = 0; n < m.size(); ++n) t.add(double(n), "logs", m[n]);
    return t;
}

} // namespace quasikit::io
