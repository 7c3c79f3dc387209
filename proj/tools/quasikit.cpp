// quasikit command-line front end.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "quasikit/io.hpp"
#include "quasikit/quasikit.hpp"

namespace qk = quasikit;
using qk::io::json;

namespace {

constexpr const char* tool_version = "0.1.0";

enum class level { quiet, info, debug };

level log_level()
{
    const char* v = std::getenv("QUASIKIT_LOG");
    if (!v) return level::info;
    std::string s(v);
    if (s == "quiet") return level::quiet;
    if (s == "debug") return level::debug;
    return level::info;
}

void log(level at, const std::string& msg)
{
    static const level current = log_level();
    if (current == level::quiet || at > current) return;
    std::cerr << "quasikit: " << msg << '\n';
}

// Input files read by the command; digests go into the manifest.
class inputs {
public:
    json load(const std::string& path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw qk::validation_error("cannot read '" + path + "'");
        std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        digests_[path] = sha256(bytes);
        log(level::debug, "read " + path + " (" + std::to_string(bytes.size()) + " bytes)");
        try {
            return json::parse(bytes);
        } catch (const json::parse_error& e) {
            throw qk::validation_error("'" + path + "' is not valid JSON: " + e.what());
        }
    }

    json digests() const
    {
        json j = json::object();
        for (const auto& [path, d] : digests_) j[path] = d;
        return j;
    }

private:
    static std::string sha256(const std::string& bytes)
    {
        unsigned char md[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
            throw std::runtime_error("sha256 failed");
        static const char* hex = "0123456789abcdef";
        std::string out;
        for (unsigned int i = 0; i < len; ++i) {
            out += hex[md[i] >> 4];
            out += hex[md[i] & 15];
        }
        return out;
    }

    std::map<std::string, std::string> digests_;
};

struct globals {
    std::string out;
    std::string csv;
    std::uint64_t seed = 0;
    std::optional<std::size_t> horizon;
    std::optional<double> tolerance;
};

struct outcome {
    json result;
    std::optional<qk::io::plot_table> table;
};

// ---- seq -----------------------------------------------------------------------

struct seq_opts {
    std::string spec;
};

qk::log_sequence load_sequence(inputs& in, const std::string& path, const globals& g)
{
    auto spec = qk::io::sequence_spec_from_json(in.load(path));
    if (g.horizon) spec.horizon = *g.horizon;
    return qk::make_sequence(spec);
}

outcome seq_make(inputs& in, const seq_opts& o, const globals& g)
{
    auto m = load_sequence(in, o.spec, g);
    return {qk::io::to_json(m), qk::io::emit_plotdata(m)};
}

outcome seq_regularize(inputs& in, const seq_opts& o, const globals& g)
{
    auto r = qk::convex_regularize(load_sequence(in, o.spec, g));
    return {qk::io::to_json(r), qk::io::emit_plotdata(r)};
}

outcome seq_analyze(inputs& in, const seq_opts& o, const globals& g)
{
    auto m = load_sequence(in, o.spec, g);
    log(level::info, "analyzing " + m.generator() + " on horizon " + std::to_string(m.size()));
    auto rep = qk::analyze(m);
    return {qk::io::to_json(rep), qk::io::emit_plotdata(rep)};
}

// ---- bang ----------------------------------------------------------------------

struct bang_opts {
    std::string vector;
    std::string pset;
    std::string other;
};

qk::bang_vector load_vector(inputs& in, const std::string& path, const std::string& pset)
{
    auto x = qk::io::bang_vector_from_json(in.load(path));
    if (!pset.empty()) x = qk::bang_vector(x.entries, qk::io::index_set_from_json(in.load(pset)));
    return x;
}

outcome bang_norm_cmd(inputs& in, const bang_opts& o, const globals&)
{
    auto x = load_vector(in, o.vector, o.pset);
    auto r = qk::bang_norm(x);
    json j = qk::io::to_json(r);
    j["bruteforce"] = qk::bang_norm_bruteforce(x);
    return {j, std::nullopt};
}

outcome bang_distance_cmd(inputs& in, const bang_opts& o, const globals&)
{
    if (o.other.empty()) throw qk::validation_error("bang distance needs --other");
    auto x = load_vector(in, o.vector, o.pset);
    auto y = load_vector(in, o.other, o.pset);
    return {json{{"distance", qk::bang_distance(x, y)}}, std::nullopt};
}

// ---- gont ----------------------------------------------------------------------

struct gont_opts {
    std::string nodes;
    std::optional<double> x;
    std::string fn;
    std::size_t sweep = 0;
};

outcome gont_build(inputs& in, const gont_opts& o, const globals&)
{
    auto q = qk::build(qk::io::nodes_from_json(in.load(o.nodes)));
    return {qk::io::to_json(q), std::nullopt};
}

outcome gont_eval(inputs& in, const gont_opts& o, const globals&)
{
    if (!o.x) throw qk::validation_error("gont eval needs --x");
    auto nodes = qk::io::nodes_from_json(in.load(o.nodes));
    auto q = qk::build(nodes);
    json j = {{"x", *o.x}, {"value", qk::eval(q, *o.x)}};
    if (!nodes.empty()) j["gontcharoff_bound"] = qk::gontcharoff_bound(nodes, *o.x);
    if (nodes.size() <= qk::max_oracle_degree) j["integral_oracle"] = qk::integral_oracle(nodes, *o.x);
    return {j, std::nullopt};
}

outcome gont_check(inputs& in, const gont_opts& o, const globals& g)
{
    const double tol = g.tolerance.value_or(qk::identity_tolerance);
    auto nodes = qk::io::nodes_from_json(in.load(o.nodes));
    const double x = o.x.value_or(0.0);
    json j;

    // identities on the supplied nodes
    auto q = qk::build(nodes);
    double vanish = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        auto d = qk::derivative(q, k);
        vanish = std::max(vanish, std::abs(qk::eval(d, nodes[k])) / std::max(1.0, qk::magnitude(d, nodes[k])));
    }
    j["nodes"] = {{"degree", nodes.size()}, {"vanishing_residual", vanish}, {"ok", vanish <= tol}};

    // random sweep over degrees 1..10 with nodes, x, y in [-1, 1]
    if (o.sweep > 0) {
        std::mt19937_64 rng(g.seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double swap_max = 0.0, dec_max = 0.0;
        std::size_t bound_violations = 0;
        for (std::size_t s = 0; s < o.sweep; ++s) {
            std::size_t n = 1 + s % 10;
            std::vector<double> v(n), ys(n);
            for (double& a : v) a = u(rng);
            for (double& a : ys) a = u(rng);
            double px = u(rng), py = u(rng);
            auto sw = qk::swap_identity_residual(v, s % n, py, px);
            auto dc = qk::decomposition_residual(v, ys, px);
            swap_max = std::max(swap_max, sw.residual / sw.scale);
            dec_max = std::max(dec_max, dc.residual / dc.scale);
            if (std::abs(qk::eval(qk::build(v), px)) > qk::gontcharoff_bound(v, px) * (1.0 + 1e-9)) ++bound_violations;
        }
        j["sweep"] = {{"count", o.sweep},
                      {"seed", g.seed},
                      {"swap_identity_max", swap_max},
                      {"decomposition_max", dec_max},
                      {"bound_violations", bound_violations},
                      {"ok", swap_max <= tol && dec_max <= tol && bound_violations == 0}};
    }

    if (!o.fn.empty()) {
        auto f = qk::io::function_spec_from_json(in.load(o.fn));
        if (nodes.empty()) throw qk::validation_error("gont check --fn needs at least one node");
        j["abel"] = qk::io::to_json(qk::abel_expand(f, nodes, nodes.size() - 1, x));
    }
    return {j, std::nullopt};
}

// ---- lab -----------------------------------------------------------------------

struct lab_opts {
    std::string fn;
    std::string seq;
    std::size_t nmax = 10;
    std::size_t grid = qk::default_envelope_grid;
};

qk::log_sequence lab_sequence(inputs& in, const lab_opts& o, const globals& g, std::size_t need)
{
    if (o.seq.empty()) throw qk::validation_error("this lab command needs --seq");
    auto m = load_sequence(in, o.seq, g);
    if (m.size() < need)
        throw qk::validation_error("weight sequence horizon " + std::to_string(m.size()) + " is below " +
                                   std::to_string(need));
    return m;
}

outcome lab_envelope(inputs& in, const lab_opts& o, const globals&)
{
    auto f = qk::io::function_spec_from_json(in.load(o.fn));
    auto env = qk::derivative_envelope(f, o.nmax, o.grid);
    return {qk::io::to_json(env), qk::io::emit_plotdata(env)};
}

outcome lab_monotonic(inputs& in, const lab_opts& o, const globals& g)
{
    auto f = qk::io::function_spec_from_json(in.load(o.fn));
    auto m = lab_sequence(in, o, g, 1);
    return {qk::io::to_json(qk::monotonicity_check(f, m, o.nmax, o.grid)), std::nullopt};
}

outcome lab_spacing(inputs& in, const lab_opts& o, const globals& g)
{
    auto f = qk::io::function_spec_from_json(in.load(o.fn));
    auto m = lab_sequence(in, o, g, o.nmax + 1);
    auto rep = qk::zero_spacing_experiment(f, m, o.nmax);
    return {qk::io::to_json(rep), qk::io::emit_plotdata(rep)};
}

// ---- weight --------------------------------------------------------------------

struct weight_opts {
    std::string mu = "zero";
    std::optional<double> t0;
    double power = 0.5;
    double rmin = 100.0;
    double rmax = 1e6;
    std::size_t samples = 64;
};

qk::weight_function make_weight(const weight_opts& o)
{
    return qk::make_weight(qk::mu_from_string(o.mu), o.t0, o.power);
}

outcome weight_analyze(inputs&, const weight_opts& o, const globals&)
{
    auto w = make_weight(o);
    auto s = qk::io::sample_weight(w, o.rmin, o.rmax, o.samples);
    json j = {{"weight", qk::io::to_json(w)}, {"samples", qk::io::to_json(s)}};
    return {j, qk::io::emit_plotdata(s)};
}

outcome weight_check(inputs&, const weight_opts& o, const globals&)
{
    auto w = make_weight(o);
    const std::size_t n0 = std::size_t(std::ceil(w.t0));
    json j = {{"weight", qk::io::to_json(w)}};

    std::size_t sandwich_fail = 0;
    const double lo = qk::m_eval(w, w.t0).dm + 0.5, hi = std::log(o.rmax);
    for (std::size_t i = 0; i < 100; ++i) {
        double lr = lo + (hi - lo) * double(i) / 99.0;
        if (!qk::lambda_sandwich(w, lr).ok) ++sandwich_fail;
    }
    j["sandwich_failures"] = sandwich_fail;

    auto c = qk::series_integral_coherence(w, n0, 2000);
    j["coherence"] = {{"series_trend", std::string(qk::to_string(c.series.trend))},
                      {"integral_trend", std::string(qk::to_string(c.integral.trend))},
                      {"agree", c.agree}};
    j["shift_bound"] = qk::shift_bound_check(w, 1, n0, 10000) && qk::shift_bound_check(w, 3, n0, 10000);
    j["algebra"] = qk::algebra_check(w, 200);
    try {
        j["analytic"] = {{"hypothesis", true},
                         {"conclusion", qk::analytic_criterion(w, qk::analytic_c, qk::analytic_A, n0, 10000)}};
    } catch (const qk::validation_error& e) {
        j["analytic"] = {{"hypothesis", false}, {"reason", e.what()}};
    }
    return {j, std::nullopt};
}

// ---- output --------------------------------------------------------------------

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw qk::validation_error("cannot write '" + path + "'");
    f << text;
}

std::string command_line(int argc, char** argv)
{
    std::string s;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) s += ' ';
        s += argv[i];
    }
    return s;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Quasianalytic class diagnostics", "quasikit"};
    app.set_version_flag("--version", std::string("quasikit ") + tool_version);
    app.require_subcommand(1);
    // global flags may follow the subcommand; inherited by every subcommand
    app.fallthrough();

    globals g;
    std::size_t horizon = 0;
    double tolerance = 0.0;
    app.add_option("--out", g.out, "Write the JSON report here (stdout otherwise)");
    app.add_option("--csv", g.csv, "Write x,series,value plot rows here");
    app.add_option("--seed", g.seed, "Seed for randomized sweeps")->capture_default_str();
    auto* horizon_opt = app.add_option("--horizon", horizon, "Override the sequence horizon")->check(CLI::PositiveNumber);
    auto* tol_opt = app.add_option("--tolerance", tolerance, "Residual tolerance for identity checks")
                        ->check(CLI::PositiveNumber);

    std::function<outcome(inputs&)> run;

    auto* seq = app.add_subcommand("seq", "Weight sequences and their series diagnostics")->require_subcommand(1);
    seq_opts so;
    for (auto [name, fn] : {std::pair{"make", &seq_make}, std::pair{"regularize", &seq_regularize},
                            std::pair{"analyze", &seq_analyze}}) {
        auto* sub = seq->add_subcommand(name);
        sub->add_option("--spec", so.spec, "Sequence spec JSON")->required();
        sub->callback([&, fn] { run = [&, fn](inputs& in) { return fn(in, so, g); }; });
    }

    auto* bang = app.add_subcommand("bang", "Bang's norm on sequences")->require_subcommand(1);
    bang_opts bo;
    for (auto [name, fn] : {std::pair{"norm", &bang_norm_cmd}, std::pair{"distance", &bang_distance_cmd}}) {
        auto* sub = bang->add_subcommand(name);
        sub->add_option("--vector", bo.vector, "Vector JSON")->required();
        sub->add_option("--pset", bo.pset, "Index set JSON overriding the vector's");
        if (std::string(name) == "distance") sub->add_option("--other", bo.other, "Second vector JSON")->required();
        sub->callback([&, fn] { run = [&, fn](inputs& in) { return fn(in, bo, g); }; });
    }

    auto* gont = app.add_subcommand("gont", "Abel-Gontcharoff polynomials")->require_subcommand(1);
    gont_opts go;
    for (auto [name, fn] : {std::pair{"build", &gont_build}, std::pair{"eval", &gont_eval},
                            std::pair{"check", &gont_check}}) {
        auto* sub = gont->add_subcommand(name);
        sub->add_option("--nodes", go.nodes, "Nodes JSON")->required();
        if (std::string(name) != "build") sub->add_option("--x", go.x, "Evaluation point");
        if (std::string(name) == "check") {
            sub->add_option("--fn", go.fn, "Function JSON for the Abel expansion");
            sub->add_option("--sweep", go.sweep, "Random identity sweeps");
            sub->add_option("--seed", g.seed, "Seed for the sweep");
        }
        sub->callback([&, fn] { run = [&, fn](inputs& in) { return fn(in, go, g); }; });
    }

    auto* lab = app.add_subcommand("lab", "Derivative experiments")->require_subcommand(1);
    lab_opts lo;
    for (auto [name, fn] : {std::pair{"envelope", &lab_envelope}, std::pair{"monotonic", &lab_monotonic},
                            std::pair{"spacing", &lab_spacing}}) {
        auto* sub = lab->add_subcommand(name);
        sub->add_option("--fn", lo.fn, "Function JSON")->required();
        sub->add_option("--seq", lo.seq, "Weight sequence spec JSON");
        sub->add_option("--nmax", lo.nmax, "Highest derivative order")->capture_default_str();
        sub->add_option("--grid", lo.grid, "Grid size")->capture_default_str();
        sub->callback([&, fn] { run = [&, fn](inputs& in) { return fn(in, lo, g); }; });
    }

    auto* weight = app.add_subcommand("weight", "Continuous weight functions")->require_subcommand(1);
    weight_opts wo;
    for (auto [name, fn] : {std::pair{"analyze", &weight_analyze}, std::pair{"check", &weight_check}}) {
        auto* sub = weight->add_subcommand(name);
        sub->add_option("--mu", wo.mu, "zero | loglog | log | power")->capture_default_str();
        sub->add_option("--t0", wo.t0, "Left end of the validity range");
        sub->add_option("--power", wo.power, "Exponent for mu = power")->capture_default_str();
        sub->add_option("--rmin", wo.rmin, "Smallest sample r")->capture_default_str();
        sub->add_option("--rmax", wo.rmax, "Largest sample r")->capture_default_str();
        sub->add_option("--samples", wo.samples, "Number of samples")->capture_default_str();
        sub->callback([&, fn] { run = [&, fn](inputs& in) { return fn(in, wo, g); }; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (horizon_opt->count()) g.horizon = horizon;
    if (tol_opt->count()) g.tolerance = tolerance;

    const auto started = std::chrono::steady_clock::now();
    try {
        inputs in;
        outcome res = run(in);

        json manifest = {{"command", command_line(argc, argv)},
                         {"input_digests", in.digests()},
                         {"tool_version", tool_version},
                         {"seed", g.seed}};
        json doc = {{"manifest", manifest}, {"result", res.result}};
        const std::string text = doc.dump(2) + "\n";

        if (g.out.empty()) {
            std::cout << text;
        } else {
            write_file(g.out, text);
            const double ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
            json side = manifest;
            side["output"] = g.out;
            side["duration_ms"] = ms;
            write_file(g.out + ".manifest.json", side.dump(2) + "\n");
            log(level::info, "wrote " + g.out);
        }
        if (!g.csv.empty()) {
            std::ostringstream os;
            (res.table ? *res.table : qk::io::plot_table{}).write(os);
            write_file(g.csv, os.str());
            log(level::info, "wrote " + g.csv);
        }
        return 0;
    } catch (const qk::validation_error& e) {
        std::cerr << "quasikit: error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "quasikit: internal error: " << e.what() << '\n';
        return 1;
    }
}
