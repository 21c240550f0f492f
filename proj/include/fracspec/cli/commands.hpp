#pragma once

// The five tool commands. Each turns a RunConfig into a CSV table (or a
// printed value) plus a JSON summary; I/O and timing live in app.hpp.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracspec/cli/config.hpp"
#include "fracspec/cli/csv.hpp"
#include "fracspec/euclidean_multiplier.hpp"
#include "fracspec/evolution.hpp"
#include "fracspec/mittag_leffler.hpp"
#include "fracspec/oracle_compare.hpp"
#include "fracspec/spectral_operator.hpp"

namespace fracspec::cli {

struct CommandResult {
    std::optional<CsvTable> table;
    std::string text;  // printed instead of a table (ml-eval)
    nlohmann::json summary = nlohmann::json::object();
};

inline SpectralOperator build_operator(const RunConfig& c) {
    if (c.op == "dirichlet") return dirichlet_laplacian(c.length, c.modes);
    if (c.op == "periodic") return periodic_laplacian(c.modes);
    if (c.op == "hermite") return harmonic_oscillator(c.modes, c.box);
    if (c.op == "involution") return involution_operator(c.epsilon, c.modes);
    throw ParameterError("unknown operator '" + c.op + "' (dirichlet, periodic, hermite, involution)", "operator");
}

namespace detail {

template <class F>
SpectralCoefficients sample_function(const SpectralOperator& op, F f) {
    const auto g = op.default_grid();
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g.x[i]);
    return analyze(op, g, v);
}

// Piecewise-linear interpolation of a two-column (x, value) CSV file; zero outside.
inline SpectralCoefficients file_data(const SpectralOperator& op, const std::string& path,
                                      const std::string& field) {
    CsvTable t;
    try {
        t = read_csv_file(path);
    } catch (const ParameterError& e) {
        throw ParameterError(e.what(), field);
    }
    if (t.header.size() < 2 || t.rows.size() < 2) {
        throw ParameterError("data file needs two columns (x, value) and at least two rows", field);
    }
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : t.rows) pts.emplace_back(r[0], r[1]);
    std::sort(pts.begin(), pts.end());
    return sample_function(op, [&](double x) {
        if (x < pts.front().first || x > pts.back().first) return 0.0;
        auto hi = std::lower_bound(pts.begin(), pts.end(), std::make_pair(x, -HUGE_VAL));
        if (hi == pts.begin()) return hi->second;
        const auto lo = hi - 1;
        const double s = (x - lo->first) / (hi->first - lo->first);
        return lo->second + s * (hi->second - lo->second);
    });
}

}  // namespace detail

/// Initial data presets: zero, mode:k (1-based in eigenvalue order), gaussian:s
/// (centred on the domain), polynomial (x-a)(b-x), file:<path>.
inline SpectralCoefficients initial_data(const SpectralOperator& op, const std::string& preset,
                                         const std::string& field) {
    const auto colon = preset.find(':');
    const std::string name = preset.substr(0, colon);
    const std::string arg = colon == std::string::npos ? std::string{} : preset.substr(colon + 1);
    const double a = op.domain_begin();
    const double b = op.domain_end();
    if (name == "zero") return {std::vector<double>(op.size(), 0.0), op.label()};
    if (name == "mode") {
        const std::size_t k = detail::parse_count(arg.empty() ? "1" : arg, field);
        if (k < 1 || k > op.size()) {
            throw ParameterError("mode index must lie in 1.." + std::to_string(op.size()), field);
        }
        return unit_coefficients(op, k - 1);
    }
    if (name == "gaussian") {
        const double s = arg.empty() ? 0.1 * (b - a) : detail::parse_real(arg, field);
        if (!(s > 0.0)) throw ParameterError("gaussian width must be > 0", field);
        const double mid = 0.5 * (a + b);
        return detail::sample_function(op, [&](double x) { return std::exp(-(x - mid) * (x - mid) / (2 * s * s)); });
    }
    if (name == "polynomial") return detail::sample_function(op, [&](double x) { return (x - a) * (b - x); });
    if (name == "file") return detail::file_data(op, arg, field);
    throw ParameterError("unknown initial data '" + preset + "' (zero, mode:k, gaussian:s, polynomial, file:path)",
                         field);
}

inline EvolutionProblem build_problem(const RunConfig& c, const SpectralOperator& op) {
    EvolutionProblem p;
    p.kind = parse_evolution_kind(c.kind);
    if (!c.beta) throw ParameterError("the order beta is required", "beta");
    p.beta = *c.beta;
    p.sub_orders = c.sub_orders;
    p.sub_weights = c.sub_weights;
    p.horizon = c.horizon;
    p.w0 = initial_data(op, c.init, "init");
    if (is_wave(p.kind)) {
        p.w1 = initial_data(op, c.init_velocity, "init-velocity");
    } else if (c.init_velocity != "zero") {
        throw ParameterError("initial velocity applies to wave kinds only", "init-velocity");
    }
    p.validate(op);
    return p;
}

/// Times when --times is absent: 40 per decade from 1e-2 to 1e4, or to the horizon
/// for multi-term kinds.
inline std::vector<double> problem_times(const RunConfig& c, const EvolutionProblem& p) {
    if (!c.times.empty()) return parse_times(c.times);
    return log_times(1e-2, is_multiterm(p.kind) ? p.horizon : 1e4, 40);
}

/// Estimates when --estimates is absent: the sharp one for the kind, or its
/// zero-in-spectrum variant.
inline std::vector<EstimateId> problem_estimates(const RunConfig& c, const SpectralOperator& op,
                                                 const EvolutionProblem& p) {
    std::vector<EstimateId> out;
    for (const auto& s : c.estimates) {
        try {
            out.push_back(parse_estimate(s));
        } catch (const UnknownEstimateError& e) {
            throw UnknownEstimateError(e.what(), "estimates");
        }
    }
    if (!out.empty()) return out;
    const bool zero = op.zero_in_spectrum();
    switch (p.kind) {
        case EvolutionKind::heat: return {zero ? EstimateId::heat_1 : EstimateId::heat_2};
        case EvolutionKind::wave: return {zero ? EstimateId::wave_1 : EstimateId::wave_2};
        case EvolutionKind::multiterm_heat: return {zero ? EstimateId::multi_heat_1 : EstimateId::multi_heat_2};
        case EvolutionKind::multiterm_wave: return {zero ? EstimateId::multi_wave_1 : EstimateId::multi_wave_2};
    }
    return out;
}

inline nlohmann::json parameters_json(const RunConfig& c) {
    nlohmann::json j = nlohmann::json::object();
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    switch (c.command) {
        case Command::ml_eval:
            j = {{"alpha", c.alpha}, {"rho", c.rho}, {"z", opt(c.z)}};
            break;
        case Command::lplq_study:
            j = {{"alpha", c.alpha},   {"p", c.p},         {"q", c.q},
                 {"times", c.times},   {"width", c.width}, {"scaling", c.scaling},
                 {"half_width", c.half_width}, {"points", c.points}, {"power", c.power}};
            break;
        default:
            j = {{"operator", c.op},     {"length", c.length},        {"modes", c.modes},
                 {"epsilon", c.epsilon}, {"box", c.box},              {"kind", c.kind},
                 {"beta", opt(c.beta)},  {"sub_orders", c.sub_orders}, {"sub_weights", c.sub_weights},
                 {"horizon", c.horizon}, {"init", c.init},            {"init_velocity", c.init_velocity}};
            if (c.command == Command::oracle_compare) {
                j["steps"] = c.steps;
                j["t_end"] = c.t_end;
                j["stride"] = c.stride;
            } else {
                j["times"] = c.times;
                j["deltas"] = c.deltas;
                j["delta"] = c.delta;
                j["estimates"] = c.estimates;
            }
            if (c.command == Command::decay_study) {
                j["fit_min"] = c.fit_min;
                j["fit_max"] = std::isfinite(c.fit_max) ? nlohmann::json(c.fit_max) : nlohmann::json("inf");
            }
    }
    return j;
}

inline CommandResult run_ml_eval(const RunConfig& c) {
    if (!c.z) throw ParameterError("the argument z is required", "z");
    const auto r = ml_two({c.alpha, c.rho}, *c.z);
    CommandResult out;
    out.text = format_value(r.value) + "\n";
    out.summary["value"] = r.value;
    out.summary["method"] = to_string(r.method);
    out.summary["terms"] = r.terms_used;
    out.summary["est_abs_error"] = r.est_abs_error;
    return out;
}

namespace detail {

struct SolvedSeries {
    SpectralOperator op;
    EvolutionProblem problem;
    std::vector<SolutionSnapshot> snaps;
    std::vector<EstimateId> estimates;
    DataNorms norms;
    CsvTable table;
};

// Shared by solve and decay-study: snapshots, norms and one bound/ratio pair per estimate.
inline SolvedSeries solve_series(const RunConfig& c) {
    SolvedSeries s{build_operator(c), {}, {}, {}, {}, {}};
    s.problem = build_problem(c, s.op);
    const auto times = problem_times(c, s.problem);
    s.estimates = problem_estimates(c, s.op, s.problem);
    std::vector<double> deltas = c.deltas;
    if (std::find(deltas.begin(), deltas.end(), c.delta) == deltas.end()) deltas.push_back(c.delta);
    s.snaps = solve(s.op, s.problem, times, deltas);
    s.norms = data_norms(s.op, s.problem.w0, s.problem.w1, c.delta, s.problem.beta);

    auto& t = s.table;
    t.header = {"t", "l2_norm"};
    for (double d : c.deltas) t.header.push_back("sobolev_" + format_label(d));
    for (auto id : s.estimates) {
        t.header.push_back(std::string("bound_") + to_string(id));
        t.header.push_back(std::string("ratio_") + to_string(id));
    }
    for (const auto& snap : s.snaps) {
        std::vector<double> row = {snap.t, snap.l2_norm};
        for (double d : c.deltas) row.push_back(snap.sobolev_norms.at(d));
        const double norm = snap.sobolev_norms.at(c.delta);
        for (auto id : s.estimates) {
            const double bound = decay_bound({id, s.problem.beta, s.problem.sub_orders, s.problem.sub_weights},
                                             s.norms, snap.t);
            row.push_back(bound);
            row.push_back(bound > 0.0 ? norm / bound : (norm > 0.0 ? HUGE_VAL : 0.0));
        }
        t.rows.push_back(std::move(row));
    }
    return s;
}

}  // namespace detail

inline CommandResult run_solve(const RunConfig& c) {
    auto s = detail::solve_series(c);
    CommandResult out;
    nlohmann::json est = nlohmann::json::object();
    double first_sup = 0.0;
    for (std::size_t e = 0; e < s.estimates.size(); ++e) {
        const auto ratios = s.table.values(std::string("ratio_") + to_string(s.estimates[e]));
        const double sup = ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
        est[to_string(s.estimates[e])] = {{"sup_ratio", sup}};
        if (e == 0) first_sup = sup;
    }
    out.summary["sup_ratio"] = first_sup;
    out.summary["estimates"] = est;
    out.summary["rows"] = s.table.rows.size();
    out.table = std::move(s.table);
    return out;
}

inline CommandResult run_decay_study(const RunConfig& c) {
    auto s = detail::solve_series(c);
    CommandResult out;
    nlohmann::json est = nlohmann::json::object();
    for (std::size_t e = 0; e < s.estimates.size(); ++e) {
        const BoundShape shape{s.estimates[e], s.problem.beta, s.problem.sub_orders, s.problem.sub_weights};
        const auto fit = verify_decay(s.op, s.snaps, shape, {c.delta}, s.norms, {c.fit_min, c.fit_max});
        est[to_string(s.estimates[e])] = {{"sup_ratio", fit.bound_constant_estimate},
                                          {"sup_time", fit.sup_time},
                                          {"theorem_bound_slope", fit.theorem_bound_slope}};
        if (e == 0) {
            out.summary["fitted_slope"] = fit.fitted_slope;
            out.summary["slope_stderr"] = fit.slope_stderr;
            out.summary["sup_ratio"] = fit.bound_constant_estimate;
        }
    }
    out.summary["estimates"] = est;
    out.summary["rows"] = s.table.rows.size();
    out.table = std::move(s.table);
    return out;
}

inline CommandResult run_oracle_compare(const RunConfig& c) {
    const auto op = build_operator(c);
    const auto p = build_problem(c, op);
    OracleCompareOptions o;
    o.steps = c.steps;
    o.t_end = c.t_end;
    o.stride = c.stride;
    if (o.steps < 2) throw ParameterError("steps must be >= 2", "steps");
    if (!(o.t_end > 0.0) || !std::isfinite(o.t_end)) throw ParameterError("t-end must be > 0", "t-end");
    const auto r = compare_with_stepper(op, p, o);
    CommandResult out;
    CsvTable t;
    t.header = {"mode", "gamma", "max_error"};
    for (std::size_t m = 0; m < op.size(); ++m) {
        t.rows.push_back({static_cast<double>(m + 1), op.eigenvalue(m), r.mode_errors[m]});
    }
    out.summary["max_error"] = r.max_error;
    out.summary["steps"] = r.steps;
    out.summary["compared_nodes"] = r.compared_nodes;
    out.table = std::move(t);
    return out;
}

inline CommandResult run_lplq_study(const RunConfig& c) {
    LpLqStudy s;
    s.alpha = c.alpha;
    s.p = c.p;
    s.q = c.q;
    if (!c.times.empty()) s.times = parse_times(c.times);
    s.width = c.width;
    if (c.scaling == "self_similar" || c.scaling == "self-similar") {
        s.scaling = DataScaling::self_similar;
    } else if (c.scaling == "fixed") {
        s.scaling = DataScaling::fixed;
    } else {
        throw ParameterError("unknown scaling '" + c.scaling + "' (self_similar, fixed)", "scaling");
    }
    s.half_width = c.half_width;
    s.points = c.points;
    s.power = c.power;
    const auto r = run_lplq_study(s);
    CommandResult out;
    CsvTable t;
    t.header = {"t", "lq_norm", "bound_value", "ratio"};
    for (std::size_t i = 0; i < r.fit.times.size(); ++i) {
        t.rows.push_back({r.fit.times[i], r.fit.norms[i], r.fit.bounds[i], r.fit.norms[i] / r.fit.bounds[i]});
    }
    out.summary["fitted_slope"] = r.fit.fitted_slope;
    out.summary["slope_stderr"] = r.fit.slope_stderr;
    out.summary["sup_ratio"] = r.fit.bound_constant_estimate;
    out.summary["predicted_slope"] = r.predicted_slope;
    out.summary["max_seam_ratio"] = r.max_seam_ratio;
    out.table = std::move(t);
    return out;
}

/// Runs the command; the summary gains "command" and "parameters".
inline CommandResult run_command(const RunConfig& c) {
    CommandResult r;
    switch (c.command) {
        case Command::ml_eval: r = run_ml_eval(c); break;
        case Command::solve: r = run_solve(c); break;
        case Command::decay_study: r = run_decay_study(c); break;
        case Command::oracle_compare: r = run_oracle_compare(c); break;
        case Command::lplq_study: r = run_lplq_study(c); break;
    }
    r.summary["command"] = to_string(c.command);
    r.summary["parameters"] = parameters_json(c);
    return r;
}

/// Problems with a summary object; empty when it is well formed.
inline std::vector<std::string> validate_summary(const nlohmann::json& j) {
    std::vector<std::string> bad;
    if (!j.is_object()) return {"summary is not an object"};
    if (!j.contains("command") || !j["command"].is_string()) bad.push_back("command");
    if (!j.contains("parameters") || !j["parameters"].is_object()) bad.push_back("parameters");
    if (!j.contains("runtime_seconds") || !j["runtime_seconds"].is_number()) bad.push_back("runtime_seconds");
    for (const char* k : {"fitted_slope", "slope_stderr", "sup_ratio"}) {
        if (j.contains(k) && !j[k].is_number() && !j[k].is_null()) bad.push_back(k);
    }
    return bad;
}

}  // namespace fracspec::cli
