#pragma once

// Run configuration for the command-line tool. Every field is set from text
// through one table of setters, so a JSON config file and command-line flags
// share parsing and error messages; flags are applied after the file.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fracspec/errors.hpp"

namespace fracspec::cli {

enum class Command { ml_eval, solve, decay_study, oracle_compare, lplq_study };

inline const char* to_string(Command c) {
    switch (c) {
        case Command::ml_eval: return "ml-eval";
        case Command::solve: return "solve";
        case Command::decay_study: return "decay-study";
        case Command::oracle_compare: return "oracle-compare";
        case Command::lplq_study: return "lplq-study";
    }
    return "?";
}

inline Command parse_command(std::string_view s) {
    for (Command c : {Command::ml_eval, Command::solve, Command::decay_study, Command::oracle_compare,
                      Command::lplq_study}) {
        if (s == to_string(c)) return c;
    }
    throw ParameterError("unknown command '" + std::string(s) + "'", "command");
}

struct RunConfig {
    Command command = Command::solve;

    // ml-eval
    double alpha = 1.0;
    double rho = 1.0;
    std::optional<double> z;

    // operator
    std::string op = "dirichlet";
    double length = std::numbers::pi;
    std::size_t modes = 64;
    double epsilon = 0.0;
    double box = 0.0;  // hermite half-width, 0 selects the default

    // problem
    std::string kind = "heat";
    std::optional<double> beta;
    std::vector<double> sub_orders;
    std::vector<double> sub_weights;
    double horizon = 10.0;
    std::string init = "mode:1";
    std::string init_velocity = "zero";
    std::string times;  // empty selects the command default
    std::vector<double> deltas;
    double delta = 0.0;
    std::vector<std::string> estimates;
    double fit_min = 0.0;
    double fit_max = std::numeric_limits<double>::infinity();

    // oracle-compare
    std::size_t steps = 4096;
    double t_end = 2.0;
    std::size_t stride = 1;

    // lplq-study
    double p = 4.0 / 3.0;
    double q = 4.0;
    double width = 0.25;
    std::string scaling = "self_similar";
    double half_width = 200.0;
    std::size_t points = std::size_t{1} << 14;
    double power = 1.0;

    std::string output = "-";
    std::string summary;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_real(const std::string& text, const std::string& field) {
    const std::string s = trim(text);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') throw ParameterError("'" + text + "' is not a number", field);
    return v;
}

inline std::size_t parse_count(const std::string& text, const std::string& field) {
    const double v = parse_real(text, field);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) {
        throw ParameterError("'" + text + "' is not a non-negative integer", field);
    }
    return static_cast<std::size_t>(v);
}

inline std::vector<std::string> split_list(const std::string& text) {
    std::string s = trim(text);
    if (s.size() >= 2 && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
    std::vector<std::string> out;
    if (trim(s).empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(',', start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::vector<double> parse_reals(const std::string& text, const std::string& field) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(parse_real(item, field));
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

inline const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> m;
        auto real = [&](const char* name, double RunConfig::*f) {
            m[name] = [f, name](RunConfig& c, const std::string& v) { c.*f = parse_real(v, name); };
        };
        auto count = [&](const char* name, std::size_t RunConfig::*f) {
            m[name] = [f, name](RunConfig& c, const std::string& v) { c.*f = parse_count(v, name); };
        };
        auto text = [&](const char* name, std::string RunConfig::*f) {
            m[name] = [f](RunConfig& c, const std::string& v) { c.*f = trim(v); };
        };
        auto reals = [&](const char* name, std::vector<double> RunConfig::*f) {
            m[name] = [f, name](RunConfig& c, const std::string& v) { c.*f = parse_reals(v, name); };
        };
        real("alpha", &RunConfig::alpha);
        real("rho", &RunConfig::rho);
        m["z"] = [](RunConfig& c, const std::string& v) { c.z = parse_real(v, "z"); };
        text("operator", &RunConfig::op);
        real("length", &RunConfig::length);
        count("modes", &RunConfig::modes);
        real("epsilon", &RunConfig::epsilon);
        real("box", &RunConfig::box);
        text("kind", &RunConfig::kind);
        m["beta"] = [](RunConfig& c, const std::string& v) { c.beta = parse_real(v, "beta"); };
        reals("sub-orders", &RunConfig::sub_orders);
        reals("sub-weights", &RunConfig::sub_weights);
        real("horizon", &RunConfig::horizon);
        text("init", &RunConfig::init);
        text("init-velocity", &RunConfig::init_velocity);
        text("times", &RunConfig::times);
        reals("deltas", &RunConfig::deltas);
        real("delta", &RunConfig::delta);
        m["estimates"] = [](RunConfig& c, const std::string& v) { c.estimates = split_list(v); };
        real("fit-min", &RunConfig::fit_min);
        real("fit-max", &RunConfig::fit_max);
        count("steps", &RunConfig::steps);
        real("t-end", &RunConfig::t_end);
        count("stride", &RunConfig::stride);
        real("p", &RunConfig::p);
        real("q", &RunConfig::q);
        real("width", &RunConfig::width);
        text("scaling", &RunConfig::scaling);
        real("half-width", &RunConfig::half_width);
        count("points", &RunConfig::points);
        real("power", &RunConfig::power);
        text("output", &RunConfig::output);
        text("summary", &RunConfig::summary);
        return m;
    }();
    return table;
}

inline std::string normalize_key(std::string k) {
    for (char& ch : k) {
        if (ch == '_') ch = '-';
    }
    return k;
}

inline std::string json_to_text(const nlohmann::json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        return buf;
    }
    if (v.is_array()) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + json_to_text(v[i], key);
        return out;
    }
    throw ParameterError("config value for '" + key + "' must be a number, string or array", key);
}

}  // namespace detail

/// Names accepted by a command, both as flags (--name) and as config-file keys.
inline const std::vector<std::string>& command_fields(Command cmd) {
    static const std::vector<std::string> op = {"operator", "length", "modes", "epsilon", "box"};
    static const std::vector<std::string> problem = {"kind", "beta", "sub-orders", "sub-weights",
                                                     "horizon", "init", "init-velocity"};
    auto join = [](std::initializer_list<std::vector<std::string>> parts) {
        std::vector<std::string> out;
        for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
        return out;
    };
    static const std::vector<std::string> ml = {"alpha", "rho", "z", "summary"};
    static const std::vector<std::string> solve =
        join({op, problem, {"times", "deltas", "delta", "estimates", "output", "summary"}});
    static const std::vector<std::string> decay = join({solve, {"fit-min", "fit-max"}});
    static const std::vector<std::string> oracle =
        join({op, problem, {"steps", "t-end", "stride", "output", "summary"}});
    static const std::vector<std::string> lplq = {"alpha", "p", "q", "times", "width", "scaling",
                                                  "half-width", "points", "power", "output", "summary"};
    switch (cmd) {
        case Command::ml_eval: return ml;
        case Command::solve: return solve;
        case Command::decay_study: return decay;
        case Command::oracle_compare: return oracle;
        case Command::lplq_study: return lplq;
    }
    return ml;
}

inline void set_field(RunConfig& c, const std::string& key, const std::string& value) {
    const std::string name = detail::normalize_key(key);
    const auto& allowed = command_fields(c.command);
    const auto& table = detail::setters();
    const auto it = table.find(name);
    if (it == table.end() || std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
        throw ParameterError("unknown key '" + key + "' for command " + to_string(c.command), key);
    }
    it->second(c, value);
}

/// Applies a JSON object of key -> value; "command" is checked against c.command.
inline void apply_json(RunConfig& c, const nlohmann::json& j) {
    if (!j.is_object()) throw ParameterError("config file must hold a JSON object", "config");
    for (const auto& [key, value] : j.items()) {
        if (key == "command") {
            if (!value.is_string() || parse_command(value.get<std::string>()) != c.command) {
                throw ParameterError("config file is for a different command", "command");
            }
            continue;
        }
        set_field(c, key, detail::json_to_text(value, key));
    }
}

inline void apply_json_file(RunConfig& c, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open config file '" + path + "'", "config");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParameterError(std::string("config file is not valid JSON: ") + e.what(), "config");
    }
    apply_json(c, j);
}

/// "logspace(a, b, n)": n points 10^a .. 10^b; otherwise a comma-separated list.
inline std::vector<double> parse_times(const std::string& spec) {
    const std::string s = detail::trim(spec);
    const std::string prefix = "logspace(";
    if (s.rfind(prefix, 0) == 0) {
        if (s.back() != ')') throw ParameterError("logspace(start, stop, count) is missing ')'", "times");
        const auto args = detail::split_list(s.substr(prefix.size(), s.size() - prefix.size() - 1));
        if (args.size() != 3) throw ParameterError("logspace takes (start, stop, count)", "times");
        const double a = detail::parse_real(args[0], "times");
        const double b = detail::parse_real(args[1], "times");
        const std::size_t n = detail::parse_count(args[2], "times");
        if (n < 2 || !(b > a)) throw ParameterError("logspace needs stop > start and count >= 2", "times");
        std::vector<double> t(n);
        for (std::size_t i = 0; i < n; ++i) {
            t[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
        }
        return t;
    }
    auto t = detail::parse_reals(s, "times");
    if (t.empty()) throw ParameterError("times list is empty", "times");
    return t;
}

}  // namespace fracspec::cli
