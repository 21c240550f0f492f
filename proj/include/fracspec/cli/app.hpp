#pragma once

// Command-line front end: CLI11 subcommands over RunConfig. Exit codes are
// 0 on success, 1 for invalid input, 2 for numerical failures.

#include <chrono>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracspec/cli/commands.hpp"

namespace fracspec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 1;
inline constexpr int kExitNumerical = 2;

namespace detail {

// Library parameter names shown as the flag that sets them.
inline std::string flag_name(const std::string& field) {
    static const std::map<std::string, std::string> m = {
        {"L", "length"},        {"N", "modes"},          {"X", "box"},
        {"sub_orders", "sub-orders"}, {"sub_weights", "sub-weights"}, {"w1", "init-velocity"},
        {"w0", "init"},         {"t_end", "t-end"},      {"coefficients", "init"},
    };
    const auto it = m.find(field);
    return it == m.end() ? field : it->second;
}

inline void write_text_file(const std::string& path, const std::string& body, const char* field) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParameterError("cannot write '" + path + "'", field);
    f << body;
    if (!f) throw ParameterError("failed writing '" + path + "'", field);
}

}  // namespace detail

/// Summary path: --summary, else "<output>.summary.json" when the CSV goes to a file.
inline std::string summary_path(const RunConfig& c) {
    if (!c.summary.empty()) return c.summary;
    if (c.output != "-" && c.command != Command::ml_eval) return c.output + ".summary.json";
    return {};
}

/// Parses argv, runs the command and writes its outputs. Never throws.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral solutions of time-fractional evolution equations"};
    app.name("fracspec");
    app.require_subcommand(1);

    const std::map<Command, const char*> help = {
        {Command::ml_eval, "evaluate the two-parameter Mittag-Leffler function E_{alpha,rho}(z)"},
        {Command::solve, "solve an evolution problem on a spectral operator and tabulate norms and bounds"},
        {Command::decay_study, "as solve, plus log-log slope fits and sup ratios per estimate"},
        {Command::oracle_compare, "compare the closed-form modes against the direct time stepper"},
        {Command::lplq_study, "Lp to Lq decay of the fractional heat multiplier on the line"},
    };
    struct Sub {
        Command command;
        CLI::App* app;
        std::string config;
        std::map<std::string, std::string> values;
    };
    std::vector<Sub> subs;
    subs.reserve(help.size());
    for (const auto& [cmd, text] : help) {
        subs.push_back({cmd, app.add_subcommand(to_string(cmd), text), {}, {}});
    }
    for (auto& s : subs) {
        s.app->add_option("--config", s.config, "JSON file of key/value settings; flags override it");
        for (const auto& f : command_fields(s.command)) s.app->add_option("--" + f, s.values[f]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "fracspec: " << e.what() << '\n';
        return kExitInvalidInput;
    }

    const Sub* chosen = nullptr;
    for (const auto& s : subs) {
        if (s.app->parsed()) chosen = &s;
    }
    RunConfig c;
    c.command = chosen->command;
    try {
        if (!chosen->config.empty()) apply_json_file(c, chosen->config);
        for (const auto& f : command_fields(c.command)) {
            if (chosen->app->count("--" + f) > 0) set_field(c, f, chosen->values.at(f));
        }
        const auto start = std::chrono::steady_clock::now();
        auto r = run_command(c);
        r.summary["runtime_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (r.table) {
            if (c.output == "-") {
                write_csv(out, *r.table);
            } else {
                std::ostringstream os;
                write_csv(os, *r.table);
                detail::write_text_file(c.output, os.str(), "output");
            }
        } else {
            out << r.text;
        }
        if (const auto path = summary_path(c); !path.empty()) {
            detail::write_text_file(path, r.summary.dump(2) + "\n", "summary");
        }
        return kExitOk;
    } catch (const ParameterError& e) {
        const std::string field = detail::flag_name(e.field());
        err << "fracspec: invalid " << (field.empty() ? std::string("input") : "'" + field + "'") << ": "
            << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const NumericalError& e) {
        err << "fracspec: numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "fracspec: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace fracspec::cli
