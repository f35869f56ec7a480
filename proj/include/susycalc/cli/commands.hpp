#pragma once

#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "susycalc/checks.hpp"
#include "susycalc/errors.hpp"
#include "susycalc/euler/hopf.hpp"
#include "susycalc/euler/mq.hpp"
#include "susycalc/geometry/builtins.hpp"
#include "susycalc/pfaffian/skew_json.hpp"

namespace susy::cli {

using nlohmann::json;

/// Exit codes: 0 success, 1 property-suite failure, 2 configuration or
/// input error, 3 numeric failure, 4 degenerate zero.
enum ExitCode : int {
    kOk = 0,
    kSuiteFailure = 1,
    kConfigError = 2,
    kNumericError = 3,
    kDegenerateZero = 4,
};

/// One validated run request, assembled from the command line before any
/// computation starts.
struct RunConfig {
    std::string command;
    std::string manifold;
    std::map<std::string, double> params;
    std::string section = "zero";
    std::vector<int> grid;
    std::vector<double> t_values;
    euler::NormalizationMode mode = euler::NormalizationMode::calibrated;
    std::uint64_t seed = 0;
    int max_n = 8;
    int seeds_per_axis = 32;
    std::string output;
};

namespace detail {

inline std::vector<int> parse_grid(const std::string& text, int dim) {
    std::vector<int> counts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            counts.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw ConfigError("invalid grid entry \"" + item + "\"");
        }
    }
    if (counts.size() == 1) counts.assign(static_cast<std::size_t>(dim), counts.front());
    return counts;
}

inline std::vector<double> parse_t_list(const std::string& text) {
    std::vector<double> ts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            ts.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("invalid scale entry \"" + item + "\"");
        }
    }
    return ts;
}

/// Collects every configuration problem into one message.
inline void validate(const RunConfig& cfg, int dim) {
    std::vector<std::string> problems;
    if (cfg.grid.size() != static_cast<std::size_t>(dim))
        problems.push_back("grid must list 1 or " + std::to_string(dim) + " node counts");
    for (int c : cfg.grid)
        if (c < 8) problems.push_back("node counts must be at least 8 (got " + std::to_string(c) + ")");
    for (double t : cfg.t_values)
        if (t < 0.0) problems.push_back("scale values must be >= 0");
    if (!problems.empty()) {
        std::string joined;
        for (std::size_t i = 0; i < problems.size(); ++i)
            joined += (i ? "; " : "") + problems[i];
        throw ConfigError(joined);
    }
}

inline json params_json(const std::map<std::string, double>& params) {
    json j = json::object();
    for (const auto& [k, v] : params) j[k] = v;
    return j;
}

inline json suites_json(const std::vector<checks::SuiteResult>& suites) {
    json arr = json::array();
    for (const auto& s : suites) {
        json item = {{"name", s.name},
                     {"instances", s.instances},
                     {"max_deviation", s.max_deviation},
                     {"pass", s.pass}};
        if (!s.failing_case.empty()) item["failing_case"] = s.failing_case;
        arr.push_back(item);
    }
    return arr;
}

inline void emit(const json& doc, const std::string& output, std::ostream& out) {
    if (output.empty()) {
        out << doc.dump(2) << "\n";
    } else {
        std::ofstream f(output);
        if (!f) throw ConfigError("cannot write " + output);
        f << doc.dump(2) << "\n";
    }
}

inline euler::MQContext make_context(const RunConfig& cfg) {
    euler::MQContext ctx;
    ctx.manifold = geometry::builtin_manifold(cfg.manifold, cfg.params);
    ctx.section = geometry::builtin_section(cfg.section, ctx.manifold);
    ctx.mode = cfg.mode;
    ctx.nodes_per_axis = cfg.grid;
    return ctx;
}

}  // namespace detail

inline int cmd_check(const RunConfig& cfg, std::ostream& out) {
    if (cfg.max_n < 2 || cfg.max_n > 10 || cfg.max_n % 2 != 0)
        throw ConfigError("--max-n must be an even number in [2, 10]");
    const auto suites = checks::run_all(cfg.seed, cfg.max_n);
    bool all = true;
    for (const auto& s : suites) all = all && s.pass;
    const json doc = {{"command", "check"},
                      {"seed", cfg.seed},
                      {"max_n", cfg.max_n},
                      {"pass", all},
                      {"suites", detail::suites_json(suites)}};
    detail::emit(doc, cfg.output, out);
    return all ? kOk : kSuiteFailure;
}

inline int cmd_pfaffian(const std::string& path, const std::string& method, std::ostream& out) {
    const auto w = pfaffian::load_skew_matrix(path);
    double value = 0.0;
    if (method == "berezin") {
        value = pfaffian::pfaffian_berezin(w);
    } else if (method == "expansion") {
        value = pfaffian::pfaffian_expansion(w);
    } else {
        throw ConfigError("unknown method \"" + method + "\" (berezin, expansion)");
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    out << buf << "\n";
    return kOk;
}

inline int cmd_euler(const RunConfig& cfg, std::ostream& out) {
    auto ctx = detail::make_context(cfg);
    detail::validate(cfg, ctx.manifold.dim);
    const double t = cfg.t_values.empty() ? 1.0 : cfg.t_values.front();
    const auto result = euler::euler_integral(ctx, t);
    const json doc = {{"manifold", cfg.manifold},
                      {"params", detail::params_json(ctx.manifold.params)},
                      {"section", cfg.section},
                      {"mode", euler::to_string(cfg.mode)},
                      {"t", t},
                      {"chi", result.chi},
                      {"convergence_estimate", result.convergence_estimate},
                      {"normalization_constant", euler::mode_constant(cfg.mode, ctx.manifold.dim / 2)},
                      {"node_counts", cfg.grid}};
    detail::emit(doc, cfg.output, out);
    return kOk;
}

inline int cmd_hopf(const RunConfig& cfg, std::ostream& out) {
    auto ctx = detail::make_context(cfg);
    detail::validate(cfg, ctx.manifold.dim);
    const auto report = euler::hopf_indices(ctx, cfg.seeds_per_axis);
    json zeros = json::array();
    for (const auto& z : report.zeros) {
        std::vector<double> pt(z.point.data(), z.point.data() + z.point.size());
        zeros.push_back({{"point", pt}, {"index", z.index}, {"abs_det", z.abs_det}});
    }
    const json doc = {{"manifold", cfg.manifold},
                      {"params", detail::params_json(ctx.manifold.params)},
                      {"section", cfg.section},
                      {"zeros", zeros},
                      {"total", report.total},
                      {"warnings", report.warnings}};
    detail::emit(doc, cfg.output, out);
    return kOk;
}

inline int cmd_scan(const RunConfig& cfg, std::ostream& out) {
    auto ctx = detail::make_context(cfg);
    detail::validate(cfg, ctx.manifold.dim);
    if (cfg.t_values.empty()) throw ConfigError("scan requires --t with at least one value");
    const auto result = euler::thom_family_scan(ctx, cfg.t_values);
    json points = json::array();
    for (const auto& p : result.points)
        points.push_back(
            {{"t", p.t}, {"chi", p.chi}, {"convergence_estimate", p.convergence_estimate}});
    const json doc = {{"manifold", cfg.manifold},
                      {"params", detail::params_json(ctx.manifold.params)},
                      {"section", cfg.section},
                      {"mode", euler::to_string(cfg.mode)},
                      {"points", points},
                      {"max_pairwise_deviation", result.max_pairwise_deviation},
                      {"normalization_constant", euler::mode_constant(cfg.mode, ctx.manifold.dim / 2)},
                      {"node_counts", cfg.grid},
                      {"warnings", result.warnings}};
    detail::emit(doc, cfg.output, out);
    return kOk;
}

/// Parses and dispatches.  All output goes to the supplied streams so the
/// whole surface is testable in process.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"finite-dimensional supersymmetric calculus and curvature integrals"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string grid_text = "auto";
    std::string t_text;
    std::string mode_text = "calibrated";
    std::string method = "berezin";
    std::string input_path;

    auto add_manifold_flags = [&](CLI::App* sub) {
        sub->add_option("--manifold", cfg.manifold, "built-in manifold name")->required();
        sub->add_option("--radius", [&cfg](const CLI::results_t& r) {
            cfg.params["radius"] = std::stod(r.front());
            return true;
        }, "sphere radius");
        sub->add_option("--R", [&cfg](const CLI::results_t& r) {
            cfg.params["R"] = std::stod(r.front());
            return true;
        }, "torus major radius");
        sub->add_option("--r", [&cfg](const CLI::results_t& r) {
            cfg.params["r"] = std::stod(r.front());
            return true;
        }, "torus tube radius");
        sub->add_option("--section", cfg.section, "built-in section name");
        sub->add_option("--grid", grid_text, "nodes per axis (single value or comma list)");
        sub->add_option("--mode", mode_text, "normalization mode: eqU, eqU1, calibrated");
        sub->add_option("--output", cfg.output, "write the JSON result to this path");
    };

    auto* check = app.add_subcommand("check", "run the algebra property suites");
    check->add_option("--seed", cfg.seed, "RNG seed");
    check->add_option("--max-n", cfg.max_n, "largest generator count (even, <= 10)");
    check->add_option("--output", cfg.output, "write the JSON report to this path");

    auto* pf = app.add_subcommand("pfaffian", "pfaffian of a skew matrix from a JSON file");
    pf->add_option("input", input_path, "JSON file {\"n\": .., \"entries\": [[..]]}")->required();
    pf->add_option("--method", method, "berezin or expansion");

    auto* eul = app.add_subcommand("euler", "integrate the curvature representative");
    add_manifold_flags(eul);
    eul->add_option("--t", t_text, "section scale");

    auto* hopf = app.add_subcommand("hopf", "locate section zeros and sum their indices");
    add_manifold_flags(hopf);
    hopf->add_option("--seeds", cfg.seeds_per_axis, "Newton seeds per axis");

    auto* scan = app.add_subcommand("scan", "integral across a family of section scales");
    add_manifold_flags(scan);
    scan->add_option("--t", t_text, "comma list of scales")->required();

    std::vector<const char*> argv;
    argv.push_back("susycalc");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e, out, err);
            return code == 0 ? kOk : kConfigError;
        }

        cfg.mode = euler::parse_mode(mode_text);
        if (!t_text.empty()) cfg.t_values = detail::parse_t_list(t_text);

        if (*check) {
            cfg.command = "check";
            return cmd_check(cfg, out);
        }
        if (*pf) {
            cfg.command = "pfaffian";
            return cmd_pfaffian(input_path, method, out);
        }

        // remaining commands need the manifold's dimension for grid defaults
        const auto probe = geometry::builtin_manifold(cfg.manifold, cfg.params);
        if (grid_text == "auto") grid_text = probe.dim == 2 ? "64" : "16";
        cfg.grid = detail::parse_grid(grid_text, probe.dim);

        if (*eul) {
            cfg.command = "euler";
            return cmd_euler(cfg, out);
        }
        if (*hopf) {
            cfg.command = "hopf";
            return cmd_hopf(cfg, out);
        }
        cfg.command = "scan";
        return cmd_scan(cfg, out);
    } catch (const DegenerateZeroError& e) {
        err << "error: " << e.what() << "\n";
        return kDegenerateZero;
    } catch (const NumericError& e) {
        err << "error: " << e.what() << "\n";
        return kNumericError;
    } catch (const GeometryError& e) {
        err << "error: " << e.what() << "\n";
        return kNumericError;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const LoadError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }
}

}  // namespace susy::cli
