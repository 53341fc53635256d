// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 NeuroFRI Project Contributors

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "nfri/errors.hpp"
#include "nfri/event_io.hpp"
#include "nfri/scenario.hpp"

namespace {

nfri::SignalKind kind_from_name(const std::string& name) {
    if (name == "dirac") return nfri::SignalKind::DiracStream;
    if (name == "pulse") return nfri::SignalKind::PulseStream;
    if (name == "lspline") return nfri::SignalKind::LSpline;
    throw nfri::ConfigError("unknown signal kind '" + name + "'");
}

int order_from_random_spec(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || spec.substr(0, eq) != "K") {
        throw nfri::ConfigError("--random expects K=<order>, got '" + spec + "'");
    }
    try {
        return std::stoi(spec.substr(eq + 1));
    } catch (const std::exception&) {
        throw nfri::ConfigError("--random expects K=<order>, got '" + spec + "'");
    }
}

nfri::ScenarioConfig resolve_config(const std::string& arg) {
    if (std::filesystem::exists(arg)) return nfri::load_scenario(arg);
    const std::vector<std::string> names = nfri::builtin_scenario_names();
    if (std::find(names.begin(), names.end(), arg) != names.end()) {
        return nfri::builtin_scenario(arg);
    }
    throw nfri::ConfigError("'" + arg + "' is neither a config file nor a builtin scenario");
}

void print_run_summary(const nfri::ScenarioResult& result, const std::string& out_dir) {
    std::cout << "scenario " << result.config.name << ": ";
    if (result.streams.empty()) {
        std::cout << "no events";
    } else {
        std::cout << "events";
        for (const nfri::EventStream& s : result.streams) std::cout << ' ' << s.size();
    }
    std::cout << ", max error " << nfri::format_double(result.max_error) << ", "
              << (result.pass ? "pass" : "FAIL") << '\n';
    if (!result.note.empty()) std::cout << "note: " << result.note << '\n';
    if (!out_dir.empty()) std::cout << "artifacts written to " << out_dir << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Threshold-crossing sampling and perfect reconstruction of FRI signals"};
    app.require_subcommand(1);

    std::string out_dir;
    int grid_density = 0;
    app.add_option("--out", out_dir, "Directory for run artifacts");
    app.add_option("--grid-density", grid_density,
                   "Scan cells per period for encoding and range scans")
        ->check(CLI::PositiveNumber);

    CLI::App* run_cmd =
        app.add_subcommand("run", "Run one scenario from a JSON config or builtin name");
    std::string config_arg;
    run_cmd->add_option("config", config_arg, "Config file path or builtin scenario name")
        ->required();

    CLI::App* verify_cmd = app.add_subcommand(
        "verify", "Run every builtin scenario plus cross-module property checks");

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Randomized single-channel recovery trials");
    int trials = 100;
    std::uint64_t seed = 7;
    std::string random_spec;
    std::string kind_name = "dirac";
    int spline_degree = 0;
    double fraction = 0.9;
    sweep_cmd->add_option("--trials", trials, "Number of trials")
        ->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--seed", seed, "Base seed; trial i uses seed + i");
    sweep_cmd->add_option("--random", random_spec, "Model order as K=<int>");
    sweep_cmd->add_option("--kind", kind_name, "Signal kind: dirac, pulse or lspline");
    sweep_cmd->add_option("--spline-degree", spline_degree,
                          "Spline degree when --kind lspline");
    double min_gap = 0.0;
    sweep_cmd->add_option("--min-gap", min_gap,
                          "Minimum circular support gap (0 selects period/50)");
    sweep_cmd->add_option("--fraction", fraction,
                          "Threshold as a fraction of the recovery bound");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run_cmd->parsed()) {
            nfri::ScenarioConfig cfg = resolve_config(config_arg);
            if (grid_density > 0) cfg.grid_density = grid_density;
            const nfri::ScenarioResult result = nfri::run_scenario(cfg, out_dir);
            print_run_summary(result, out_dir);
            return result.pass ? 0 : 3;
        }
        if (verify_cmd->parsed()) {
            const std::vector<nfri::VerifyRow> rows = nfri::verify_suite(out_dir);
            std::cout << nfri::format_verify_table(rows);
            return nfri::all_passed(rows) ? 0 : 3;
        }
        if (sweep_cmd->parsed()) {
            nfri::SweepOptions options;
            options.trials = trials;
            options.seed = seed;
            options.kind = kind_from_name(kind_name);
            options.spline_degree = spline_degree;
            options.min_gap = min_gap;
            options.threshold_fraction = fraction;
            options.out_dir = out_dir;
            if (grid_density > 0) options.grid_density = grid_density;
            if (!random_spec.empty()) options.order = order_from_random_spec(random_spec);
            const nfri::SweepSummary summary = nfri::sweep(options);
            std::cout << format_sweep_summary(summary);
            return summary.passes == summary.trials ? 0 : 3;
        }
    } catch (const nfri::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const nfri::Error& e) {
        std::cerr << "reconstruction error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
