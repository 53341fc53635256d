// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 NeuroFRI Project Contributors

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nfri/encoder.hpp"
#include "nfri/recon.hpp"
#include "nfri/signal.hpp"

namespace nfri {

enum class ScenarioMode { Single, Simo, Mimo };

/// Seeded signal generator: supports drawn uniformly on [0, T) with a
/// minimum circular gap, coefficients either uniform in [amp_min, amp_max]
/// with random sign or standard normal (redrawn while |a| < 0.1).
struct RandomSignalSpec {
    int order = 5;
    std::uint64_t seed = 1;
    double min_gap = 0.0;  // 0 selects period / 50
    double amp_min = 0.2;
    double amp_max = 1.0;
    bool normal_amplitudes = false;
};

struct ModelSpec {
    SignalKind kind = SignalKind::DiracStream;
    int pulse_degree = 3;
    double pulse_scale = 0.1;
    int spline_degree = 0;

    ModelDescriptor descriptor() const;
};

/// One experiment: a signal (explicit parameters or a seeded draw), a
/// sampling kernel order, per-channel thresholds (absolute or as fractions
/// of the applicable recovery bound), and run controls.
struct ScenarioConfig {
    std::string name = "custom";
    ScenarioMode mode = ScenarioMode::Single;
    double period = 1.0;
    ModelSpec model;
    int kernel_order = 0;
    int channels = 1;

    // Explicit parameters; both empty means draw from `random`. Supports are
    // shared across channels, coefficients hold one vector per channel
    // (exactly one for single and SIMO runs).
    std::vector<double> supports;
    std::vector<Eigen::VectorXd> coefficients;
    RandomSignalSpec random;

    std::vector<double> thresholds;           // absolute contrast values
    std::vector<double> threshold_fractions;  // of the recovery bound

    double start = 0.0;
    int grid_density = 100000;
    int grid_points = 1000;
    double tolerance = 1e-8;

    // Non-empty marks a negative case: the run passes iff this error fires.
    std::string expect_error;
};

/// Parses a JSON config; unknown keys and malformed values raise ConfigError.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::string& path);

ScenarioConfig builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

struct ScenarioResult {
    ScenarioConfig config;
    std::vector<double> true_supports;
    std::vector<Eigen::VectorXd> true_coefficients;
    std::vector<double> bounds;      // recovery bound per channel
    std::vector<double> thresholds;  // resolved contrast per channel
    std::vector<EventStream> streams;
    std::vector<ReconstructionReport> reports;
    double max_error = 0.0;
    bool pass = false;
    std::string note;
};

/// Runs one scenario end to end. Writes events.csv, metadata.json,
/// report.json and grid.csv under out_dir when it is non-empty. Thresholds
/// are checked against the recovery bound before encoding; a violation
/// raises InsufficientEvents (matched against expect_error for negative
/// cases). Identical config and seed give byte-identical artifacts.
ScenarioResult run_scenario(const ScenarioConfig& config,
                            const std::string& out_dir = "");

/// Worst parameter mismatch between a reference and an estimate: supports
/// compared circularly modulo the period over all cyclic alignments,
/// coefficients paired accordingly. Infinite on a size mismatch.
double parameter_error(const std::vector<double>& tau_ref,
                       const Eigen::VectorXd& a_ref,
                       const std::vector<double>& tau_est,
                       const Eigen::VectorXd& a_est, double period);

struct VerifyRow {
    std::string scenario;
    int events = 0;
    double condition = 0.0;
    double residual = 0.0;
    double max_error = 0.0;
    bool pass = false;
    std::string note;
};

/// Runs every builtin scenario plus cross-module property checks; one row
/// per check. Artifacts land under out_dir/<scenario> when given.
std::vector<VerifyRow> verify_suite(const std::string& out_dir = "");
bool all_passed(const std::vector<VerifyRow>& rows);
std::string format_verify_table(const std::vector<VerifyRow>& rows);

struct SweepOptions {
    int trials = 100;
    std::uint64_t seed = 7;
    int order = 5;
    SignalKind kind = SignalKind::DiracStream;
    int spline_degree = 0;
    double min_gap = 0.0;  // 0 selects period / 50
    double threshold_fraction = 0.9;
    double tolerance = 1e-8;
    int grid_density = 100000;
    std::string out_dir;  // empty skips artifacts
};

struct SweepSummary {
    int trials = 0;
    int passes = 0;
    int ill_conditioned_failures = 0;
    double worst_error = 0.0;
    std::vector<std::string> failures;
};

/// Repeated single-channel trials on seeded random signals, thresholds at
/// the configured fraction of the recovery bound. Trial i uses seed + i.
SweepSummary sweep(const SweepOptions& options);
std::string format_sweep_summary(const SweepSummary& summary);

}  // namespace nfri
