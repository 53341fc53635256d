// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 NeuroFRI Project Contributors

#include "nfri/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "nfri/errors.hpp"
#include "nfri/event_io.hpp"
#include "nfri/kernel.hpp"
#include "nfri/multichannel.hpp"
#include "nfri/prony.hpp"

namespace nfri {
namespace {

using nlohmann::json;

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
    return out;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

std::string mode_name(ScenarioMode mode) {
    switch (mode) {
        case ScenarioMode::Single: return "single";
        case ScenarioMode::Simo: return "simo";
        case ScenarioMode::Mimo: return "mimo";
    }
    return "single";
}

ScenarioMode parse_mode(const std::string& name) {
    if (name == "single") return ScenarioMode::Single;
    if (name == "simo") return ScenarioMode::Simo;
    if (name == "mimo") return ScenarioMode::Mimo;
    throw ConfigError("config: unknown mode '" + name + "'");
}

std::string kind_name(SignalKind kind) {
    switch (kind) {
        case SignalKind::DiracStream: return "dirac";
        case SignalKind::PulseStream: return "pulse";
        case SignalKind::LSpline: return "lspline";
    }
    return "dirac";
}

SignalKind parse_kind(const std::string& name) {
    if (name == "dirac") return SignalKind::DiracStream;
    if (name == "pulse") return SignalKind::PulseStream;
    if (name == "lspline") return SignalKind::LSpline;
    throw ConfigError("config: unknown signal kind '" + name + "'");
}

const std::vector<std::string>& known_error_names() {
    static const std::vector<std::string> names = {
        "AliasingError",       "KernelNullsSignal",      "TooFewEvents",
        "DegenerateSignal",    "ModelOrderMismatch",     "DuplicateTimes",
        "InsufficientEvents",  "InsufficientTotalEvents", "DuplicateThresholds",
        "NoCommonSupport",     "NumericalInconsistency", "ConfigError"};
    return names;
}

bool error_matches(const Error& e, const std::string& name) {
    if (name == "AliasingError") return dynamic_cast<const AliasingError*>(&e) != nullptr;
    if (name == "KernelNullsSignal") return dynamic_cast<const KernelNullsSignal*>(&e) != nullptr;
    if (name == "TooFewEvents") return dynamic_cast<const TooFewEvents*>(&e) != nullptr;
    if (name == "DegenerateSignal") return dynamic_cast<const DegenerateSignal*>(&e) != nullptr;
    if (name == "ModelOrderMismatch") return dynamic_cast<const ModelOrderMismatch*>(&e) != nullptr;
    if (name == "DuplicateTimes") return dynamic_cast<const DuplicateTimes*>(&e) != nullptr;
    if (name == "InsufficientEvents") return dynamic_cast<const InsufficientEvents*>(&e) != nullptr;
    if (name == "InsufficientTotalEvents")
        return dynamic_cast<const InsufficientTotalEvents*>(&e) != nullptr;
    if (name == "DuplicateThresholds") return dynamic_cast<const DuplicateThresholds*>(&e) != nullptr;
    if (name == "NoCommonSupport") return dynamic_cast<const NoCommonSupport*>(&e) != nullptr;
    if (name == "NumericalInconsistency")
        return dynamic_cast<const NumericalInconsistency*>(&e) != nullptr;
    if (name == "ConfigError") return dynamic_cast<const ConfigError*>(&e) != nullptr;
    return false;
}

/// Engine-stable uniform and normal draws (identical output for a given
/// seed regardless of the standard library's distribution internals).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        if (cached_) {
            cached_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        spare_ = radius * std::sin(2.0 * kPi * u2);
        cached_ = true;
        return radius * std::cos(2.0 * kPi * u2);
    }

private:
    std::mt19937_64 engine_;
    bool cached_ = false;
    double spare_ = 0.0;
};

std::vector<double> draw_supports(Rng& rng, int order, double period, double min_gap) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
        std::vector<double> tau(static_cast<std::size_t>(order));
        for (double& t : tau) t = rng.uniform(0.0, period);
        std::sort(tau.begin(), tau.end());
        bool ok = true;
        for (int k = 0; k + 1 < order; ++k) {
            if (tau[static_cast<std::size_t>(k + 1)] - tau[static_cast<std::size_t>(k)] < min_gap) {
                ok = false;
                break;
            }
        }
        if (order > 1 && period - tau.back() + tau.front() < min_gap) ok = false;
        if (ok) return tau;
    }
    throw ConfigError("random signal: could not place " + std::to_string(order) +
                      " supports with the requested minimum gap");
}

Eigen::VectorXd draw_coefficients(Rng& rng, const RandomSignalSpec& spec, int order,
                                  bool zero_mean) {
    if (zero_mean && order < 2) {
        throw ConfigError("random signal: spline innovations need at least two pulses");
    }
    for (int attempt = 0; attempt < 10000; ++attempt) {
        Eigen::VectorXd a(order);
        for (int k = 0; k < order; ++k) {
            if (spec.normal_amplitudes) {
                double v = rng.normal();
                while (std::abs(v) < 0.1) v = rng.normal();
                a[k] = v;
            } else {
                const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
                a[k] = sign * rng.uniform(spec.amp_min, spec.amp_max);
            }
        }
        if (zero_mean) {
            a.array() -= a.mean();
            if (a.cwiseAbs().minCoeff() < 0.05) continue;
        }
        return a;
    }
    throw ConfigError("random signal: could not draw usable coefficients");
}

FriSignal make_signal(const ModelSpec& model, const Eigen::VectorXd& a,
                      const std::vector<double>& tau, double period) {
    const Eigen::VectorXd t = to_eigen(tau);
    switch (model.kind) {
        case SignalKind::DiracStream:
            return FriSignal::dirac_stream(a, t, period);
        case SignalKind::PulseStream:
            return FriSignal::pulse_stream(
                Pulse::scaled_bspline(model.pulse_degree, model.pulse_scale), a, t, period);
        case SignalKind::LSpline:
            return FriSignal::lspline(model.spline_degree, a, t, period);
    }
    throw ConfigError("config: unknown signal kind");
}

void validate_config(const ScenarioConfig& cfg) {
    if (!(cfg.period > 0.0)) throw ConfigError("config: period must be positive");
    if (cfg.channels < 1) throw ConfigError("config: channels must be >= 1");
    if (cfg.mode == ScenarioMode::Single && cfg.channels != 1) {
        throw ConfigError("config: single mode uses exactly one channel");
    }
    if (cfg.mode != ScenarioMode::Single && cfg.channels < 2) {
        throw ConfigError("config: simo/mimo modes need at least two channels");
    }
    if (cfg.kernel_order < 0 || cfg.kernel_order > 8) {
        throw ConfigError("config: kernel_order must be in [0, 8]");
    }
    if (cfg.model.kind == SignalKind::PulseStream) {
        if (cfg.model.pulse_degree < 0 || cfg.model.pulse_degree > 8) {
            throw ConfigError("config: pulse_degree must be in [0, 8]");
        }
        if (!(cfg.model.pulse_scale > 0.0)) {
            throw ConfigError("config: pulse_scale must be positive");
        }
    }
    if (cfg.model.kind == SignalKind::LSpline &&
        (cfg.model.spline_degree < 0 || cfg.model.spline_degree > 8)) {
        throw ConfigError("config: spline_degree must be in [0, 8]");
    }

    const int signal_count = cfg.mode == ScenarioMode::Mimo ? cfg.channels : 1;
    if (!cfg.supports.empty()) {
        for (std::size_t k = 0; k < cfg.supports.size(); ++k) {
            const double t = cfg.supports[k];
            if (!(t >= 0.0) || !(t < cfg.period)) {
                throw ConfigError("config: supports must lie in [0, period)");
            }
            if (k > 0 && !(t > cfg.supports[k - 1])) {
                throw ConfigError("config: supports must be strictly increasing");
            }
        }
        if (static_cast<int>(cfg.coefficients.size()) != signal_count) {
            throw ConfigError("config: expected " + std::to_string(signal_count) +
                              " coefficient vector(s), got " +
                              std::to_string(cfg.coefficients.size()));
        }
        for (const Eigen::VectorXd& a : cfg.coefficients) {
            if (a.size() != static_cast<Eigen::Index>(cfg.supports.size())) {
                throw ConfigError("config: coefficient/support length mismatch");
            }
        }
    } else {
        if (!cfg.coefficients.empty()) {
            throw ConfigError("config: coefficients given without supports");
        }
        if (cfg.random.order < 1) throw ConfigError("config: random.order must be >= 1");
        if (cfg.model.kind == SignalKind::LSpline && cfg.random.order < 2) {
            throw ConfigError("config: spline signals need random.order >= 2");
        }
        if (!(cfg.random.amp_min > 0.0) || !(cfg.random.amp_max >= cfg.random.amp_min)) {
            throw ConfigError("config: random amplitude range is invalid");
        }
        if (cfg.random.min_gap < 0.0) throw ConfigError("config: random.min_gap must be >= 0");
    }

    const bool has_abs = !cfg.thresholds.empty();
    const bool has_frac = !cfg.threshold_fractions.empty();
    if (has_abs == has_frac) {
        throw ConfigError("config: give exactly one of thresholds or threshold_fractions");
    }
    const std::vector<double>& c = has_abs ? cfg.thresholds : cfg.threshold_fractions;
    if (static_cast<int>(c.size()) != cfg.channels) {
        throw ConfigError("config: need one threshold per channel");
    }
    for (double v : c) {
        if (!(v > 0.0)) throw ConfigError("config: thresholds must be positive");
    }

    if (cfg.grid_density < 8) throw ConfigError("config: grid_density must be >= 8");
    if (cfg.grid_points < 2) throw ConfigError("config: grid_points must be >= 2");
    if (!(cfg.tolerance > 0.0)) throw ConfigError("config: tolerance must be positive");
    if (!std::isfinite(cfg.start)) throw ConfigError("config: start must be finite");

    if (!cfg.expect_error.empty()) {
        const auto& names = known_error_names();
        if (std::find(names.begin(), names.end(), cfg.expect_error) == names.end()) {
            throw ConfigError("config: unknown expect_error '" + cfg.expect_error + "'");
        }
    }
}

void parse_model(const json& j, ModelSpec& model) {
    if (!j.is_object()) throw ConfigError("config: model must be an object");
    for (const auto& [key, value] : j.items()) {
        if (key == "kind") {
            model.kind = parse_kind(value.get<std::string>());
        } else if (key == "pulse_degree") {
            model.pulse_degree = value.get<int>();
        } else if (key == "pulse_scale") {
            model.pulse_scale = value.get<double>();
        } else if (key == "spline_degree") {
            model.spline_degree = value.get<int>();
        } else {
            throw ConfigError("config: unknown model key '" + key + "'");
        }
    }
}

void parse_random(const json& j, RandomSignalSpec& spec) {
    if (!j.is_object()) throw ConfigError("config: random must be an object");
    for (const auto& [key, value] : j.items()) {
        if (key == "order") {
            spec.order = value.get<int>();
        } else if (key == "seed") {
            spec.seed = value.get<std::uint64_t>();
        } else if (key == "min_gap") {
            spec.min_gap = value.get<double>();
        } else if (key == "amp_min") {
            spec.amp_min = value.get<double>();
        } else if (key == "amp_max") {
            spec.amp_max = value.get<double>();
        } else if (key == "normal_amplitudes") {
            spec.normal_amplitudes = value.get<bool>();
        } else {
            throw ConfigError("config: unknown random key '" + key + "'");
        }
    }
}

std::vector<Eigen::VectorXd> parse_coefficients(const json& j) {
    if (!j.is_array()) throw ConfigError("config: coefficients must be an array");
    std::vector<Eigen::VectorXd> out;
    if (!j.empty() && j.front().is_array()) {
        for (const json& row : j) out.push_back(to_eigen(row.get<std::vector<double>>()));
    } else {
        out.push_back(to_eigen(j.get<std::vector<double>>()));
    }
    return out;
}

std::string pad_index(int i) {
    std::ostringstream out;
    out << std::setw(3) << std::setfill('0') << i;
    return out.str();
}

json report_to_json(const ReconstructionReport& report) {
    json j;
    j["channel"] = report.channel;
    j["L"] = report.event_count;
    j["tau"] = report.supports;
    json a = json::array();
    for (Eigen::Index k = 0; k < report.coefficients.size(); ++k) {
        a.push_back(report.coefficients[k]);
    }
    j["a"] = a;
    j["condG"] = report.condition_G;
    j["condV"] = report.condition_V;
    j["residual"] = report.residual;
    j["err"] = report.error ? json(*report.error) : json(nullptr);
    j["ill_conditioned"] = report.ill_conditioned;
    return j;
}

void write_report_file(const std::filesystem::path& path, const ScenarioResult& result,
                       int order) {
    json j;
    j["name"] = result.config.name;
    j["mode"] = mode_name(result.config.mode);
    j["kind"] = kind_name(result.config.model.kind);
    j["T"] = result.config.period;
    j["K"] = order;
    j["kernel_order"] = result.config.kernel_order;
    j["bounds"] = result.bounds;
    j["thresholds"] = result.thresholds;
    j["tolerance"] = result.config.tolerance;
    j["max_err"] = result.max_error;
    j["pass"] = result.pass;
    if (!result.note.empty()) j["note"] = result.note;
    json channels = json::array();
    for (const ReconstructionReport& r : result.reports) channels.push_back(report_to_json(r));
    j["channels"] = channels;

    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

void write_grid_file(const std::filesystem::path& path, const ScenarioConfig& cfg,
                     const std::vector<FriSignal>& signals,
                     const std::vector<FilteredSignal>& filtered,
                     const std::vector<ReconstructionReport>& reports,
                     const SmsKernel& kernel) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "channel,t,x,f,x_rec,f_rec\n";

    for (std::size_t s = 0; s < signals.size(); ++s) {
        const FriSignal* recovered = nullptr;
        FriSignal storage = signals[s];  // placeholder; replaced below when valid
        const FilteredSignal* recovered_filtered = nullptr;
        FilteredSignal filtered_storage = filtered[s];
        if (s < reports.size()) {
            try {
                Eigen::VectorXd a = reports[s].coefficients;
                if (cfg.model.kind == SignalKind::LSpline && a.size() > 0) {
                    a.array() -= a.mean();
                }
                storage = make_signal(cfg.model, a, reports[s].supports, cfg.period);
                recovered = &storage;
                filtered_storage = FilteredSignal(storage, kernel);
                recovered_filtered = &filtered_storage;
            } catch (const std::exception&) {
                recovered = nullptr;
                recovered_filtered = nullptr;
            }
        }

        for (int i = 0; i < cfg.grid_points; ++i) {
            const double t = cfg.start + cfg.period * i / cfg.grid_points;
            out << s << ',' << format_double(t) << ',';
            if (signals[s].has_time_eval()) out << format_double(signals[s].time_eval(t));
            out << ',' << format_double(filtered[s](t)) << ',';
            if (recovered != nullptr && recovered->has_time_eval()) {
                out << format_double(recovered->time_eval(t));
            }
            out << ',';
            if (recovered_filtered != nullptr) {
                out << format_double((*recovered_filtered)(t));
            }
            out << '\n';
        }
    }
}

}  // namespace

ModelDescriptor ModelSpec::descriptor() const {
    ModelDescriptor d;
    d.kind = kind;
    if (kind == SignalKind::PulseStream) {
        d.pulse = Pulse::scaled_bspline(pulse_degree, pulse_scale);
    } else if (kind == SignalKind::LSpline) {
        d.spline_degree = spline_degree;
    }
    return d;
}

ScenarioConfig parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");

    ScenarioConfig cfg;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "name") {
                cfg.name = value.get<std::string>();
            } else if (key == "mode") {
                cfg.mode = parse_mode(value.get<std::string>());
            } else if (key == "period") {
                cfg.period = value.get<double>();
            } else if (key == "model") {
                parse_model(value, cfg.model);
            } else if (key == "kernel_order") {
                cfg.kernel_order = value.get<int>();
            } else if (key == "channels") {
                cfg.channels = value.get<int>();
            } else if (key == "supports") {
                cfg.supports = value.get<std::vector<double>>();
            } else if (key == "coefficients") {
                cfg.coefficients = parse_coefficients(value);
            } else if (key == "random") {
                parse_random(value, cfg.random);
            } else if (key == "thresholds") {
                cfg.thresholds = value.get<std::vector<double>>();
            } else if (key == "threshold_fractions") {
                cfg.threshold_fractions = value.get<std::vector<double>>();
            } else if (key == "start") {
                cfg.start = value.get<double>();
            } else if (key == "grid_density") {
                cfg.grid_density = value.get<int>();
            } else if (key == "grid_points") {
                cfg.grid_points = value.get<int>();
            } else if (key == "tolerance") {
                cfg.tolerance = value.get<double>();
            } else if (key == "expect_error") {
                cfg.expect_error = value.get<std::string>();
            } else {
                throw ConfigError("config: unknown key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    validate_config(cfg);
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str());
}

std::vector<std::string> builtin_scenario_names() {
    return {"fig5a", "fig5b", "fig5c", "fig5d", "fig7a", "fig7b",
            "fig7c", "fig7d", "fig8a", "fig8b", "fig8c", "fig8d",
            "fig5a-starved"};
}

ScenarioConfig builtin_scenario(const std::string& name) {
    ScenarioConfig cfg;
    cfg.name = name;
    cfg.period = 1.0;
    cfg.kernel_order = 0;

    const auto simo_random = [&cfg](SignalKind kind, int spline_degree,
                                    std::uint64_t seed) {
        cfg.mode = ScenarioMode::Simo;
        cfg.channels = 2;
        cfg.model.kind = kind;
        cfg.model.spline_degree = spline_degree;
        cfg.random.order = 5;
        cfg.random.seed = seed;
        cfg.random.normal_amplitudes = true;
        cfg.threshold_fractions = {0.9, 0.85};
        cfg.tolerance = 1e-8;
    };
    const auto mimo_random = [&cfg](SignalKind kind, int spline_degree,
                                    std::uint64_t seed) {
        cfg.mode = ScenarioMode::Mimo;
        cfg.channels = 2;
        cfg.model.kind = kind;
        cfg.model.spline_degree = spline_degree;
        cfg.random.order = 5;
        cfg.random.seed = seed;
        cfg.random.normal_amplitudes = true;
        cfg.threshold_fractions = {0.9, 0.9};
        cfg.tolerance = 1e-8;
    };

    if (name == "fig5a" || name == "fig5a-starved") {
        cfg.mode = ScenarioMode::Single;
        cfg.model.kind = SignalKind::DiracStream;
        cfg.supports = {0.25, 0.375, 0.5, 0.625, 0.75};
        cfg.coefficients = {Eigen::VectorXd::Ones(5)};
        cfg.tolerance = 1e-9;
        if (name == "fig5a") {
            cfg.thresholds = {1.0 / 11.0};
        } else {
            cfg.threshold_fractions = {1.2};
            cfg.expect_error = "InsufficientEvents";
        }
    } else if (name == "fig5b") {
        cfg.mode = ScenarioMode::Single;
        cfg.model.kind = SignalKind::PulseStream;
        cfg.model.pulse_degree = 3;
        cfg.model.pulse_scale = 0.1;
        cfg.supports = {0.22, 0.35, 0.46, 0.62, 0.79};
        Eigen::VectorXd a(5);
        a << 0.49, -0.65, 0.47, -0.52, 0.22;
        cfg.coefficients = {a};
        cfg.thresholds = {0.015};
        cfg.tolerance = 1e-9;
    } else if (name == "fig5c" || name == "fig5d") {
        cfg.mode = ScenarioMode::Single;
        cfg.model.kind = SignalKind::LSpline;
        cfg.model.spline_degree = name == "fig5c" ? 0 : 1;
        cfg.random.order = 5;
        cfg.random.seed = name == "fig5c" ? 101 : 102;
        cfg.threshold_fractions = {0.9};
        cfg.tolerance = 1e-8;
    } else if (name == "fig7a") {
        simo_random(SignalKind::DiracStream, 0, 203);
    } else if (name == "fig7b") {
        simo_random(SignalKind::PulseStream, 0, 212);
        cfg.model.pulse_degree = 3;
        cfg.model.pulse_scale = 0.1;
    } else if (name == "fig7c") {
        simo_random(SignalKind::LSpline, 0, 203);
    } else if (name == "fig7d") {
        simo_random(SignalKind::LSpline, 1, 203);
    } else if (name == "fig8a") {
        mimo_random(SignalKind::DiracStream, 0, 301);
    } else if (name == "fig8b") {
        mimo_random(SignalKind::PulseStream, 0, 302);
        cfg.model.pulse_degree = 3;
        cfg.model.pulse_scale = 0.1;
    } else if (name == "fig8c") {
        mimo_random(SignalKind::LSpline, 0, 303);
    } else if (name == "fig8d") {
        mimo_random(SignalKind::LSpline, 1, 304);
    } else {
        throw ConfigError("unknown builtin scenario '" + name + "'");
    }
    validate_config(cfg);
    return cfg;
}

double parameter_error(const std::vector<double>& tau_ref, const Eigen::VectorXd& a_ref,
                       const std::vector<double>& tau_est, const Eigen::VectorXd& a_est,
                       double period) {
    const int order = static_cast<int>(tau_ref.size());
    if (order == 0 || static_cast<int>(tau_est.size()) != order ||
        a_ref.size() != order || a_est.size() != order) {
        return std::numeric_limits<double>::infinity();
    }
    double best = std::numeric_limits<double>::infinity();
    for (int shift = 0; shift < order; ++shift) {
        double worst = 0.0;
        for (int k = 0; k < order; ++k) {
            const int m = (k + shift) % order;
            double dt = std::abs(tau_ref[static_cast<std::size_t>(k)] -
                                 tau_est[static_cast<std::size_t>(m)]);
            dt = std::fmod(dt, period);
            dt = std::min(dt, period - dt);
            worst = std::max(worst, dt);
            worst = std::max(worst, std::abs(a_ref[k] - a_est[m]));
        }
        best = std::min(best, worst);
    }
    return best;
}

ScenarioResult run_scenario(const ScenarioConfig& config, const std::string& out_dir) {
    validate_config(config);

    ScenarioResult result;
    result.config = config;
    const double T = config.period;
    const int Q = config.channels;
    const int signal_count = config.mode == ScenarioMode::Mimo ? Q : 1;

    if (!config.supports.empty()) {
        result.true_supports = config.supports;
        result.true_coefficients = config.coefficients;
    } else {
        Rng rng(config.random.seed);
        const double min_gap =
            config.random.min_gap > 0.0 ? config.random.min_gap : T / 50.0;
        result.true_supports = draw_supports(rng, config.random.order, T, min_gap);
        const bool zero_mean = config.model.kind == SignalKind::LSpline;
        for (int i = 0; i < signal_count; ++i) {
            result.true_coefficients.push_back(
                draw_coefficients(rng, config.random, config.random.order, zero_mean));
        }
    }
    const int order = static_cast<int>(result.true_supports.size());

    std::vector<FriSignal> signals;
    for (int i = 0; i < signal_count; ++i) {
        signals.push_back(make_signal(config.model, result.true_coefficients[static_cast<std::size_t>(i)],
                                      result.true_supports, T));
    }
    const SmsKernel kernel(config.kernel_order, order, T);
    std::vector<FilteredSignal> filtered;
    for (const FriSignal& s : signals) filtered.emplace_back(s, kernel);

    result.bounds.resize(static_cast<std::size_t>(Q));
    if (config.mode == ScenarioMode::Simo) {
        const double pooled =
            simo_threshold_bounds(filtered[0], Q, order, config.grid_density).upper;
        std::fill(result.bounds.begin(), result.bounds.end(), pooled);
    } else {
        for (int i = 0; i < Q; ++i) {
            const FilteredSignal& f = filtered[config.mode == ScenarioMode::Mimo
                                                   ? static_cast<std::size_t>(i)
                                                   : 0];
            result.bounds[static_cast<std::size_t>(i)] =
                critical_threshold(f, 2.0 * order, config.grid_density);
        }
    }

    result.thresholds.resize(static_cast<std::size_t>(Q));
    for (int i = 0; i < Q; ++i) {
        result.thresholds[static_cast<std::size_t>(i)] =
            !config.thresholds.empty()
                ? config.thresholds[static_cast<std::size_t>(i)]
                : config.threshold_fractions[static_cast<std::size_t>(i)] *
                      result.bounds[static_cast<std::size_t>(i)];
    }

    const auto run_body = [&]() {
        for (int i = 0; i < Q; ++i) {
            const double c = result.thresholds[static_cast<std::size_t>(i)];
            const double bound = result.bounds[static_cast<std::size_t>(i)];
            if (!(c > 0.0) || c >= bound) {
                throw InsufficientEvents(
                    "scenario '" + config.name + "': channel " + std::to_string(i) +
                    " threshold " + format_double(c) + " is at or above the recovery bound " +
                    format_double(bound) + "; too few events are guaranteed");
            }
        }

        for (int i = 0; i < Q; ++i) {
            EncoderConfig ec;
            ec.threshold = result.thresholds[static_cast<std::size_t>(i)];
            ec.start = config.start;
            ec.grid_density = config.grid_density;
            EventStream stream = encode(
                filtered[config.mode == ScenarioMode::Mimo ? static_cast<std::size_t>(i) : 0], ec);
            stream.channel = i;
            result.streams.push_back(std::move(stream));
        }

        const ModelDescriptor descriptor = config.model.descriptor();
        if (config.mode == ScenarioMode::Single) {
            result.reports.push_back(reconstruct(result.streams[0], descriptor, order));
        } else if (config.mode == ScenarioMode::Simo) {
            result.reports.push_back(simo_reconstruct(result.streams, descriptor, order));
        } else {
            const std::vector<ModelDescriptor> descriptors(static_cast<std::size_t>(Q),
                                                           descriptor);
            MimoResult mimo = mimo_reconstruct(result.streams, descriptors, order);
            result.reports = std::move(mimo.channels);
        }

        result.max_error = 0.0;
        for (std::size_t r = 0; r < result.reports.size(); ++r) {
            const Eigen::VectorXd& truth =
                result.true_coefficients[config.mode == ScenarioMode::Mimo ? r : 0];
            const double err = parameter_error(result.true_supports, truth,
                                               result.reports[r].supports,
                                               result.reports[r].coefficients, T);
            result.reports[r].error = err;
            result.max_error = std::max(result.max_error, err);
        }
        result.pass = result.max_error <= config.tolerance;
    };

    if (config.expect_error.empty()) {
        run_body();
    } else {
        try {
            run_body();
            result.pass = false;
            result.note = "expected " + config.expect_error + " but the run completed";
        } catch (const Error& e) {
            if (!error_matches(e, config.expect_error)) throw;
            result.pass = true;
            result.note = std::string("expected failure: ") + e.what();
        }
    }

    if (!out_dir.empty()) {
        const std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);
        if (!result.streams.empty()) {
            EventRecord record;
            record.streams = result.streams;
            record.model_order = order;
            write_event_record(dir / "events.csv", dir / "metadata.json", record);
        }
        write_report_file(dir / "report.json", result, order);
        if (!result.reports.empty() || config.expect_error.empty()) {
            write_grid_file(dir / "grid.csv", config, signals, filtered, result.reports,
                            kernel);
        }
    }
    return result;
}

namespace {

VerifyRow scenario_row(const std::string& name, const std::string& out_dir) {
    VerifyRow row;
    row.scenario = name;
    try {
        const ScenarioConfig cfg = builtin_scenario(name);
        const std::string dir = out_dir.empty() ? "" : out_dir + "/" + name;
        const ScenarioResult result = run_scenario(cfg, dir);
        for (const EventStream& s : result.streams) row.events += s.size();
        for (const ReconstructionReport& r : result.reports) {
            row.condition = std::max(row.condition, r.condition_G);
            row.residual = std::max(row.residual, r.residual);
        }
        row.max_error = result.max_error;
        row.pass = result.pass;
        row.note = result.note;
        if (result.streams.size() > 1) {
            std::string counts = "events per channel:";
            for (const EventStream& s : result.streams) {
                counts += " " + std::to_string(s.size());
            }
            row.note = row.note.empty() ? counts : row.note + "; " + counts;
        }
    } catch (const std::exception& e) {
        row.pass = false;
        row.note = e.what();
    }
    return row;
}

VerifyRow property_alias_cancellation() {
    VerifyRow row;
    row.scenario = "check:alias-cancellation";
    row.pass = true;
    for (int r = 0; r <= 2 && row.pass; ++r) {
        const SmsKernel kernel(r, 5, 1.0);
        const AliasReport report = kernel.check_alias_cancellation(5);
        row.max_error = std::max(row.max_error, report.worst_error);
        if (!report.ok) {
            row.pass = false;
            row.note = "kernel order " + std::to_string(r) + " fails at l = " +
                       std::to_string(report.worst_l);
        }
    }
    return row;
}

VerifyRow property_event_count_bound() {
    VerifyRow row;
    row.scenario = "check:event-count-bound";
    try {
        const ScenarioConfig cfg = builtin_scenario("fig5a");
        const FriSignal signal =
            make_signal(cfg.model, cfg.coefficients[0], cfg.supports, cfg.period);
        const SmsKernel kernel(0, signal.order(), cfg.period);
        const FilteredSignal f(signal, kernel);
        row.pass = true;
        for (int min_events : {5, 11, 23}) {
            EncoderConfig ec;
            ec.threshold = 0.999 * max_threshold_for(f, min_events);
            const EventStream stream = encode(f, ec);
            row.events = stream.size();
            if (stream.size() < min_events) {
                row.pass = false;
                row.note = "threshold below span/" + std::to_string(min_events) +
                           " produced " + std::to_string(stream.size()) + " events";
                break;
            }
        }
    } catch (const std::exception& e) {
        row.pass = false;
        row.note = e.what();
    }
    return row;
}

VerifyRow property_trigger_matrix_rank() {
    VerifyRow row;
    row.scenario = "check:trigger-matrix-rank";
    try {
        Rng rng(424242);
        double worst = std::numeric_limits<double>::infinity();
        for (int order = 1; order <= 8; ++order) {
            std::vector<double> times = draw_supports(rng, 2 * order + 1, 1.0, 1e-4);
            const Eigen::MatrixXcd G = build_G(times, order, 1.0);
            const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G);
            const double rel = svd.singularValues().minCoeff() /
                               svd.singularValues().maxCoeff();
            worst = std::min(worst, rel);
        }
        row.max_error = worst;
        row.pass = worst > 1e-10;
        if (!row.pass) row.note = "distinct trigger times left a singular system";
    } catch (const std::exception& e) {
        row.pass = false;
        row.note = e.what();
    }
    return row;
}

VerifyRow property_t_transform() {
    VerifyRow row;
    row.scenario = "check:t-transform";
    try {
        const ScenarioConfig cfg = builtin_scenario("fig5a");
        const FriSignal signal =
            make_signal(cfg.model, cfg.coefficients[0], cfg.supports, cfg.period);
        const SmsKernel kernel(0, signal.order(), cfg.period);
        const FilteredSignal f(signal, kernel);
        EncoderConfig ec;
        ec.threshold = cfg.thresholds[0];
        const EventStream stream = encode(f, ec);
        row.events = stream.size();
        const Eigen::VectorXd values = stream.t_transform();
        double worst = 0.0;
        for (int m = 0; m < stream.size(); ++m) {
            worst = std::max(worst,
                             std::abs(values[m] - f(stream.events[static_cast<std::size_t>(m)].time)));
        }
        row.max_error = worst;
        row.pass = worst < 1e-9;
        if (!row.pass) row.note = "trigger values drift from direct evaluation";
    } catch (const std::exception& e) {
        row.pass = false;
        row.note = e.what();
    }
    return row;
}

VerifyRow property_event_io_roundtrip(const std::string& out_dir) {
    VerifyRow row;
    row.scenario = "check:event-io-roundtrip";
    try {
        const ScenarioConfig cfg = builtin_scenario("fig5a");
        const ScenarioResult result = run_scenario(cfg, "");
        EventRecord record;
        record.streams = result.streams;
        record.model_order = static_cast<int>(result.true_supports.size());

        const std::filesystem::path dir =
            out_dir.empty() ? std::filesystem::temp_directory_path() / "nfri-verify"
                            : std::filesystem::path(out_dir) / "check-event-io";
        std::filesystem::create_directories(dir);
        const auto read_file = [](const std::filesystem::path& p) {
            std::ifstream in(p, std::ios::binary);
            std::ostringstream s;
            s << in.rdbuf();
            return s.str();
        };

        write_event_record(dir / "a.csv", dir / "a.json", record);
        const EventRecord back = read_event_record(dir / "a.csv", dir / "a.json");
        write_event_record(dir / "b.csv", dir / "b.json", back);
        row.events = result.streams.empty() ? 0 : result.streams[0].size();
        row.pass = read_file(dir / "a.csv") == read_file(dir / "b.csv") &&
                   read_file(dir / "a.json") == read_file(dir / "b.json");
        if (!row.pass) row.note = "rewritten record differs byte for byte";
    } catch (const std::exception& e) {
        row.pass = false;
        row.note = e.what();
    }
    return row;
}

VerifyRow property_single_channel_pooling() {
    VerifyRow row;
    row.scenario = "check:single-channel-pooling";
    try {
        const ScenarioConfig cfg = builtin_scenario("fig5a");
        const ScenarioResult result = run_scenario(cfg, "");
        const ModelDescriptor descriptor = cfg.model.descriptor();
        const int order = static_cast<int>(result.true_supports.size());
        const ReconstructionReport direct =
            reconstruct(result.streams[0], descriptor, order);
        const ReconstructionReport pooled =
            simo_reconstruct(result.streams, descriptor, order);
        row.events = direct.event_count;
        bool same = direct.supports.size() == pooled.supports.size() &&
                    direct.coefficients.size() == pooled.coefficients.size();
        for (std::size_t k = 0; same && k < direct.supports.size(); ++k) {
            same = direct.supports[k] == pooled.supports[k];
        }
        for (Eigen::Index k = 0; same && k < direct.coefficients.size(); ++k) {
            same = direct.coefficients[k] == pooled.coefficients[k];
        }
        row.pass = same;
        if (!row.pass) row.note = "one-channel pooling is not bit-identical";
    } catch (const std::exception& e) {
        row.pass = false;
        row.note = e.what();
    }
    return row;
}

VerifyRow property_exact_spectrum_recovery() {
    VerifyRow row;
    row.scenario = "check:exact-spectrum-recovery";
    try {
        const ScenarioConfig cfg = builtin_scenario("fig5a");
        const FriSignal signal =
            make_signal(cfg.model, cfg.coefficients[0], cfg.supports, cfg.period);
        const int order = signal.order();
        const FourierVector spectrum = fourier_coefficients(signal, order);
        const AnnihilatingFilter filter = annihilating_filter(spectrum, order);
        const std::vector<double> tau = supports_from_roots(filter.roots, cfg.period);
        const CoefficientEstimate amp = recover_coefficients(spectrum, tau, true);
        row.max_error = parameter_error(cfg.supports, cfg.coefficients[0], tau,
                                        amp.coefficients, cfg.period);
        row.residual = filter.residual;
        row.condition = amp.condition;
        row.pass = row.max_error < 1e-12;
        if (!row.pass) row.note = "analytic spectrum does not recover the parameters";
    } catch (const std::exception& e) {
        row.pass = false;
        row.note = e.what();
    }
    return row;
}

}  // namespace

std::vector<VerifyRow> verify_suite(const std::string& out_dir) {
    std::vector<VerifyRow> rows;
    for (const std::string& name : builtin_scenario_names()) {
        rows.push_back(scenario_row(name, out_dir));
    }
    rows.push_back(property_alias_cancellation());
    rows.push_back(property_event_count_bound());
    rows.push_back(property_trigger_matrix_rank());
    rows.push_back(property_t_transform());
    rows.push_back(property_event_io_roundtrip(out_dir));
    rows.push_back(property_single_channel_pooling());
    rows.push_back(property_exact_spectrum_recovery());
    return rows;
}

bool all_passed(const std::vector<VerifyRow>& rows) {
    return std::all_of(rows.begin(), rows.end(),
                       [](const VerifyRow& r) { return r.pass; });
}

std::string format_verify_table(const std::vector<VerifyRow>& rows) {
    std::ostringstream out;
    out << std::left << std::setw(30) << "scenario" << std::right << std::setw(7)
        << "events" << std::setw(12) << "cond(G)" << std::setw(12) << "residual"
        << std::setw(12) << "max error" << "  status  note\n";
    for (const VerifyRow& row : rows) {
        std::ostringstream sci;
        sci << std::scientific << std::setprecision(2);
        out << std::left << std::setw(30) << row.scenario << std::right
            << std::setw(7) << row.events;
        sci << row.condition;
        out << std::setw(12) << sci.str();
        sci.str("");
        sci << row.residual;
        out << std::setw(12) << sci.str();
        sci.str("");
        sci << row.max_error;
        out << std::setw(12) << sci.str();
        out << "  " << (row.pass ? "pass  " : "FAIL  ") << row.note << '\n';
    }
    return out.str();
}

SweepSummary sweep(const SweepOptions& options) {
    if (options.trials < 1) throw ConfigError("sweep: trials must be >= 1");
    if (options.order < 1) throw ConfigError("sweep: order must be >= 1");

    SweepSummary summary;
    summary.trials = options.trials;
    for (int trial = 0; trial < options.trials; ++trial) {
        ScenarioConfig cfg;
        cfg.name = "sweep-" + pad_index(trial);
        cfg.mode = ScenarioMode::Single;
        cfg.model.kind = options.kind;
        cfg.model.spline_degree = options.spline_degree;
        cfg.random.order = options.order;
        cfg.random.seed = options.seed + static_cast<std::uint64_t>(trial);
        cfg.random.min_gap = options.min_gap;
        cfg.threshold_fractions = {options.threshold_fraction};
        cfg.grid_density = options.grid_density;
        cfg.tolerance = options.tolerance;

        const std::string dir = options.out_dir.empty()
                                    ? ""
                                    : options.out_dir + "/trial-" + pad_index(trial);
        try {
            const ScenarioResult result = run_scenario(cfg, dir);
            summary.worst_error = std::max(summary.worst_error, result.max_error);
            if (result.pass) {
                ++summary.passes;
            } else {
                bool ill = false;
                for (const ReconstructionReport& r : result.reports) {
                    ill = ill || r.ill_conditioned;
                }
                if (ill) ++summary.ill_conditioned_failures;
                summary.failures.push_back("trial " + std::to_string(trial) +
                                           ": max error " + format_double(result.max_error) +
                                           (ill ? " (ill-conditioned)" : ""));
            }
        } catch (const Error& e) {
            summary.failures.push_back("trial " + std::to_string(trial) + ": " + e.what());
        }
    }

    if (!options.out_dir.empty()) {
        std::filesystem::create_directories(options.out_dir);
        json j;
        j["trials"] = summary.trials;
        j["passes"] = summary.passes;
        j["ill_conditioned_failures"] = summary.ill_conditioned_failures;
        j["worst_error"] = summary.worst_error;
        j["failures"] = summary.failures;
        std::ofstream out(std::filesystem::path(options.out_dir) / "summary.json");
        if (!out) throw Error("cannot write sweep summary");
        out << j.dump(2) << '\n';
    }
    return summary;
}

std::string format_sweep_summary(const SweepSummary& summary) {
    std::ostringstream out;
    out << "passes: " << summary.passes << "/" << summary.trials
        << ", worst error: " << format_double(summary.worst_error) << '\n';
    for (const std::string& f : summary.failures) out << "  " << f << '\n';
    return out.str();
}

}  // namespace nfri
