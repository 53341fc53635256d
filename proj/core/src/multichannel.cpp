// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 NeuroFRI Project Contributors

#include "nfri/multichannel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "nfri/errors.hpp"

namespace nfri {
namespace {

double common_period(const std::vector<EventStream>& channels) {
    if (channels.empty()) {
        throw std::invalid_argument("multichannel: need at least one channel");
    }
    const double T = channels.front().period;
    for (const EventStream& ch : channels) {
        if (std::abs(ch.period - T) > 1e-12 * std::abs(T)) {
            throw std::invalid_argument("multichannel: channel periods differ");
        }
    }
    return T;
}

}  // namespace

ThresholdInterval simo_threshold_bounds(const Evaluable& signal, double period,
                                        int channels, int model_order,
                                        int grid_density) {
    if (channels < 1) {
        throw std::invalid_argument("simo_threshold_bounds: need at least one channel");
    }
    if (model_order < 1) {
        throw std::invalid_argument("simo_threshold_bounds: model order must be >= 1");
    }
    const SignalRange range = scan_range(signal, period, grid_density);
    if (range.span() < 1e-12) {
        throw DegenerateSignal("simo_threshold_bounds: signal range is numerically zero");
    }
    return ThresholdInterval{0.0, channels * range.span() / (2 * model_order + 1)};
}

ThresholdInterval simo_threshold_bounds(const FilteredSignal& signal, int channels,
                                        int model_order, int grid_density) {
    return simo_threshold_bounds([&signal](double t) { return signal(t); },
                                 signal.period(), channels, model_order,
                                 grid_density);
}

std::vector<double> choose_subrate_thresholds(const FilteredSignal& signal,
                                              int channels, int model_order,
                                              const EncoderConfig& base) {
    if (channels < 2) {
        throw std::invalid_argument("choose_subrate_thresholds: need at least two channels");
    }
    const ThresholdInterval window =
        simo_threshold_bounds(signal, channels, model_order, base.grid_density);
    const int count_hi = 2 * model_order;
    const int count_lo = model_order + 1;

    const auto count_at = [&](double threshold) {
        EncoderConfig cfg = base;
        cfg.threshold = threshold;
        return encode(signal, cfg).size();
    };

    // Event count is non-increasing in the threshold; bisect for a count in
    // [K+1, 2K] so one channel is short but any two together reach 2K+1.
    double lo = window.upper * 1e-3;
    double hi = window.upper * (1.0 - 1e-6);
    double pick = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const int count = count_at(mid);
        if (count > count_hi) {
            lo = mid;
        } else if (count < count_lo) {
            hi = mid;
        } else {
            pick = mid;
            break;
        }
    }
    if (pick == 0.0) {
        throw DegenerateSignal(
            "choose_subrate_thresholds: no threshold yields between " +
            std::to_string(count_lo) + " and " + std::to_string(count_hi) +
            " events per period");
    }

    std::vector<double> thresholds{pick};
    double next = pick;
    int guard = 0;
    while (static_cast<int>(thresholds.size()) < channels) {
        if (++guard > 500) {
            throw DegenerateSignal(
                "choose_subrate_thresholds: could not separate " +
                std::to_string(channels) + " thresholds inside the target band");
        }
        next *= 1.0 - 1e-3;
        const int count = count_at(next);
        if (count >= count_lo && count <= count_hi) thresholds.push_back(next);
    }
    return thresholds;
}

ReconstructionReport simo_reconstruct(const std::vector<EventStream>& channels,
                                      const ModelDescriptor& model, int model_order) {
    const double T = common_period(channels);
    for (std::size_t i = 0; i < channels.size(); ++i) {
        for (std::size_t j = i + 1; j < channels.size(); ++j) {
            const double ci = channels[i].threshold;
            const double cj = channels[j].threshold;
            if (std::abs(ci - cj) <= 1e-12 * std::max(std::abs(ci), std::abs(cj))) {
                throw DuplicateThresholds("simo_reconstruct: channels " +
                                          std::to_string(i) + " and " +
                                          std::to_string(j) + " share a threshold");
            }
        }
    }

    struct Sample {
        double time;
        double value;
    };
    std::vector<Sample> samples;
    for (const EventStream& ch : channels) {
        const Eigen::VectorXd values = ch.t_transform();
        for (int m = 0; m < ch.size(); ++m) {
            samples.push_back(
                Sample{ch.events[static_cast<std::size_t>(m)].time, values[m]});
        }
    }
    // Stable sort so that collisions resolve in channel order.
    std::stable_sort(samples.begin(), samples.end(),
                     [](const Sample& a, const Sample& b) { return a.time < b.time; });

    std::vector<double> times;
    Eigen::VectorXd values(static_cast<Eigen::Index>(samples.size()));
    Eigen::Index n = 0;
    for (const Sample& s : samples) {
        if (!times.empty() && s.time - times.back() < 1e-12 * T) continue;
        times.push_back(s.time);
        values[n++] = s.value;
    }

    const int needed = 2 * model_order + 1;
    if (static_cast<int>(times.size()) < needed) {
        throw InsufficientTotalEvents(
            "simo_reconstruct: " + std::to_string(times.size()) +
            " distinct trigger times pooled, need " + std::to_string(needed));
    }

    const SpectrumEstimate spectrum =
        spectrum_from_samples(times, values.head(n), model_order, T);
    ReconstructionReport report =
        reconstruct_from_spectrum(spectrum, model, model_order);
    report.event_count = static_cast<int>(times.size());
    return report;
}

AnnihilatingFilter mimo_block_annihilate(const std::vector<FourierVector>& spectra,
                                         int model_order) {
    if (spectra.empty()) {
        throw std::invalid_argument("mimo_block_annihilate: no spectra");
    }
    const int K = model_order;
    std::vector<Eigen::MatrixXcd> blocks;
    Eigen::Index rows = 0;
    for (const FourierVector& s : spectra) {
        blocks.push_back(annihilation_matrix(s, K));
        rows += blocks.back().rows();
    }
    Eigen::MatrixXcd stacked(rows, K + 1);
    Eigen::Index at = 0;
    for (const Eigen::MatrixXcd& b : blocks) {
        stacked.middleRows(at, b.rows()) = b;
        at += b.rows();
    }

    // Channels that are individually clean but disagree on supports leave no
    // joint null vector; flag that separately from a wrong model order.
    const auto channels_individually_clean = [&] {
        try {
            for (const FourierVector& s : spectra) annihilating_filter(s, K);
        } catch (const Error&) {
            return false;
        }
        return true;
    };

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked, Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    if (!(sigma[K - 1] > 1e6 * sigma[K])) {
        if (channels_individually_clean()) {
            throw NoCommonSupport(
                "mimo_block_annihilate: no joint rank gap although every channel "
                "is individually clean; channels do not share a support set");
        }
        throw ModelOrderMismatch(
            "mimo_block_annihilate: stacked nullspace is not one-dimensional at "
            "order " + std::to_string(K));
    }

    AnnihilatingFilter filter;
    filter.taps = svd.matrixV().col(K);

    double worst = 0.0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const double scale = spectra[i].values().norm();
        const double res =
            (blocks[i] * filter.taps).norm() / (scale > 0.0 ? scale : 1.0);
        worst = std::max(worst, res);
    }
    filter.residual = worst;
    if (worst > 1e-6 && channels_individually_clean()) {
        throw NoCommonSupport(
            "mimo_block_annihilate: joint filter leaves per-channel residual " +
            std::to_string(worst) + " although channels are individually clean");
    }

    filter.roots = filter_roots(filter.taps);
    return filter;
}

MimoResult mimo_reconstruct(const std::vector<EventStream>& channels,
                            const std::vector<ModelDescriptor>& models,
                            int model_order) {
    const double T = common_period(channels);
    if (models.size() != channels.size()) {
        throw std::invalid_argument("mimo_reconstruct: one model per channel required");
    }
    const int needed = 2 * model_order + 1;

    std::vector<SpectrumEstimate> fits;
    std::vector<FourierVector> unweighted;
    std::vector<SpectralWeight> weights;
    for (std::size_t i = 0; i < channels.size(); ++i) {
        if (channels[i].size() < needed) {
            throw InsufficientEvents("mimo_reconstruct: channel " + std::to_string(i) +
                                     " has " + std::to_string(channels[i].size()) +
                                     " events, needs " + std::to_string(needed));
        }
        fits.push_back(fourier_from_events(channels[i], model_order));
        weights.push_back(models[i].spectral_weight(T));
        unweighted.push_back(
            unweight_spectrum(fits.back().coefficients, weights.back()));
    }

    const AnnihilatingFilter filter = mimo_block_annihilate(unweighted, model_order);

    MimoResult result;
    result.supports = supports_from_roots(filter.roots, T);
    for (std::size_t i = 0; i < channels.size(); ++i) {
        const CoefficientEstimate amp =
            recover_coefficients(unweighted[i], result.supports, weights[i].dc_defined);
        ReconstructionReport report;
        report.channel = channels[i].channel;
        report.event_count = channels[i].size();
        report.supports = result.supports;
        report.coefficients = amp.coefficients;
        report.condition_G = fits[i].condition;
        report.condition_V = amp.condition;
        report.ill_conditioned = report.condition_G > 1e12 || report.condition_V > 1e12;

        const Eigen::MatrixXcd block = annihilation_matrix(unweighted[i], model_order);
        const double scale = unweighted[i].values().norm();
        const double res = (block * filter.taps).norm() / (scale > 0.0 ? scale : 1.0);
        report.residual = res;
        result.block_residuals.push_back(res);
        result.channels.push_back(std::move(report));
    }
    return result;
}

}  // namespace nfri
