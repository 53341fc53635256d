// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 NeuroFRI Project Contributors

#include "nfri/recon.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "nfri/errors.hpp"
#include "nfri/prony.hpp"

namespace nfri {
namespace {

constexpr double kIllConditioned = 1e12;

}  // namespace

Eigen::MatrixXcd build_G(const std::vector<double>& times, int model_order,
                         double period) {
    if (model_order < 1) throw std::invalid_argument("build_G: model order must be >= 1");
    if (!(period > 0.0)) throw std::invalid_argument("build_G: period must be positive");
    for (std::size_t m = 1; m < times.size(); ++m) {
        if (times[m] <= times[m - 1]) {
            throw DuplicateTimes("build_G: trigger times must strictly increase");
        }
    }
    const double w0 = 2.0 * kPi / period;
    const auto L = static_cast<Eigen::Index>(times.size());
    Eigen::MatrixXcd g(L, 2 * model_order + 1);
    for (Eigen::Index m = 0; m < L; ++m) {
        for (int l = -model_order; l <= model_order; ++l) {
            g(m, l + model_order) =
                std::polar(1.0, l * w0 * times[static_cast<std::size_t>(m)]);
        }
    }
    return g;
}

SpectrumEstimate spectrum_from_samples(const std::vector<double>& times,
                                       const Eigen::VectorXd& values,
                                       int model_order, double period) {
    if (static_cast<Eigen::Index>(times.size()) != values.size()) {
        throw std::invalid_argument("spectrum_from_samples: times/values size mismatch");
    }
    const int needed = 2 * model_order + 1;
    if (static_cast<int>(times.size()) < needed) {
        throw InsufficientEvents("spectrum_from_samples: " +
                                 std::to_string(times.size()) + " samples, need " +
                                 std::to_string(needed) +
                                 "; threshold likely above the recovery bound");
    }

    const Eigen::MatrixXcd g = build_G(times, model_order, period);
    const Eigen::VectorXcd rhs = values.cast<Complex>();
    const Eigen::VectorXcd xhat = g.colPivHouseholderQr().solve(rhs);

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(g);
    const Eigen::VectorXd& sigma = svd.singularValues();

    SpectrumEstimate est{FourierVector::zero(model_order, period), 0.0, 0.0};
    for (int l = -model_order; l <= model_order; ++l) {
        est.coefficients(l) = xhat[l + model_order];
    }
    est.condition = sigma[0] / sigma[sigma.size() - 1];
    const double scale = rhs.norm();
    est.residual = (g * xhat - rhs).norm() / (scale > 0.0 ? scale : 1.0);
    return est;
}

SpectrumEstimate fourier_from_events(const EventStream& events, int model_order) {
    const std::vector<double> times = events.times();
    for (std::size_t m = 1; m < times.size(); ++m) {
        if (times[m] <= times[m - 1]) {
            throw DuplicateTimes("fourier_from_events: trigger times must increase");
        }
    }
    return spectrum_from_samples(times, events.t_transform(), model_order,
                                 events.period);
}

FourierVector unweight_spectrum(const FourierVector& filtered,
                                const SpectralWeight& weight) {
    const int M = filtered.max_order();
    FourierVector s = FourierVector::zero(M, filtered.period());
    double scale = 1.0;
    if (weight.dc_defined) scale = std::max(std::abs(weight.value(0)), 1e-300);
    for (int l = -M; l <= M; ++l) {
        if (l == 0 && !weight.dc_defined) continue;
        const Complex w = weight.value(l);
        if (std::abs(w) < 1e-12 * scale) {
            throw KernelNullsSignal("unweight_spectrum: spectral weight vanishes at " +
                                    std::to_string(l));
        }
        s(l) = filtered(l) / w;
    }
    return s;
}

ReconstructionReport reconstruct_from_spectrum(const SpectrumEstimate& spectrum,
                                               const ModelDescriptor& model,
                                               int model_order) {
    const double period = spectrum.coefficients.period();
    const SpectralWeight weight = model.spectral_weight(period);
    const FourierVector s = unweight_spectrum(spectrum.coefficients, weight);

    const AnnihilatingFilter filter = annihilating_filter(s, model_order);

    ReconstructionReport report;
    report.supports = supports_from_roots(filter.roots, period);
    const CoefficientEstimate amp =
        recover_coefficients(s, report.supports, weight.dc_defined);
    report.coefficients = amp.coefficients;
    report.condition_G = spectrum.condition;
    report.condition_V = amp.condition;
    report.residual = filter.residual;
    report.ill_conditioned =
        report.condition_G > kIllConditioned || report.condition_V > kIllConditioned;
    return report;
}

ReconstructionReport reconstruct(const EventStream& events,
                                 const ModelDescriptor& model, int model_order) {
    const SpectrumEstimate spectrum = fourier_from_events(events, model_order);
    ReconstructionReport report = reconstruct_from_spectrum(spectrum, model, model_order);
    report.channel = events.channel;
    report.event_count = events.size();
    return report;
}

}  // namespace nfri
