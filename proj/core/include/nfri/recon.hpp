// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 NeuroFRI Project Contributors

#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "nfri/encoder.hpp"
#include "nfri/signal.hpp"
#include "nfri/types.hpp"

namespace nfri {

/// Forward map from passband Fourier coefficients to sample values:
/// row m is (e^{j l w0 t_m}) for l = -K..K. Times must be distinct.
Eigen::MatrixXcd build_G(const std::vector<double>& times, int model_order,
                         double period);

struct SpectrumEstimate {
    FourierVector coefficients;
    double condition = 0.0;
    double residual = 0.0;
};

/// Least-squares fit of the 2K+1 passband coefficients to nonuniform
/// samples (t_m, f(t_m)). Needs at least 2K+1 samples; solved by a
/// column-pivoted orthogonal factorization, never normal equations.
SpectrumEstimate spectrum_from_samples(const std::vector<double>& times,
                                       const Eigen::VectorXd& values,
                                       int model_order, double period);

/// Same fit with the sample values recovered from the event polarities.
SpectrumEstimate fourier_from_events(const EventStream& events, int model_order);

/// Divides out the model's spectral weight to expose the plain exponential
/// sum; throws KernelNullsSignal when a required weight vanishes. The DC
/// term is zeroed when the model defines none.
FourierVector unweight_spectrum(const FourierVector& filtered,
                                const SpectralWeight& weight);

struct ReconstructionReport {
    int channel = 0;
    int event_count = 0;
    std::vector<double> supports;
    Eigen::VectorXd coefficients;
    double condition_G = 0.0;
    double condition_V = 0.0;
    double residual = 0.0;  // annihilation residual of the recovered filter
    bool ill_conditioned = false;  // either system conditioned worse than 1e12
    std::optional<double> error;   // max parameter error, when truth is known
};

/// Parameter recovery from an already-fitted passband spectrum:
/// unweighting, annihilating filter, support roots, coefficient regression.
ReconstructionReport reconstruct_from_spectrum(const SpectrumEstimate& spectrum,
                                               const ModelDescriptor& model,
                                               int model_order);

/// Full single-channel pipeline: polarities to sample values, spectrum fit,
/// annihilating filter, support roots, coefficient regression.
ReconstructionReport reconstruct(const EventStream& events,
                                 const ModelDescriptor& model, int model_order);

}  // namespace nfri
