// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 NeuroFRI Project Contributors

#pragma once

#include <vector>

#include <Eigen/Core>

#include "nfri/prony.hpp"
#include "nfri/recon.hpp"

namespace nfri {

/// Admissible per-channel thresholds for a bank of `channels` encoders
/// observing one signal: the open interval (0, Q (f_max - f_min) / (2K+1)).
/// Thresholds drawn from it, pairwise distinct, pool enough events for the
/// stacked system. Q = 1 reduces to the single-channel recovery bound.
struct ThresholdInterval {
    double lower = 0.0;
    double upper = 0.0;
};

ThresholdInterval simo_threshold_bounds(const Evaluable& signal, double period,
                                        int channels, int model_order,
                                        int grid_density = 10000);
ThresholdInterval simo_threshold_bounds(const FilteredSignal& signal, int channels,
                                        int model_order, int grid_density = 10000);

/// Distinct thresholds inside the pooled bound, tuned by bisection on the
/// event count so that every channel alone triggers fewer than 2K+1 events
/// while the pool still reaches 2K+1. Deterministic for a given signal.
std::vector<double> choose_subrate_thresholds(const FilteredSignal& signal,
                                              int channels, int model_order,
                                              const EncoderConfig& base);

/// Pools events from several encoders with pairwise distinct thresholds
/// observing one signal, fits a single spectrum to the stacked sample
/// systems, and runs the usual recovery tail. Trigger times closer than
/// 1e-12 * T across channels collapse to one sample (first channel wins);
/// at least 2K + 1 distinct samples must survive.
ReconstructionReport simo_reconstruct(const std::vector<EventStream>& channels,
                                      const ModelDescriptor& model, int model_order);

/// Joint annihilating filter for spectra sharing one support set: the
/// per-spectrum annihilation blocks are stacked vertically and the common
/// null vector extracted. Distinguishes a mismatched model order from
/// channels that are individually clean but disagree on supports.
AnnihilatingFilter mimo_block_annihilate(const std::vector<FourierVector>& spectra,
                                         int model_order);

struct MimoResult {
    std::vector<double> supports;
    std::vector<ReconstructionReport> channels;
    std::vector<double> block_residuals;  // per-channel annihilation residue
};

/// Recovers a support set shared by several signals plus per-channel
/// coefficients. Every channel must deliver at least 2K + 1 events on its
/// own; models are per channel and may differ in class.
MimoResult mimo_reconstruct(const std::vector<EventStream>& channels,
                            const std::vector<ModelDescriptor>& models,
                            int model_order);

}  // namespace nfri
