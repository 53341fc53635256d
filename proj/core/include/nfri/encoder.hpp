// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 NeuroFRI Project Contributors

#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "nfri/signal.hpp"
#include "nfri/types.hpp"

namespace nfri {

/// One threshold-crossing event: the trigger time and the crossing
/// direction (+1 when the input rose by the threshold, -1 when it fell).
struct Event {
    double time = 0.0;
    int polarity = 0;
};

struct EncoderConfig {
    double threshold = 0.0;      // contrast C, > 0
    double start = 0.0;          // recording origin t0
    int grid_density = 100000;   // scan cells per period
};

/// Events emitted over one period [t0, t0 + T), together with the side
/// information needed to invert the encoding: the threshold, the origin,
/// and the signal value at the origin.
struct EventStream {
    std::vector<Event> events;
    int channel = 0;
    double threshold = 0.0;
    double start = 0.0;
    double start_value = 0.0;
    double period = 0.0;

    int size() const { return static_cast<int>(events.size()); }
    std::vector<double> times() const;

    /// Signal values at the trigger times, recovered from polarities alone:
    /// f(t_m) = f(t0) + C * (p_1 + ... + p_m).
    Eigen::VectorXd t_transform() const;

    /// Largest gap between consecutive trigger times, with t0 standing in
    /// as the predecessor of the first event. Needs at least two events.
    double sampling_density() const;
};

using Evaluable = std::function<double(double)>;

/// Simulates the threshold-crossing encoder over one period: starting from
/// f(t0), an event fires whenever |f(t) - f(t_prev)| first reaches C, with
/// exact touches counted. Trigger times are bracketed on a uniform scan grid
/// and polished by bisection; crossings closer together than one grid cell
/// can be missed if the density is too low. The interval is half-open, so a
/// crossing at exactly t0 + T is dropped.
EventStream encode(const Evaluable& signal, double period,
                   const EncoderConfig& config);
EventStream encode(const FilteredSignal& signal, const EncoderConfig& config);

struct SignalRange {
    double min = 0.0;
    double max = 0.0;
    double span() const { return max - min; }
};

/// Extrema over one period: grid scan plus golden-section polish around
/// every grid-local extremum.
SignalRange scan_range(const Evaluable& signal, double period, int grid_density);
SignalRange scan_range(const FilteredSignal& signal, int grid_density = 100000);

/// Largest threshold that still guarantees at least `min_events` events over
/// one period: (f_max - f_min) / min_events, extrema found by scan_range.
double max_threshold_for(const Evaluable& signal, double period, int min_events,
                         int grid_density = 10000);
double max_threshold_for(const FilteredSignal& signal, int min_events,
                         int grid_density = 10000);

/// Critical contrast threshold (f_max - f_min) / (rho + 1) for a signal with
/// rho innovations per period; at rho = 2K this is the perfect-recovery bound.
double critical_threshold(const Evaluable& signal, double period,
                          double innovations_per_period, int grid_density = 10000);
double critical_threshold(const FilteredSignal& signal,
                          double innovations_per_period, int grid_density = 10000);

}  // namespace nfri
