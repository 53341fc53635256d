// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 NeuroFRI Project Contributors

#pragma once

#include <functional>

#include <Eigen/Core>

#include "nfri/kernel.hpp"
#include "nfri/types.hpp"

namespace nfri {

enum class PulseKind { Dirac, ScaledBSpline };

/// Prototype pulse with a closed-form Fourier transform.
class Pulse {
public:
    static Pulse dirac() { return Pulse(PulseKind::Dirac, 0, 1.0); }

    /// phi(t) = beta_r(t / scale); Fourier transform scale * beta_hat_r(scale * w).
    static Pulse scaled_bspline(int degree, double scale);

    PulseKind kind() const { return kind_; }
    int degree() const { return degree_; }
    double scale() const { return scale_; }

    /// phi_hat(w). Finite and nonzero at w = 0 for every supported kind.
    double fourier(double omega) const;

    /// A Dirac impulse has no pointwise time value.
    bool has_time_eval() const { return kind_ != PulseKind::Dirac; }
    double time_eval(double t) const;

    /// Half-width of the compact support (0 for Dirac).
    double support_radius() const;

private:
    Pulse(PulseKind kind, int degree, double scale)
        : kind_(kind), degree_(degree), scale_(scale) {}

    PulseKind kind_;
    int degree_;
    double scale_;
};

enum class SignalKind { DiracStream, PulseStream, LSpline };

/// Spectral weight w(l) relating the signal's Fourier coefficients to the
/// underlying exponential sum: x̂_l = w(l) * (1/T) * sum_k a_k e^{-j l w0 tau_k}.
/// When `dc_defined` is false (L-splines) the l = 0 line carries no support
/// information and is dropped from every recovery system.
struct SpectralWeight {
    std::function<Complex(int)> value;
    bool dc_defined = true;
};

/// Model-side description of a signal class, sufficient to pick the
/// spectral weight during reconstruction (where only events are available).
struct ModelDescriptor {
    SignalKind kind = SignalKind::DiracStream;
    Pulse pulse = Pulse::dirac();
    int spline_degree = 0;

    SpectralWeight spectral_weight(double period) const;
};

/// A T-periodized FRI signal: a stream of K Dirac impulses, K weighted
/// copies of a pulse, or a nonuniform L-spline of degree n whose (n+1)-th
/// derivative is a Dirac stream. L-splines are represented with zero mean
/// (the DC term is not determined by the innovation parameters).
class FriSignal {
public:
    static FriSignal dirac_stream(Eigen::VectorXd coefficients,
                                  Eigen::VectorXd supports, double period);
    static FriSignal pulse_stream(const Pulse& pulse, Eigen::VectorXd coefficients,
                                  Eigen::VectorXd supports, double period);
    static FriSignal lspline(int degree, Eigen::VectorXd coefficients,
                             Eigen::VectorXd supports, double period);

    SignalKind kind() const { return kind_; }
    const Pulse& pulse() const { return pulse_; }
    int spline_degree() const { return spline_degree_; }
    const Eigen::VectorXd& coefficients() const { return a_; }
    const Eigen::VectorXd& supports() const { return tau_; }
    double period() const { return T_; }
    int order() const { return static_cast<int>(a_.size()); }  // K
    double rate_of_innovation() const { return 2.0 * order() / T_; }
    double omega0() const { return 2.0 * kPi / T_; }

    ModelDescriptor model() const;

    /// Pointwise periodized value; unavailable for Dirac streams.
    bool has_time_eval() const { return kind_ != SignalKind::DiracStream; }
    double time_eval(double t) const;

private:
    FriSignal(SignalKind kind, const Pulse& pulse, int spline_degree,
              Eigen::VectorXd a, Eigen::VectorXd tau, double T);

    SignalKind kind_;
    Pulse pulse_;
    int spline_degree_;
    Eigen::VectorXd a_;
    Eigen::VectorXd tau_;
    double T_;
};

/// Exact Fourier-series coefficients x̂_l of the periodized signal for
/// l = -M..M. For L-splines the l = 0 entry is the signal mean, computed
/// by quadrature (zero for the canonical representation).
FourierVector fourier_coefficients(const FriSignal& signal, int max_order);

/// The kernel-filtered signal f = x * g as a finite trigonometric
/// polynomial, precompiled for fast repeated evaluation. Construction
/// verifies the alias-cancellation conditions for the signal's K.
class FilteredSignal {
public:
    FilteredSignal(const FriSignal& signal, const SmsKernel& kernel);

    /// Trigonometric polynomial with the given coefficients and unit
    /// kernel weights (g_l = 1 on the passband).
    static FilteredSignal from_coefficients(FourierVector coefficients);

    /// Real value of f(t); the imaginary residue of the complex sum is
    /// checked against 1e-9 rather than silently dropped.
    double operator()(double t) const;

    double period() const { return coefficients_.period(); }
    const FourierVector& coefficients() const { return coefficients_; }

private:
    explicit FilteredSignal(FourierVector coefficients)
        : coefficients_(std::move(coefficients)) {}

    FourierVector coefficients_;
};

/// One-shot convenience wrapper over FilteredSignal.
double eval_filtered(const FriSignal& signal, const SmsKernel& kernel, double t);

}  // namespace nfri
