// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 NeuroFRI Project Contributors

#pragma once

#include <complex>
#include <functional>

#include "nfri/types.hpp"

namespace nfri {

/// Centered polynomial B-spline of degree r, evaluated by the Cox-de Boor
/// recursion on the uniform knots -(r+1)/2 .. (r+1)/2. Support is
/// [-(r+1)/2, (r+1)/2]. For r = 0 the value at |t| = 1/2 is 1/2 (symmetric
/// convention), which keeps the partition of unity exact at knots.
double bspline_eval(int degree, double t);

/// Fourier transform of the centered B-spline: (sin(w/2) / (w/2))^(r+1),
/// with the removable singularity at w = 0 evaluated as 1.
double bspline_fourier(int degree, double omega);

/// Result of the alias-cancellation check; `worst_l` is the harmonic with
/// the largest deviation from the ideal passband/stopband response.
struct AliasReport {
    bool ok = false;
    int worst_l = 0;
    double worst_error = 0.0;
};

/// Checks an arbitrary kernel spectrum against the alias-cancellation
/// conditions: unit gain on harmonics |l| <= K, zero on K < |l| <= 4K.
AliasReport check_alias_cancellation(const std::function<Complex(double)>& spectrum,
                                     int model_order, double period);

/// Sum-of-modulated-splines sampling kernel of order r for model order K
/// and period T:
///
///     g(t) = (1/T) * beta_r(t/T) * sum_{k=-K..K} exp(j k w0 t)
///
/// Compactly supported on [-T(r+1)/2, T(r+1)/2]; the spectrum equals 1 on
/// the harmonics |l| <= K and 0 on every other harmonic, so filtering an
/// FRI signal with it keeps exactly the 2K+1 coefficients Prony needs.
class SmsKernel {
public:
    SmsKernel(int order, int model_order, double period);

    int order() const { return order_; }
    int model_order() const { return model_order_; }
    double period() const { return period_; }
    double omega0() const { return 2.0 * kPi / period_; }

    /// Half-width of the compact time support, T(r+1)/2.
    double support_radius() const { return period_ * (order_ + 1) / 2.0; }

    /// Time-domain value. The modulation sum is evaluated as a complex sum
    /// and its imaginary residue is checked against 1e-12.
    double time_eval(double t) const;

    /// Closed-form spectrum: sum of B-spline spectra shifted to k*w0,
    /// k = -K..K. Real-valued (the kernel is real and even); returned as
    /// complex for interface uniformity.
    Complex fourier_eval(double omega) const;

    /// Verifies g(l*w0) == 1 for |l| <= K and == 0 for K < |l| <= 4K at
    /// tolerance 1e-9. The closed-form spectrum guarantees zeros beyond 4K.
    AliasReport check_alias_cancellation(int model_order) const;

private:
    int order_;
    int model_order_;
    double period_;
};

}  // namespace nfri
