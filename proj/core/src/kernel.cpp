// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 NeuroFRI Project Contributors

#include "nfri/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nfri/errors.hpp"

namespace nfri {

namespace {

// sin(u)/u with a series fallback near zero.
double sinc(double u) {
    if (std::abs(u) < 1e-6) {
        const double u2 = u * u;
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
    }
    return std::sin(u) / u;
}

}  // namespace

double bspline_eval(int degree, double t) {
    if (degree < 0 || degree > 8) {
        throw std::invalid_argument("bspline_eval: degree must be in [0, 8]");
    }
    const double half = (degree + 1) / 2.0;
    if (std::abs(t) > half) {
        return 0.0;
    }
    if (degree == 0) {
        return std::abs(t) == half ? 0.5 : 1.0;
    }

    // Cox-de Boor on knots k_i = i - (r+1)/2, i = 0..r+1.
    const int r = degree;
    auto knot = [&](int i) { return static_cast<double>(i) - half; };

    std::vector<double> n(r + 1);
    for (int i = 0; i <= r; ++i) {
        n[i] = (t >= knot(i) && t < knot(i + 1)) ? 1.0 : 0.0;
    }
    if (t == half) {
        n[r] = 1.0;  // close the last interval so beta(half-) limits hold
    }
    for (int p = 1; p <= r; ++p) {
        for (int i = 0; i + p <= r; ++i) {
            const double left = (t - knot(i)) / p * n[i];
            const double right = (knot(i + p + 1) - t) / p * n[i + 1];
            n[i] = left + right;
        }
    }
    return n[0];
}

double bspline_fourier(int degree, double omega) {
    return std::pow(sinc(omega / 2.0), degree + 1);
}

SmsKernel::SmsKernel(int order, int model_order, double period)
    : order_(order), model_order_(model_order), period_(period) {
    if (order < 0 || order > 8) {
        throw std::invalid_argument("SmsKernel: order must be in [0, 8]");
    }
    if (model_order < 1) {
        throw std::invalid_argument("SmsKernel: model order must be positive");
    }
    if (period <= 0.0) {
        throw std::invalid_argument("SmsKernel: period must be positive");
    }
}

double SmsKernel::time_eval(double t) const {
    const double envelope = bspline_eval(order_, t / period_);
    if (envelope == 0.0) {
        return 0.0;
    }
    Complex modulation{0.0, 0.0};
    const double w0t = omega0() * t;
    for (int k = -model_order_; k <= model_order_; ++k) {
        modulation += std::polar(1.0, k * w0t);
    }
    if (std::abs(modulation.imag()) > 1e-12 * (2 * model_order_ + 1)) {
        throw NumericalInconsistency("SmsKernel::time_eval: modulation sum not real");
    }
    return envelope * modulation.real() / period_;
}

Complex SmsKernel::fourier_eval(double omega) const {
    // FT of beta_r(t/T) is T * beta_hat_r(w T); modulation shifts it to k*w0.
    double sum = 0.0;
    for (int k = -model_order_; k <= model_order_; ++k) {
        sum += bspline_fourier(order_, (omega - k * omega0()) * period_);
    }
    return Complex{sum, 0.0};
}

AliasReport check_alias_cancellation(const std::function<Complex(double)>& spectrum,
                                     int model_order, double period) {
    const double w0 = 2.0 * kPi / period;
    AliasReport report;
    for (int l = -4 * model_order; l <= 4 * model_order; ++l) {
        const double expected = (std::abs(l) <= model_order) ? 1.0 : 0.0;
        const double err = std::abs(spectrum(l * w0) - expected);
        if (err >= report.worst_error) {
            report.worst_error = err;
            report.worst_l = l;
        }
    }
    report.ok = report.worst_error < 1e-9;
    return report;
}

AliasReport SmsKernel::check_alias_cancellation(int model_order) const {
    return nfri::check_alias_cancellation(
        [this](double w) { return fourier_eval(w); }, model_order, period_);
}

}  // namespace nfri
