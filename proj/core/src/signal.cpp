// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 NeuroFRI Project Contributors

#include "nfri/signal.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nfri/errors.hpp"

namespace nfri {
namespace {

// Bernoulli polynomials B_m in ascending powers, built once from
// B_m' = m B_{m-1} with zero mean over [0, 1].
const std::vector<double>& bernoulli_coeffs(int m) {
    static const std::vector<std::vector<double>> table = [] {
        std::vector<std::vector<double>> t;
        t.push_back({1.0});
        for (int deg = 1; deg <= 12; ++deg) {
            const auto& prev = t.back();
            std::vector<double> cur(deg + 1, 0.0);
            for (int i = 0; i < deg; ++i) cur[i + 1] = deg * prev[i] / (i + 1);
            double integral = 0.0;
            for (int i = 1; i <= deg; ++i) integral += cur[i] / (i + 1);
            cur[0] = -integral;
            t.push_back(std::move(cur));
        }
        return t;
    }();
    return table.at(m);
}

double bernoulli_poly(int m, double x) {
    const auto& c = bernoulli_coeffs(m);
    double v = 0.0;
    for (int i = m; i >= 0; --i) v = v * x + c[i];
    return v;
}

double factorial(int m) {
    double v = 1.0;
    for (int i = 2; i <= m; ++i) v *= i;
    return v;
}

// Zero-mean periodic kernel with D^m green_m = periodized Dirac minus 1/T;
// its Fourier coefficients are (j l w0)^{-m} / T for l != 0 and 0 at l = 0.
double periodic_green(int m, double t, double period) {
    double u = t / period;
    u -= std::floor(u);
    return -std::pow(period, m - 1) * bernoulli_poly(m, u) / factorial(m);
}

constexpr int kGaussOrder = 5;
constexpr double kGaussNode[kGaussOrder] = {
    -0.9061798459386640, -0.5384693101056831, 0.0,
    0.5384693101056831, 0.9061798459386640};
constexpr double kGaussWeight[kGaussOrder] = {
    0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
    0.4786286704993665, 0.2369268850561891};

// Exact for polynomials up to degree 9, which covers splines of degree <= 8.
double mean_by_segment_quadrature(const FriSignal& signal) {
    const Eigen::VectorXd& tau = signal.supports();
    const double T = signal.period();
    const int K = signal.order();
    double integral = 0.0;
    for (int k = 0; k < K; ++k) {
        const double lo = tau[k];
        const double hi = (k + 1 < K) ? tau[k + 1] : tau[0] + T;
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        for (int q = 0; q < kGaussOrder; ++q) {
            integral += half * kGaussWeight[q] *
                        signal.time_eval(mid + half * kGaussNode[q]);
        }
    }
    return integral / T;
}

void check_parameters(const Eigen::VectorXd& a, const Eigen::VectorXd& tau,
                      double T) {
    if (T <= 0.0) throw std::invalid_argument("FriSignal: period must be positive");
    if (a.size() == 0 || a.size() != tau.size()) {
        throw std::invalid_argument(
            "FriSignal: coefficients and supports must have equal nonzero length");
    }
    if (tau[0] < 0.0 || tau[tau.size() - 1] >= T) {
        throw std::invalid_argument("FriSignal: supports must lie in [0, T)");
    }
    for (Eigen::Index k = 1; k < tau.size(); ++k) {
        if (tau[k] <= tau[k - 1]) {
            throw std::invalid_argument("FriSignal: supports must be strictly increasing");
        }
    }
}

}  // namespace

Pulse Pulse::scaled_bspline(int degree, double scale) {
    if (degree < 0 || degree > 8) {
        throw std::invalid_argument("Pulse: B-spline degree must be in [0, 8]");
    }
    if (!(scale > 0.0)) {
        throw std::invalid_argument("Pulse: scale must be positive");
    }
    return Pulse(PulseKind::ScaledBSpline, degree, scale);
}

double Pulse::fourier(double omega) const {
    if (kind_ == PulseKind::Dirac) return 1.0;
    return scale_ * bspline_fourier(degree_, scale_ * omega);
}

double Pulse::time_eval(double t) const {
    if (kind_ == PulseKind::Dirac) {
        throw std::invalid_argument("Pulse: Dirac impulse has no pointwise value");
    }
    return bspline_eval(degree_, t / scale_);
}

double Pulse::support_radius() const {
    if (kind_ == PulseKind::Dirac) return 0.0;
    return scale_ * (degree_ + 1) * 0.5;
}

SpectralWeight ModelDescriptor::spectral_weight(double period) const {
    const double w0 = 2.0 * kPi / period;
    switch (kind) {
        case SignalKind::DiracStream:
            return {[](int) { return Complex(1.0, 0.0); }, true};
        case SignalKind::PulseStream:
            return {[p = pulse, w0](int l) { return Complex(p.fourier(l * w0), 0.0); },
                    true};
        case SignalKind::LSpline: {
            const int m = spline_degree + 1;
            return {[m, w0](int l) {
                        Complex p(1.0, 0.0);
                        for (int i = 0; i < m; ++i) p *= Complex(0.0, l * w0);
                        return Complex(1.0, 0.0) / p;
                    },
                    false};
        }
    }
    throw std::logic_error("ModelDescriptor: unknown signal kind");
}

FriSignal::FriSignal(SignalKind kind, const Pulse& pulse, int spline_degree,
                     Eigen::VectorXd a, Eigen::VectorXd tau, double T)
    : kind_(kind),
      pulse_(pulse),
      spline_degree_(spline_degree),
      a_(std::move(a)),
      tau_(std::move(tau)),
      T_(T) {
    check_parameters(a_, tau_, T_);
}

FriSignal FriSignal::dirac_stream(Eigen::VectorXd coefficients,
                                  Eigen::VectorXd supports, double period) {
    return FriSignal(SignalKind::DiracStream, Pulse::dirac(), 0,
                     std::move(coefficients), std::move(supports), period);
}

FriSignal FriSignal::pulse_stream(const Pulse& pulse, Eigen::VectorXd coefficients,
                                  Eigen::VectorXd supports, double period) {
    if (pulse.kind() == PulseKind::Dirac) {
        return dirac_stream(std::move(coefficients), std::move(supports), period);
    }
    return FriSignal(SignalKind::PulseStream, pulse, 0, std::move(coefficients),
                     std::move(supports), period);
}

FriSignal FriSignal::lspline(int degree, Eigen::VectorXd coefficients,
                             Eigen::VectorXd supports, double period) {
    if (degree < 0 || degree > 8) {
        throw std::invalid_argument("FriSignal: spline degree must be in [0, 8]");
    }
    const double drift = std::abs(coefficients.sum());
    if (drift > 1e-9 * (1.0 + coefficients.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument(
            "FriSignal: L-spline innovation coefficients must sum to zero");
    }
    return FriSignal(SignalKind::LSpline, Pulse::dirac(), degree,
                     std::move(coefficients), std::move(supports), period);
}

ModelDescriptor FriSignal::model() const {
    return ModelDescriptor{kind_, pulse_, spline_degree_};
}

double FriSignal::time_eval(double t) const {
    switch (kind_) {
        case SignalKind::DiracStream:
            throw std::invalid_argument("FriSignal: Dirac stream has no pointwise value");
        case SignalKind::PulseStream: {
            const double R = pulse_.support_radius();
            double acc = 0.0;
            for (int k = 0; k < order(); ++k) {
                const double shifted = t - tau_[k];
                const auto lo = static_cast<long long>(std::ceil((shifted - R) / T_));
                const auto hi = static_cast<long long>(std::floor((shifted + R) / T_));
                for (long long n = lo; n <= hi; ++n) {
                    acc += a_[k] * pulse_.time_eval(shifted - n * T_);
                }
            }
            return acc;
        }
        case SignalKind::LSpline: {
            double acc = 0.0;
            for (int k = 0; k < order(); ++k) {
                acc += a_[k] * periodic_green(spline_degree_ + 1, t - tau_[k], T_);
            }
            return acc;
        }
    }
    throw std::logic_error("FriSignal: unknown signal kind");
}

FourierVector fourier_coefficients(const FriSignal& signal, int max_order) {
    if (max_order < 1) {
        throw std::invalid_argument("fourier_coefficients: max_order must be >= 1");
    }
    const double T = signal.period();
    const double w0 = signal.omega0();
    const SpectralWeight weight = signal.model().spectral_weight(T);
    const double null_floor =
        (signal.kind() == SignalKind::PulseStream)
            ? 1e-12 * std::abs(signal.pulse().fourier(0.0))
            : 0.0;

    FourierVector out = FourierVector::zero(max_order, T);
    for (int l = 0; l <= max_order; ++l) {
        if (l == 0 && !weight.dc_defined) continue;
        Complex base(0.0, 0.0);
        for (int k = 0; k < signal.order(); ++k) {
            base += signal.coefficients()[k] * std::polar(1.0, -l * w0 * signal.supports()[k]);
        }
        base /= T;
        const Complex w = weight.value(l);
        if (signal.kind() == SignalKind::PulseStream && std::abs(w) <= null_floor) {
            throw KernelNullsSignal(
                "fourier_coefficients: pulse spectrum vanishes at harmonic " +
                std::to_string(l));
        }
        out(l) = w * base;
        if (l > 0) out(-l) = std::conj(out(l));
    }
    if (!weight.dc_defined) {
        out(0) = Complex(mean_by_segment_quadrature(signal), 0.0);
    }
    return out;
}

FilteredSignal::FilteredSignal(const FriSignal& signal, const SmsKernel& kernel)
    : coefficients_(FourierVector::zero(signal.order(), signal.period())) {
    if (std::abs(kernel.period() - signal.period()) >
        1e-12 * std::abs(signal.period())) {
        throw std::invalid_argument("FilteredSignal: kernel and signal periods differ");
    }
    const AliasReport alias = kernel.check_alias_cancellation(signal.order());
    if (!alias.ok) {
        throw AliasingError("FilteredSignal: alias cancellation fails at harmonic " +
                            std::to_string(alias.worst_l) + " with error " +
                            std::to_string(alias.worst_error));
    }
    const FourierVector xhat = fourier_coefficients(signal, signal.order());
    const double w0 = signal.omega0();
    for (int l = -signal.order(); l <= signal.order(); ++l) {
        coefficients_(l) = xhat(l) * kernel.fourier_eval(l * w0);
    }
}

FilteredSignal FilteredSignal::from_coefficients(FourierVector coefficients) {
    return FilteredSignal(std::move(coefficients));
}

double FilteredSignal::operator()(double t) const {
    const int M = coefficients_.max_order();
    const double w0t = coefficients_.omega0() * t;
    const Complex step = std::polar(1.0, w0t);
    Complex phase = std::polar(1.0, -M * w0t);
    Complex acc(0.0, 0.0);
    for (int l = -M; l <= M; ++l) {
        acc += coefficients_(l) * phase;
        phase *= step;
    }
    const double scale = coefficients_.values().cwiseAbs().sum();
    if (std::abs(acc.imag()) > 1e-9 * (1.0 + scale)) {
        throw NumericalInconsistency(
            "FilteredSignal: imaginary residue exceeds tolerance");
    }
    return acc.real();
}

double eval_filtered(const FriSignal& signal, const SmsKernel& kernel, double t) {
    return FilteredSignal(signal, kernel)(t);
}

}  // namespace nfri
