// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 NeuroFRI Project Contributors

#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Core>

namespace nfri {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// The 2M+1 contiguous Fourier-series coefficients of a T-periodic signal,
/// indexed by harmonic l = -M..M. Storage is low-to-high: values()(0) holds
/// the l = -M entry.
class FourierVector {
public:
    FourierVector(Eigen::VectorXcd values, double period)
        : values_(std::move(values)), period_(period) {
        if (period_ <= 0.0) {
            throw std::invalid_argument("FourierVector: period must be positive");
        }
        if (values_.size() < 1 || values_.size() % 2 == 0) {
            throw std::invalid_argument("FourierVector: length must be odd (2M+1)");
        }
    }

    /// Zero vector for harmonics -M..M.
    static FourierVector zero(int max_order, double period) {
        return FourierVector(Eigen::VectorXcd::Zero(2 * max_order + 1), period);
    }

    int max_order() const { return static_cast<int>((values_.size() - 1) / 2); }
    double period() const { return period_; }
    double omega0() const { return 2.0 * kPi / period_; }

    /// Coefficient at harmonic l, l in [-M, M].
    Complex operator()(int l) const { return values_(index(l)); }
    Complex& operator()(int l) { return values_(index(l)); }

    const Eigen::VectorXcd& values() const { return values_; }

    /// Max deviation from x̂(-l) == conj(x̂(l)); zero for real signals.
    double conjugate_symmetry_defect() const {
        double worst = 0.0;
        for (int l = 1; l <= max_order(); ++l) {
            worst = std::max(worst, std::abs((*this)(-l) - std::conj((*this)(l))));
        }
        worst = std::max(worst, std::abs((*this)(0).imag()));
        return worst;
    }

private:
    Eigen::Index index(int l) const {
        const int m = max_order();
        if (l < -m || l > m) {
            throw std::out_of_range("FourierVector: harmonic index out of range");
        }
        return static_cast<Eigen::Index>(l + m);
    }

    Eigen::VectorXcd values_;
    double period_;
};

}  // namespace nfri
