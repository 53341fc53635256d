// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 NeuroFRI Project Contributors

#include "nfri/prony.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "nfri/errors.hpp"

namespace nfri {
namespace {

constexpr double kRankGapMin = 1e6;

}  // namespace

Eigen::VectorXcd filter_roots(const Eigen::VectorXcd& taps) {
    const int K = static_cast<int>(taps.size()) - 1;
    if (K < 1) throw std::invalid_argument("filter_roots: need at least two taps");
    if (std::abs(taps[0]) < 1e-12 * taps.norm()) {
        throw DegenerateSignal("filter_roots: vanishing leading tap");
    }
    // Companion matrix of the monic polynomial z^K + m_1 z^{K-1} + ... + m_K
    // with m_i = h_i / h_0.
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(K, K);
    for (int i = 1; i < K; ++i) companion(i, i - 1) = Complex(1.0, 0.0);
    for (int i = 0; i < K; ++i) companion(i, K - 1) = -taps[K - i] / taps[0];

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(companion);
    if (eig.info() != Eigen::Success) {
        throw NumericalInconsistency("filter_roots: eigensolver failed");
    }
    return eig.eigenvalues();
}

Eigen::MatrixXcd toeplitzify(const FourierVector& spectrum) {
    const int M = spectrum.max_order();
    const int n = M + 1;
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m(i, j) = spectrum(i - j);
    }
    return m;
}

Eigen::MatrixXcd annihilation_matrix(const FourierVector& spectrum, int model_order) {
    const int M = spectrum.max_order();
    const int K = model_order;
    if (K < 1 || M < K) {
        throw std::invalid_argument(
            "annihilation_matrix: need spectrum order >= model order >= 1");
    }
    const int rows = 2 * M - K + 1;
    Eigen::MatrixXcd a(rows, K + 1);
    for (int r = 0; r < rows; ++r) {
        const int l = r - (M - K);  // highest spectrum index touched by this row
        for (int k = 0; k <= K; ++k) a(r, k) = spectrum(l - k);
    }
    return a;
}

AnnihilatingFilter annihilating_filter(const FourierVector& spectrum,
                                       int model_order) {
    const int K = model_order;
    const Eigen::MatrixXcd system = annihilation_matrix(spectrum, K);

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(system, Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    if (!(sigma[K - 1] > kRankGapMin * sigma[K])) {
        throw ModelOrderMismatch(
            "annihilating_filter: nullspace is not one-dimensional at order " +
            std::to_string(K) + " (singular-value gap " +
            std::to_string(sigma[K] > 0.0 ? sigma[K - 1] / sigma[K] : 0.0) + ")");
    }

    AnnihilatingFilter filter;
    filter.taps = svd.matrixV().col(K);
    const double scale = spectrum.values().norm();
    filter.residual = (system * filter.taps).norm() / (scale > 0.0 ? scale : 1.0);
    filter.roots = filter_roots(filter.taps);
    for (Eigen::Index k = 0; k < filter.roots.size(); ++k) {
        if (std::abs(std::abs(filter.roots[k]) - 1.0) > 1e-6) {
            throw DegenerateSignal(
                "annihilating_filter: root off the unit circle by more than 1e-6");
        }
    }
    return filter;
}

std::vector<double> supports_from_roots(const Eigen::VectorXcd& roots,
                                        double period) {
    if (roots.size() < 1) {
        throw std::invalid_argument("supports_from_roots: no roots");
    }
    if (!(period > 0.0)) {
        throw std::invalid_argument("supports_from_roots: period must be positive");
    }
    const double w0 = 2.0 * kPi / period;
    std::vector<double> tau(static_cast<std::size_t>(roots.size()));
    for (Eigen::Index k = 0; k < roots.size(); ++k) {
        double t = -std::arg(roots[k]) / w0;  // radial projection drops |root|
        t -= period * std::floor(t / period);
        if (t >= period) t -= period;  // guard against floor rounding at the seam
        tau[static_cast<std::size_t>(k)] = t;
    }
    std::sort(tau.begin(), tau.end());
    return tau;
}

CoefficientEstimate recover_coefficients(const FourierVector& spectrum,
                                         const std::vector<double>& supports,
                                         bool use_dc) {
    const int M = spectrum.max_order();
    const int K = static_cast<int>(supports.size());
    if (K < 1) throw std::invalid_argument("recover_coefficients: no supports");
    const int rows = use_dc ? 2 * M + 1 : 2 * M;
    if (rows < K) {
        throw std::invalid_argument("recover_coefficients: fewer equations than unknowns");
    }
    const double T = spectrum.period();
    for (int k = 0; k < K; ++k) {
        const double here = supports[static_cast<std::size_t>(k)];
        const double next = (k + 1 < K) ? supports[static_cast<std::size_t>(k + 1)]
                                        : supports[0] + T;
        if (next - here < 1e-9 * T) {
            throw DegenerateSignal("recover_coefficients: supports collide");
        }
    }

    const double w0 = spectrum.omega0();
    Eigen::MatrixXcd v(rows, K);
    Eigen::VectorXcd rhs(rows);
    int r = 0;
    for (int l = -M; l <= M; ++l) {
        if (l == 0 && !use_dc) continue;
        for (int k = 0; k < K; ++k) {
            v(r, k) = std::polar(1.0, -l * w0 * supports[static_cast<std::size_t>(k)]);
        }
        rhs[r] = T * spectrum(l);
        ++r;
    }

    const Eigen::VectorXcd a = v.colPivHouseholderQr().solve(rhs);
    const double drift = a.imag().cwiseAbs().maxCoeff();
    if (drift > 1e-8 * std::max(1.0, a.real().cwiseAbs().maxCoeff())) {
        throw NumericalInconsistency(
            "recover_coefficients: imaginary residue above 1e-8");
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
    const Eigen::VectorXd& sigma = svd.singularValues();

    CoefficientEstimate est;
    est.coefficients = a.real();
    est.condition = sigma[0] / sigma[sigma.size() - 1];
    const double scale = rhs.norm();
    est.residual = (v * a - rhs).norm() / (scale > 0.0 ? scale : 1.0);
    return est;
}

}  // namespace nfri
