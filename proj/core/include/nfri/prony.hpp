// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 NeuroFRI Project Contributors

#pragma once

#include <vector>

#include <Eigen/Core>

#include "nfri/types.hpp"

namespace nfri {

/// (M+1)x(M+1) Toeplitz embedding of a spectrum known on orders -M..M:
/// entry (i, j) is s_{i-j}.
Eigen::MatrixXcd toeplitzify(const FourierVector& spectrum);

/// Rectangular annihilation system for a K-term exponential sum observed on
/// orders -M..M: rows stack the convolution sums [s * h](l) = 0 for every l
/// that keeps all K+1 taps in range. Coincides with toeplitzify at M = K.
Eigen::MatrixXcd annihilation_matrix(const FourierVector& spectrum, int model_order);

/// Unit-norm annihilating filter plus its roots. The K roots sit on the
/// unit circle for exact data; each encodes one support location.
struct AnnihilatingFilter {
    Eigen::VectorXcd taps;    // length K+1
    Eigen::VectorXcd roots;   // length K
    double residual = 0.0;    // ||annihilation system * taps|| / ||spectrum||
};

/// Null vector of the annihilation system by singular value decomposition,
/// with roots from the companion-matrix eigenvalues of the taps. Demands a
/// clean one-dimensional nullspace: singular-value gap ratio above 1e6.
AnnihilatingFilter annihilating_filter(const FourierVector& spectrum,
                                       int model_order);

/// Roots of the filter polynomial h_0 z^K + ... + h_K via the companion
/// matrix of the leading-coefficient-normalized taps.
Eigen::VectorXcd filter_roots(const Eigen::VectorXcd& taps);

/// Roots mapped to support locations: tau = mod(-(T / 2 pi) * angle, T),
/// sorted ascending. Roots are projected radially onto the unit circle.
std::vector<double> supports_from_roots(const Eigen::VectorXcd& roots,
                                        double period);

struct CoefficientEstimate {
    Eigen::VectorXd coefficients;
    double condition = 0.0;  // of the Vandermonde system
    double residual = 0.0;   // relative fit residual
};

/// Real innovation coefficients from the unweighted spectrum and known
/// supports, by least squares on the Vandermonde system
/// s_l = (1/T) sum_k a_k e^{-j l w0 tau_k}. The l = 0 row is dropped when
/// the spectrum carries no DC information (`use_dc` false).
CoefficientEstimate recover_coefficients(const FourierVector& spectrum,
                                         const std::vector<double>& supports,
                                         bool use_dc = true);

}  // namespace nfri
