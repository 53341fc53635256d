// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 NeuroFRI Project Contributors

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "nfri/errors.hpp"
#include "nfri/prony.hpp"
#include "nfri/recon.hpp"
#include "nfri/signal.hpp"
#include "oracles.hpp"

using nfri::AnnihilatingFilter;
using nfri::Complex;
using nfri::FourierVector;
using nfri::kPi;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v[i++] = x;
    return v;
}

// Exponential-sum spectrum s_l = (1/T) sum_k a_k e^{-j l w0 tau_k}, l = -M..M.
FourierVector analytic_spectrum(const Eigen::VectorXd& a, const Eigen::VectorXd& tau,
                                double period, int max_order) {
    const double w0 = 2.0 * kPi / period;
    Eigen::VectorXcd values(2 * max_order + 1);
    for (int l = -max_order; l <= max_order; ++l) {
        Complex sum = 0.0;
        for (Eigen::Index k = 0; k < a.size(); ++k) {
            sum += a[k] * std::polar(1.0, -l * w0 * tau[k]);
        }
        values[l + max_order] = sum / period;
    }
    return FourierVector(std::move(values), period);
}

FourierVector reference_spectrum(int max_order = 5) {
    return analytic_spectrum(Eigen::VectorXd::Ones(5),
                             vec({0.25, 0.375, 0.5, 0.625, 0.75}), 1.0, max_order);
}

// Worst circular support mismatch between two sorted sets of equal size.
double support_error(const std::vector<double>& est, const std::vector<double>& truth,
                     double period) {
    REQUIRE(est.size() == truth.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < est.size(); ++k) {
        double d = std::abs(est[k] - truth[k]);
        d = std::min(d, period - d);
        worst = std::max(worst, d);
    }
    return worst;
}

std::vector<double> singular_values(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    std::vector<double> out(svd.singularValues().data(),
                            svd.singularValues().data() + svd.singularValues().size());
    return out;
}

}  // namespace

TEST_SUITE("prony") {

TEST_CASE("flat spectrum embeds to a rank-one matrix") {
    const FourierVector spectrum(Eigen::VectorXcd::Ones(7), 1.0);
    const Eigen::MatrixXcd m = nfri::toeplitzify(spectrum);
    REQUIRE(m.rows() == 4);
    REQUIRE(m.cols() == 4);
    for (Eigen::Index i = 0; i < 4; ++i) {
        for (Eigen::Index j = 0; j < 4; ++j) {
            CHECK(std::abs(m(i, j) - Complex(1.0, 0.0)) <= 1e-15);
        }
    }
    const auto sv = singular_values(m);
    CHECK(sv[1] / sv[0] < 1e-12);
}

TEST_CASE("toeplitz entries follow the index difference") {
    const FourierVector spectrum = reference_spectrum(3);
    const Eigen::MatrixXcd m = nfri::toeplitzify(spectrum);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            CHECK(std::abs(m(i, j) - spectrum(static_cast<int>(i - j))) == 0.0);
        }
    }
}

TEST_CASE("toeplitz rank equals the innovation count") {
    oracles::TestRng rng(41);
    for (int trial = 0; trial < 8; ++trial) {
        const int K = rng.uniform_int(2, 6);
        const int M = K + 2;
        const std::vector<double> tau = oracles::random_supports(rng, K, 1.0, 0.02);
        Eigen::VectorXd a(K);
        for (int k = 0; k < K; ++k) a[k] = rng.uniform(0.3, 1.0);
        const FourierVector spectrum = analytic_spectrum(
            a, Eigen::Map<const Eigen::VectorXd>(tau.data(), K), 1.0, M);
        const auto sv = singular_values(nfri::toeplitzify(spectrum));
        CHECK(sv[static_cast<std::size_t>(K)] / sv[0] < 1e-9);
        CHECK(sv[static_cast<std::size_t>(K - 1)] / sv[0] > 1e-9);
    }
}

TEST_CASE("reference spectrum has a one-dimensional nullspace") {
    const auto sv = singular_values(nfri::toeplitzify(reference_spectrum()));
    REQUIRE(sv.size() == 6);
    CHECK(sv[5] / sv[0] < 1e-12);
    CHECK(sv[4] / sv[0] > 1e-6);
}

TEST_CASE("annihilation matrix generalizes the square embedding") {
    const FourierVector spectrum = reference_spectrum(7);
    const Eigen::MatrixXcd rect = nfri::annihilation_matrix(spectrum, 5);
    CHECK(rect.rows() == 10);
    CHECK(rect.cols() == 6);
    const FourierVector square = reference_spectrum(5);
    const Eigen::MatrixXcd viaToeplitz = nfri::toeplitzify(square);
    const Eigen::MatrixXcd viaRect = nfri::annihilation_matrix(square, 5);
    CHECK((viaToeplitz - viaRect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("first-order filter closed form") {
    const double tau = 0.3;
    const double w0 = 2.0 * kPi;
    const FourierVector spectrum =
        analytic_spectrum(vec({1.0}), vec({tau}), 1.0, 2);
    const AnnihilatingFilter filter = nfri::annihilating_filter(spectrum, 1);
    REQUIRE(filter.taps.size() == 2);
    const Complex ratio = filter.taps[1] / filter.taps[0];
    CHECK(std::abs(ratio - (-std::polar(1.0, -w0 * tau))) < 1e-12);
    REQUIRE(filter.roots.size() == 1);
    CHECK(std::abs(filter.roots[0] - std::polar(1.0, -w0 * tau)) < 1e-12);
}

TEST_CASE("reference scenario roots encode the supports") {
    const AnnihilatingFilter filter =
        nfri::annihilating_filter(reference_spectrum(), 5);
    CHECK(filter.residual <= 1e-8);
    const std::vector<double> supports = nfri::supports_from_roots(filter.roots, 1.0);
    CHECK(support_error(supports, {0.25, 0.375, 0.5, 0.625, 0.75}, 1.0) < 1e-9);
}

TEST_CASE("random order-seven instance") {
    oracles::TestRng rng(43);
    const int K = 7;
    const std::vector<double> tau = oracles::random_supports(rng, K, 1.0, 0.02);
    Eigen::VectorXd a(K);
    for (int k = 0; k < K; ++k) a[k] = rng.uniform(0.2, 1.0);
    const FourierVector spectrum = analytic_spectrum(
        a, Eigen::Map<const Eigen::VectorXd>(tau.data(), K), 1.0, K);
    const AnnihilatingFilter filter = nfri::annihilating_filter(spectrum, K);
    const std::vector<double> supports = nfri::supports_from_roots(filter.roots, 1.0);
    CHECK(support_error(supports, tau, 1.0) < 1e-9);
}

TEST_CASE("filter annihilates the spectrum at every lag") {
    const int M = 8;
    const FourierVector spectrum = reference_spectrum(M);
    const AnnihilatingFilter filter = nfri::annihilating_filter(spectrum, 5);
    double scale = 0.0;
    for (int l = -M; l <= M; ++l) scale = std::max(scale, std::abs(spectrum(l)));
    for (int l = -M + 5; l <= M; ++l) {
        Complex conv = 0.0;
        for (int k = 0; k <= 5; ++k) conv += filter.taps[k] * spectrum(l - k);
        CHECK(std::abs(conv) <= 1e-8 * scale);
    }
}

TEST_CASE("wrong model order is flagged") {
    CHECK_THROWS_AS(nfri::annihilating_filter(reference_spectrum(5), 4),
                    nfri::ModelOrderMismatch);
    CHECK_THROWS_AS(nfri::annihilating_filter(reference_spectrum(6), 6),
                    nfri::ModelOrderMismatch);
}

TEST_CASE("off-circle geometry is rejected") {
    // s_l = z^l with |z| = 1.1 is annihilated by a filter whose root leaves
    // the unit circle.
    const int M = 3;
    Eigen::VectorXcd values(2 * M + 1);
    const Complex z = 1.1 * std::polar(1.0, -2.0 * kPi * 0.4);
    for (int l = -M; l <= M; ++l) values[l + M] = std::pow(z, l);
    const FourierVector spectrum(std::move(values), 1.0);
    CHECK_THROWS_AS(nfri::annihilating_filter(spectrum, 1), nfri::DegenerateSignal);
}

TEST_CASE("vanishing leading tap is rejected") {
    Eigen::VectorXcd taps(2);
    taps << Complex(0.0, 0.0), Complex(1.0, 0.0);
    CHECK_THROWS_AS(nfri::filter_roots(taps), nfri::DegenerateSignal);
}

TEST_CASE("supports from simple roots") {
    Eigen::VectorXcd one(1);
    one << Complex(1.0, 0.0);
    CHECK(nfri::supports_from_roots(one, 1.0)[0] == doctest::Approx(0.0));
    Eigen::VectorXcd half(1);
    half << std::polar(1.0, -kPi);
    CHECK(nfri::supports_from_roots(half, 1.0)[0] == doctest::Approx(0.5));
}

TEST_CASE("shuffled reference roots sort back to the support set") {
    Eigen::VectorXcd roots(5);
    const double order[] = {0.625, 0.25, 0.75, 0.5, 0.375};
    for (int k = 0; k < 5; ++k) roots[k] = 1.02 * std::polar(1.0, -2.0 * kPi * order[k]);
    const std::vector<double> supports = nfri::supports_from_roots(roots, 1.0);
    CHECK(std::is_sorted(supports.begin(), supports.end()));
    CHECK(support_error(supports, {0.25, 0.375, 0.5, 0.625, 0.75}, 1.0) < 1e-12);
}

TEST_CASE("single coefficient recovery is exact") {
    const FourierVector spectrum = analytic_spectrum(vec({0.8}), vec({0.3}), 1.0, 2);
    const auto estimate = nfri::recover_coefficients(spectrum, {0.3});
    CHECK(std::abs(estimate.coefficients[0] - 0.8) < 1e-12);
    CHECK(estimate.residual < 1e-12);
}

TEST_CASE("stated pulse coefficients are recovered") {
    const nfri::FriSignal pulses = nfri::FriSignal::pulse_stream(
        nfri::Pulse::scaled_bspline(3, 0.1), vec({0.49, -0.65, 0.47, -0.52, 0.22}),
        vec({0.22, 0.35, 0.46, 0.62, 0.79}), 1.0);
    const FourierVector weighted = fourier_coefficients(pulses, 5);
    const FourierVector plain =
        nfri::unweight_spectrum(weighted, pulses.model().spectral_weight(1.0));
    const auto estimate = nfri::recover_coefficients(
        plain, {0.22, 0.35, 0.46, 0.62, 0.79});
    const Eigen::VectorXd expected = vec({0.49, -0.65, 0.47, -0.52, 0.22});
    CHECK((estimate.coefficients - expected).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("random coefficient recovery is exact at the true supports") {
    oracles::TestRng rng(47);
    for (int trial = 0; trial < 8; ++trial) {
        const int K = rng.uniform_int(1, 7);
        const std::vector<double> tau = oracles::random_supports(rng, K, 1.0, 0.02);
        Eigen::VectorXd a(K);
        for (int k = 0; k < K; ++k) a[k] = rng.uniform(-1.0, 1.0);
        const FourierVector spectrum = analytic_spectrum(
            a, Eigen::Map<const Eigen::VectorXd>(tau.data(), K), 1.0, K + 1);
        const auto estimate = nfri::recover_coefficients(spectrum, tau);
        CHECK((estimate.coefficients - a).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("colliding supports are rejected") {
    const FourierVector spectrum = reference_spectrum();
    CHECK_THROWS_AS(
        nfri::recover_coefficients(spectrum, {0.25, 0.25 + 1e-12, 0.5, 0.625, 0.75}),
        nfri::DegenerateSignal);
}

TEST_CASE("translation rotates the roots") {
    oracles::TestRng rng(53);
    const int K = 4;
    const double period = 1.0;
    const double shift = 0.2375;
    const std::vector<double> tau = oracles::random_supports(rng, K, period, 0.05);
    Eigen::VectorXd a(K);
    for (int k = 0; k < K; ++k) a[k] = rng.uniform(0.2, 1.0);
    std::vector<double> shifted;
    for (double t : tau) shifted.push_back(std::fmod(t + shift, period));
    std::sort(shifted.begin(), shifted.end());

    const FourierVector base = analytic_spectrum(
        a, Eigen::Map<const Eigen::VectorXd>(tau.data(), K), period, K);
    const auto base_filter = nfri::annihilating_filter(base, K);
    std::vector<double> moved;
    const double w0 = 2.0 * kPi / period;
    Eigen::VectorXcd rotated(K);
    for (int k = 0; k < K; ++k) {
        rotated[k] = base_filter.roots[k] * std::polar(1.0, -w0 * shift);
    }
    moved = nfri::supports_from_roots(rotated, period);
    CHECK(support_error(moved, shifted, period) < 1e-9);
}

TEST_CASE("scaling the spectrum scales the coefficients") {
    const FourierVector base = reference_spectrum();
    Eigen::VectorXcd scaled_values = base.values() * 3.5;
    const FourierVector scaled(std::move(scaled_values), 1.0);
    const std::vector<double> tau{0.25, 0.375, 0.5, 0.625, 0.75};
    const auto base_est = nfri::recover_coefficients(base, tau);
    const auto scaled_est = nfri::recover_coefficients(scaled, tau);
    CHECK((scaled_est.coefficients - 3.5 * base_est.coefficients)
              .cwiseAbs()
              .maxCoeff() < 1e-9);
    const auto base_filter = nfri::annihilating_filter(base, 5);
    const auto scaled_filter = nfri::annihilating_filter(scaled, 5);
    CHECK(support_error(nfri::supports_from_roots(scaled_filter.roots, 1.0),
                        nfri::supports_from_roots(base_filter.roots, 1.0),
                        1.0) < 1e-12);
}

}  // TEST_SUITE
