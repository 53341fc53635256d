// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 NeuroFRI Project Contributors

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "nfri/encoder.hpp"
#include "nfri/errors.hpp"
#include "nfri/kernel.hpp"
#include "nfri/recon.hpp"
#include "nfri/scenario.hpp"
#include "nfri/signal.hpp"
#include "oracles.hpp"

using nfri::Complex;
using nfri::EncoderConfig;
using nfri::EventStream;
using nfri::FilteredSignal;
using nfri::FourierVector;
using nfri::FriSignal;
using nfri::ReconstructionReport;
using nfri::SmsKernel;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v[i++] = x;
    return v;
}

FriSignal reference_diracs() {
    return FriSignal::dirac_stream(Eigen::VectorXd::Ones(5),
                                   vec({0.25, 0.375, 0.5, 0.625, 0.75}), 1.0);
}

FriSignal reference_pulses() {
    return FriSignal::pulse_stream(nfri::Pulse::scaled_bspline(3, 0.1),
                                   vec({0.49, -0.65, 0.47, -0.52, 0.22}),
                                   vec({0.22, 0.35, 0.46, 0.62, 0.79}), 1.0);
}

// Random stream with amplitudes of magnitude [0.2, 1] and a minimum
// circular support gap, drawn independently of the library's generator.
FriSignal draw_dirac(oracles::TestRng& rng, int order, double min_gap) {
    const std::vector<double> tau =
        oracles::random_supports(rng, order, 1.0, min_gap);
    Eigen::VectorXd a(order);
    for (int k = 0; k < order; ++k) {
        const double mag = rng.uniform(0.2, 1.0);
        a[k] = rng.uniform() < 0.5 ? -mag : mag;
    }
    return FriSignal::dirac_stream(
        a, Eigen::Map<const Eigen::VectorXd>(tau.data(), order), 1.0);
}

FriSignal draw_lspline(oracles::TestRng& rng, int degree, int order,
                       double min_gap) {
    const std::vector<double> tau =
        oracles::random_supports(rng, order, 1.0, min_gap);
    while (true) {
        Eigen::VectorXd a(order);
        for (int k = 0; k < order; ++k) {
            const double mag = rng.uniform(0.2, 1.0);
            a[k] = rng.uniform() < 0.5 ? -mag : mag;
        }
        a.array() -= a.mean();
        if (a.cwiseAbs().minCoeff() >= 0.05) {
            return FriSignal::lspline(
                degree, a, Eigen::Map<const Eigen::VectorXd>(tau.data(), order), 1.0);
        }
    }
}

double report_error(const ReconstructionReport& report, const FriSignal& truth) {
    return nfri::parameter_error(
        std::vector<double>(truth.supports().data(),
                            truth.supports().data() + truth.order()),
        truth.coefficients(), report.supports, report.coefficients, truth.period());
}

}  // namespace

TEST_SUITE("recon") {

TEST_CASE("single time builds an all-ones row") {
    const Eigen::MatrixXcd G = nfri::build_G({0.0}, 1, 1.0);
    REQUIRE(G.rows() == 1);
    REQUIRE(G.cols() == 3);
    for (Eigen::Index j = 0; j < 3; ++j) {
        CHECK(std::abs(G(0, j) - Complex(1.0, 0.0)) == 0.0);
    }
}

TEST_CASE("square trigger systems are invertible") {
    oracles::TestRng rng(61);
    for (int trial = 0; trial < 100; ++trial) {
        const int K = 1 + trial % 8;
        const int L = 2 * K + 1;
        const std::vector<double> times = oracles::random_supports(rng, L, 1.0, 0.0);
        const Eigen::MatrixXcd G = nfri::build_G(times, K, 1.0);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G);
        const auto& sv = svd.singularValues();
        // Rows have norm sqrt(2K+1); normalize before the absolute floor.
        CHECK(sv(sv.size() - 1) / std::sqrt(2.0 * K + 1.0) > 1e-8);
        CHECK(sv(sv.size() - 1) / sv(0) > 1e-10);
    }
}

TEST_CASE("reference event times give a full-rank system") {
    const FilteredSignal filtered(reference_diracs(), SmsKernel(0, 5, 1.0));
    const EventStream stream = nfri::encode(filtered, EncoderConfig{1.0 / 11.0});
    const Eigen::MatrixXcd G = nfri::build_G(stream.times(), 5, 1.0);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G);
    const auto& sv = svd.singularValues();
    REQUIRE(sv.size() == 11);
    CHECK(sv(10) > 1e-8);
    CHECK(std::isfinite(sv(0) / sv(10)));
}

TEST_CASE("duplicate or decreasing times are rejected") {
    CHECK_THROWS_AS(nfri::build_G({0.1, 0.1, 0.2}, 1, 1.0), nfri::DuplicateTimes);
    CHECK_THROWS_AS(nfri::build_G({0.3, 0.2, 0.4}, 1, 1.0), nfri::DuplicateTimes);
}

TEST_CASE("spectrum fit matches the analytic coefficients") {
    const FriSignal diracs = reference_diracs();
    const FilteredSignal filtered(diracs, SmsKernel(0, 5, 1.0));
    const EventStream stream = nfri::encode(filtered, EncoderConfig{1.0 / 11.0});
    const auto fit = nfri::fourier_from_events(stream, 5);
    const FourierVector truth = fourier_coefficients(diracs, 5);
    for (int l = -5; l <= 5; ++l) {
        CHECK(std::abs(fit.coefficients(l) - truth(l)) < 1e-9);
    }
    CHECK(fit.residual < 1e-8);

    const FriSignal pulses = reference_pulses();
    const FilteredSignal pulse_filtered(pulses, SmsKernel(0, 5, 1.0));
    const EventStream pulse_stream =
        nfri::encode(pulse_filtered, EncoderConfig{0.015});
    const auto pulse_fit = nfri::fourier_from_events(pulse_stream, 5);
    const FourierVector pulse_truth = fourier_coefficients(pulses, 5);
    for (int l = -5; l <= 5; ++l) {
        CHECK(std::abs(pulse_fit.coefficients(l) - pulse_truth(l)) < 1e-9);
    }
}

TEST_CASE("too few events are rejected with the recovery bound") {
    EventStream stream;
    stream.threshold = 0.5;
    stream.period = 1.0;
    for (int m = 0; m < 5; ++m) stream.events.push_back({0.1 * (m + 1), 1});
    CHECK_THROWS_AS(nfri::fourier_from_events(stream, 5), nfri::InsufficientEvents);
    EventStream empty;
    empty.threshold = 0.5;
    empty.period = 1.0;
    CHECK_THROWS_AS(nfri::fourier_from_events(empty, 1), nfri::InsufficientEvents);
}

TEST_CASE("reference reconstruction is exact") {
    const FriSignal diracs = reference_diracs();
    const FilteredSignal filtered(diracs, SmsKernel(0, 5, 1.0));
    const EventStream stream = nfri::encode(filtered, EncoderConfig{1.0 / 11.0});
    const ReconstructionReport report = nfri::reconstruct(stream, diracs.model(), 5);
    CHECK(report.event_count >= 11);
    CHECK(std::is_sorted(report.supports.begin(), report.supports.end()));
    CHECK(report_error(report, diracs) < 1e-9);
    CHECK(report.residual <= 1e-8);
    CHECK_FALSE(report.ill_conditioned);
}

TEST_CASE("stated pulse parameters are recovered") {
    const FriSignal pulses = reference_pulses();
    const FilteredSignal filtered(pulses, SmsKernel(0, 5, 1.0));
    const EventStream stream = nfri::encode(filtered, EncoderConfig{0.015});
    const ReconstructionReport report = nfri::reconstruct(stream, pulses.model(), 5);
    CHECK(report_error(report, pulses) < 1e-9);
}

TEST_CASE("piecewise signals reconstruct exactly") {
    oracles::TestRng rng(67);
    for (int degree : {0, 1}) {
        const FriSignal spline = draw_lspline(rng, degree, 5, 0.05);
        const FilteredSignal filtered(spline, SmsKernel(0, 5, 1.0));
        const double C = 0.9 * nfri::critical_threshold(filtered, 10.0);
        const EventStream stream = nfri::encode(filtered, EncoderConfig{C});
        const ReconstructionReport report =
            nfri::reconstruct(stream, spline.model(), 5);
        CHECK(report_error(report, spline) < 1e-8);
    }
}

TEST_CASE("events always suffice below the recovery bound") {
    oracles::TestRng rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        const int K = rng.uniform_int(1, 8);
        const FriSignal sig = draw_dirac(rng, K, 0.02);
        const FilteredSignal filtered(sig, SmsKernel(0, K, 1.0));
        const double C = 0.95 * nfri::critical_threshold(filtered, 2.0 * K);
        const EventStream stream = nfri::encode(filtered, EncoderConfig{C});
        CHECK(stream.size() >= 2 * K + 1);
    }
}

TEST_CASE("end-to-end identity on random draws") {
    // K cycles 1..8; amplitude magnitudes in [0.2, 1]; min support gap T/50;
    // threshold at 0.9x the recovery bound. Failures beyond the error bar
    // must be visible in the conditioning diagnostics.
    oracles::TestRng rng(73);
    int failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int K = 1 + trial % 8;
        const FriSignal sig = draw_dirac(rng, K, 0.02);
        const FilteredSignal filtered(sig, SmsKernel(0, K, 1.0));
        const double C = 0.9 * nfri::critical_threshold(filtered, 2.0 * K);
        const EventStream stream = nfri::encode(filtered, EncoderConfig{C});
        const ReconstructionReport report = nfri::reconstruct(stream, sig.model(), K);
        const double err = report_error(report, sig);
        if (err >= 1e-8) {
            ++failures;
            CHECK((report.ill_conditioned || report.condition_G > 1e4));
        }
    }
    CHECK(failures <= 1);
}

TEST_CASE("output is invariant to the internal root order") {
    const FriSignal diracs = reference_diracs();
    const FilteredSignal filtered(diracs, SmsKernel(0, 5, 1.0));
    const EventStream stream = nfri::encode(filtered, EncoderConfig{1.0 / 11.0});
    const ReconstructionReport first = nfri::reconstruct(stream, diracs.model(), 5);
    const ReconstructionReport second = nfri::reconstruct(stream, diracs.model(), 5);
    CHECK(first.supports == second.supports);
    CHECK(first.coefficients == second.coefficients);
    CHECK(std::is_sorted(first.supports.begin(), first.supports.end()));
}

TEST_CASE("unweighting divides out the model weight") {
    const FriSignal pulses = reference_pulses();
    const FourierVector weighted = fourier_coefficients(pulses, 5);
    const FourierVector plain =
        nfri::unweight_spectrum(weighted, pulses.model().spectral_weight(1.0));
    const double w0 = pulses.omega0();
    for (int l = -5; l <= 5; ++l) {
        const Complex expected = weighted(l) / pulses.pulse().fourier(l * w0);
        CHECK(std::abs(plain(l) - expected) <= 1e-12);
    }
}

TEST_CASE("unweighting rejects a nulled harmonic") {
    // A pulse four periods wide nulls every nonzero harmonic.
    nfri::SpectralWeight weight{
        [](int l) { return Complex(l == 0 ? 1.0 : 0.0, 0.0); }, true};
    const FourierVector spectrum(Eigen::VectorXcd::Ones(5), 1.0);
    CHECK_THROWS_AS(nfri::unweight_spectrum(spectrum, weight),
                    nfri::KernelNullsSignal);
}

TEST_CASE("unweighting zeroes the undefined dc line") {
    const FriSignal spline =
        FriSignal::lspline(0, vec({1.0, -1.0}), vec({0.2, 0.6}), 1.0);
    FourierVector weighted = fourier_coefficients(spline, 5);
    weighted(0) = Complex(0.37, 0.0);  // decoder never trusts this line
    const FourierVector plain =
        nfri::unweight_spectrum(weighted, spline.model().spectral_weight(1.0));
    CHECK(std::abs(plain(0)) == 0.0);
}

TEST_CASE("spline reconstruction reports recentred knots") {
    const FriSignal spline =
        FriSignal::lspline(1, vec({0.6, -0.2, -0.4}), vec({0.15, 0.5, 0.8}), 1.0);
    const FilteredSignal filtered(spline, SmsKernel(0, 3, 1.0));
    const double C = 0.9 * nfri::critical_threshold(filtered, 6.0);
    const EventStream stream = nfri::encode(filtered, EncoderConfig{C});
    const ReconstructionReport report = nfri::reconstruct(stream, spline.model(), 3);
    CHECK(report_error(report, spline) < 1e-8);
    CHECK(std::abs(report.coefficients.sum()) < 1e-8);
}

}  // TEST_SUITE
