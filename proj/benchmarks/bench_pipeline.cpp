// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 NeuroFRI Project Contributors

#include <benchmark/benchmark.h>

#include <Eigen/Core>

#include "nfri/encoder.hpp"
#include "nfri/kernel.hpp"
#include "nfri/multichannel.hpp"
#include "nfri/prony.hpp"
#include "nfri/recon.hpp"
#include "nfri/signal.hpp"

namespace {

using nfri::EncoderConfig;
using nfri::EventStream;
using nfri::FilteredSignal;
using nfri::FriSignal;
using nfri::SmsKernel;

FriSignal reference_signal() {
    Eigen::VectorXd tau(5);
    tau << 0.25, 0.375, 0.5, 0.625, 0.75;
    return FriSignal::dirac_stream(Eigen::VectorXd::Ones(5), tau, 1.0);
}

void BM_KernelTimeEval(benchmark::State& state) {
    const SmsKernel kernel(static_cast<int>(state.range(0)), 5, 1.0);
    double t = -kernel.support_radius();
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernel.time_eval(t));
        t += 1e-4;
        if (t > kernel.support_radius()) t = -kernel.support_radius();
    }
}
BENCHMARK(BM_KernelTimeEval)->Arg(0)->Arg(2);

void BM_FilteredEval(benchmark::State& state) {
    const FriSignal sig = reference_signal();
    const FilteredSignal filtered(sig, SmsKernel(0, 5, 1.0));
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(filtered(t));
        t += 1e-4;
        if (t > 1.0) t = 0.0;
    }
}
BENCHMARK(BM_FilteredEval);

void BM_Encode(benchmark::State& state) {
    const FriSignal sig = reference_signal();
    const FilteredSignal filtered(sig, SmsKernel(0, 5, 1.0));
    EncoderConfig cfg;
    cfg.threshold = 1.0 / 11.0;
    cfg.grid_density = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(nfri::encode(filtered, cfg));
    }
}
BENCHMARK(BM_Encode)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_SpectrumFit(benchmark::State& state) {
    const FriSignal sig = reference_signal();
    const FilteredSignal filtered(sig, SmsKernel(0, 5, 1.0));
    const EventStream stream = nfri::encode(filtered, EncoderConfig{1.0 / 11.0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(nfri::fourier_from_events(stream, 5));
    }
}
BENCHMARK(BM_SpectrumFit);

void BM_AnnihilatingFilter(benchmark::State& state) {
    const FriSignal sig = reference_signal();
    const nfri::FourierVector spectrum = fourier_coefficients(sig, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(nfri::annihilating_filter(spectrum, 5));
    }
}
BENCHMARK(BM_AnnihilatingFilter);

void BM_Reconstruct(benchmark::State& state) {
    const FriSignal sig = reference_signal();
    const FilteredSignal filtered(sig, SmsKernel(0, 5, 1.0));
    const EventStream stream = nfri::encode(filtered, EncoderConfig{1.0 / 11.0});
    const nfri::ModelDescriptor model = sig.model();
    for (auto _ : state) {
        benchmark::DoNotOptimize(nfri::reconstruct(stream, model, 5));
    }
}
BENCHMARK(BM_Reconstruct);

void BM_SimoReconstruct(benchmark::State& state) {
    const FriSignal sig = reference_signal();
    const FilteredSignal filtered(sig, SmsKernel(0, 5, 1.0));
    std::vector<EventStream> streams;
    int channel = 0;
    for (double c : {0.17, 0.15}) {
        EventStream stream = nfri::encode(filtered, EncoderConfig{c});
        stream.channel = channel++;
        streams.push_back(std::move(stream));
    }
    const nfri::ModelDescriptor model = sig.model();
    for (auto _ : state) {
        benchmark::DoNotOptimize(nfri::simo_reconstruct(streams, model, 5));
    }
}
BENCHMARK(BM_SimoReconstruct);

}  // namespace

BENCHMARK_MAIN();
