#include <benchmark/benchmark.h>

#include <cmath>

#include "qexp/astro.hpp"
#include "qexp/budget.hpp"
#include "qexp/exactcavity.hpp"
#include "qexp/fullmodel.hpp"
#include "qexp/twomode.hpp"

namespace {

constexpr double kTwoPi = 2 * M_PI;

void TwoModeStrain(benchmark::State& state) {
    const qexp::DetectorConfig c = qexp::baseline_gwo();
    const double chi = 0.9 * qexp::derive_rates(c, 0).se_coupling;
    double w = kTwoPi * 100;
    for (auto _ : state) {
        benchmark::DoNotOptimize(qexp::strain_psd_twomode(c, chi, w));
        w += 1e-3;
    }
}
BENCHMARK(TwoModeStrain);

void ExactChain(benchmark::State& state) {
    const qexp::ChainParams p = qexp::ChainParams::from_detector(qexp::baseline_gwo());
    double w = kTwoPi * 100;
    for (auto _ : state) {
        benchmark::DoNotOptimize(qexp::strain_psd_exact(p, w));
        w += 1e-3;
    }
}
BENCHMARK(ExactChain);

void PlantOutput(benchmark::State& state) {
    const qexp::DetectorConfig c = qexp::baseline_gwo();
    double w = kTwoPi * 100;
    for (auto _ : state) {
        benchmark::DoNotOptimize(qexp::plant_output(c, w));
        w += 1e-3;
    }
}
BENCHMARK(PlantOutput);

void HomodynePsd(benchmark::State& state) {
    const qexp::DetectorConfig c = qexp::baseline_gwo();
    const qexp::ReadoutConfig r = qexp::ReadoutConfig::from(c);
    double w = kTwoPi * 100;
    for (auto _ : state) {
        benchmark::DoNotOptimize(qexp::homodyne_psd(c, r, w));
        w += 1e-3;
    }
}
BENCHMARK(HomodynePsd);

void BandSensitivity(benchmark::State& state) {
    const qexp::DetectorConfig c = qexp::baseline_gwo();
    const qexp::ReadoutConfig r = qexp::ReadoutConfig::from(c);
    for (auto _ : state) benchmark::DoNotOptimize(qexp::band_sensitivity(c, r, {}));
}
BENCHMARK(BandSensitivity)->Unit(benchmark::kMicrosecond);

void EventSnr(benchmark::State& state) {
    qexp::Spectrum psd;
    psd.frequency_hz = qexp::linear_grid(1000, 4000, 601);
    psd.value.assign(psd.frequency_hz.size(), 1e-48);
    const auto pop = qexp::sample_population({}, 64, 1);
    qexp::SnrOptions opt;
    opt.nodes = static_cast<std::size_t>(state.range(0));
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(qexp::snr(pop[i++ % pop.size()], psd, {}, opt));
}
BENCHMARK(EventSnr)->Arg(301)->Arg(3001)->Unit(benchmark::kMicrosecond);

void Study(benchmark::State& state) {
    qexp::Spectrum psd;
    psd.frequency_hz = qexp::linear_grid(1000, 4000, 601);
    psd.value.assign(psd.frequency_hz.size(), 1e-48);
    qexp::PopulationModel m;
    m.realizations = 8;
    qexp::StudyOptions opt;
    opt.threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(qexp::run_study(m, {}, psd, 3, opt));
}
BENCHMARK(Study)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
