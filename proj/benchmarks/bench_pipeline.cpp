#include "scgbp/ao_detect.hpp"
#include "scgbp/signal.hpp"
#include "scgbp/synth.hpp"
#include "scgbp/vmd.hpp"

#include <benchmark/benchmark.h>

using namespace scgbp;

namespace {

SampledSignal recording(double seconds) {
    SynthConfig c;
    c.duration_s = seconds;
    return generate(c).recording.scg_z;
}

void BM_Vmd(benchmark::State& st) {
    const auto x = recording(static_cast<double>(st.range(0)));
    const VmdParams p = AoDetectParams{}.stage2;
    for (auto _ : st) benchmark::DoNotOptimize(vmd_decompose(x, p));
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(x.size()));
}
BENCHMARK(BM_Vmd)->Arg(10)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_DetectAo(benchmark::State& st) {
    const auto x = recording(static_cast<double>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(detect_ao(x, AoDetectParams{}));
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(x.size()));
}
BENCHMARK(BM_DetectAo)->Arg(10)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_Filtfilt(benchmark::State& st) {
    const auto x = recording(60.0);
    for (auto _ : st) benchmark::DoNotOptimize(highpass_iir(x.view(), x.fs(), 10.0, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_Filtfilt)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_Hilbert(benchmark::State& st) {
    const auto x = recording(static_cast<double>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(hilbert_analytic(x));
}
BENCHMARK(BM_Hilbert)->Arg(10)->Arg(60)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
