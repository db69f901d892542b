#include "oracles.hpp"

#include "scgbp/pipeline.hpp"
#include "scgbp/synth.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace scgbp;

TEST(Pipeline, CleanRecordingEndToEnd) {
    SynthConfig c;
    c.seed = 4;
    c.noise_snr_db.reset();
    c.hr = {HrProfileKind::Sinusoid, 60.0, 75.0, 20.0};
    const auto out = generate(c);
    const auto f = detect_fiducials(out.recording.scg_z, FiducialParams{}, true);

    std::vector<std::size_t> truth;
    for (auto i : out.truth.ao_idx)
        if (i >= 250 && i + 250 < out.recording.size()) truth.push_back(i);
    const auto m = oracle::match_events(f.ao.indices(), truth, 10.0);
    EXPECT_EQ(m.fn, 0u);
    EXPECT_EQ(m.fp, 0u);
    EXPECT_TRUE(f.correction.inserted.empty());
    EXPECT_EQ(f.pac.size(), f.ao.size() - 1);
    EXPECT_GE(f.beats.beats.size(), f.ao.size() - 2);
    EXPECT_FALSE(f.stages.cce.empty());

    const auto p = run_bp_protocol(f, *out.recording.abp, 0.7);
    EXPECT_EQ(p.n_train, train_count(p.n_paired, 0.7));
    EXPECT_EQ(p.n_train + p.n_test, p.n_paired);
    EXPECT_EQ(p.sbp.estimated.size(), p.n_test);
    EXPECT_TRUE(p.sbp.report.ieee_pass);
    EXPECT_TRUE(p.dbp.report.ieee_pass);
    EXPECT_LT(p.sbp.report.mae_mmHg, 3.0);
}

TEST(Pipeline, WithoutStagesLeavesThemEmpty) {
    SynthConfig c;
    c.seed = 5;
    c.duration_s = 20.0;
    const auto f = detect_fiducials(generate(c).recording.scg_z, FiducialParams{});
    EXPECT_TRUE(f.stages.cce.empty());
    EXPECT_GT(f.beats.beats.size(), 10u);
}

TEST(Pipeline, NoiseOnlyInputRaises) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    std::vector<double> x(15000);
    for (auto& v : x) v = g(rng);
    EXPECT_THROW(detect_fiducials(SampledSignal(x, 1000.0), FiducialParams{}), NoCardiacStructure);
}
