#include "scgbp/synth.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace scgbp;

TEST(Synth, ConstantSixtyBpm) {
    SynthConfig c;
    c.hr = {HrProfileKind::Constant, 60.0, 60.0, 20.0};
    const auto out = generate(c);
    EXPECT_NEAR(static_cast<double>(out.truth.beats()), 60.0, 1.0);
    for (std::size_t k = 1; k < out.truth.beats(); ++k) {
        const auto d = static_cast<double>(out.truth.ao_idx[k] - out.truth.ao_idx[k - 1]);
        EXPECT_NEAR(d, 1000.0, 1.0);
    }
    EXPECT_EQ(out.recording.size(), 60000u);
    EXPECT_DOUBLE_EQ(out.recording.fs(), 1000.0);
    ASSERT_TRUE(out.recording.abp.has_value());
    EXPECT_NO_THROW(out.recording.validate());
}

TEST(Synth, DeterministicPerSeed) {
    SynthConfig c;
    c.seed = 77;
    c.wander.amp = 0.5;
    const auto a = generate(c), b = generate(c);
    EXPECT_EQ(a.recording.scg_z.samples(), b.recording.scg_z.samples());
    EXPECT_EQ(a.recording.abp->samples(), b.recording.abp->samples());
    EXPECT_EQ(a.truth.sbp_mmHg, b.truth.sbp_mmHg);
    c.seed = 78;
    const auto d = generate(c);
    EXPECT_NE(a.recording.scg_z.samples(), d.recording.scg_z.samples());
}

TEST(Synth, GroundTruthOrdering) {
    for (auto kind : {HrProfileKind::Sweep, HrProfileKind::Sinusoid}) {
        SynthConfig c;
        c.hr = {kind, 50.0, 140.0, 17.0};
        const auto out = generate(c);
        const auto& t = out.truth;
        for (std::size_t k = 0; k < t.beats(); ++k) {
            EXPECT_LT(t.ao_ms[k], t.ac_ms[k]);
            EXPECT_LT(t.ac_ms[k], t.pac_ms[k]);
            if (k + 1 < t.beats()) EXPECT_LT(t.pac_idx[k], t.ao_idx[k + 1]);
            EXPECT_GT(t.sbp_mmHg[k], t.dbp_mmHg[k]);
            EXPECT_NEAR(t.lvet_ms[k], t.pac_ms[k] - t.ao_ms[k], 1e-9);
        }
    }
}

TEST(Synth, BpFollowsProgrammedLawExactly) {
    SynthConfig c;
    c.bp.sigma_mmHg = 0.0;
    c.bp.sbp = {-20.0, 0.5, 200.0};
    const auto out = generate(c);
    const auto& t = out.truth;
    for (std::size_t k = 0; k < t.beats(); ++k) {
        EXPECT_DOUBLE_EQ(t.sbp_mmHg[k], -20.0 * std::log(t.lvet_ms[k]) + 0.5 * t.hr_bpm[k] + 200.0);
    }
}

TEST(Synth, DefaultsStayInsidePlausibleEnvelopes) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SynthConfig c;
        c.seed = seed;
        const auto t = generate(c).truth;
        for (std::size_t k = 0; k < t.beats(); ++k) {
            EXPECT_GE(t.hr_bpm[k], 40.0);
            EXPECT_LE(t.hr_bpm[k], 180.0);
            EXPECT_GE(t.sbp_mmHg[k], 78.0);
            EXPECT_LE(t.sbp_mmHg[k], 161.0);
            EXPECT_GE(t.dbp_mmHg[k], 55.0);
            EXPECT_LE(t.dbp_mmHg[k], 97.0);
        }
    }
}

TEST(Synth, SweepCoversTheFullHeartRateRange) {
    SynthConfig c;
    c.hr = {HrProfileKind::Sweep, 50.0, 140.0, 20.0};
    const auto t = generate(c).truth;
    const auto [lo, hi] = std::minmax_element(t.hr_bpm.begin(), t.hr_bpm.end());
    EXPECT_NEAR(*lo, 50.0, 2.0);
    EXPECT_NEAR(*hi, 140.0, 5.0);
    EXPECT_GE(*lo, 40.0);
    EXPECT_LE(*hi, 180.0);
}

TEST(Synth, LvetShortensWithHeartRate) {
    SynthConfig c;
    c.lvet.jitter_ms = 0.0;
    c.hr = {HrProfileKind::Sweep, 50.0, 140.0, 20.0};
    const auto t = generate(c).truth;
    for (std::size_t k = 1; k < t.beats(); ++k)
        if (t.hr_bpm[k] > t.hr_bpm[k - 1] + 1.0) EXPECT_LE(t.lvet_ms[k], t.lvet_ms[k - 1] + 1.0);
}

TEST(Synth, ValidationNamesTheField) {
    SynthConfig c;
    c.duration_s = 5.0;
    try {
        c.validate();
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("synth.duration_s"), std::string::npos);
    }
    c = {};
    c.fs = 100.0;
    EXPECT_THROW(generate(c), std::invalid_argument);
    c = {};
    c.hr.hi_bpm = 200.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.hr = {HrProfileKind::Sweep, 90.0, 80.0, 20.0};
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Synth, FirstPositiveLobe) {
    // for a very wide window the lobe sits a quarter period after the centre
    EXPECT_NEAR(first_positive_lobe_offset(10.0, 10.0), 0.025, 1e-5);
    const double off = first_positive_lobe_offset(14.0, 0.016);
    EXPECT_GT(off, 0.0);
    EXPECT_LT(off, 0.25 / 14.0);
    const double w = 0.016;
    auto f = [&](double t) { return std::sin(2 * std::numbers::pi * 14.0 * t) * std::exp(-t * t / (2 * w * w)); };
    EXPECT_GT(f(off), f(off - 1e-4));
    EXPECT_GT(f(off), f(off + 1e-4));
}
