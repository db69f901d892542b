#include "oracles.hpp"

#include "scgbp/bp_model.hpp"
#include "scgbp/synth.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace scgbp;

namespace {

struct Table {
    std::vector<double> lvet, hr, bp;
    std::vector<BeatFeature> beats;
    std::vector<RefBeatBP> refs;
};

// Beats drawn independently in lvet and hr, BP from the log-linear law.
Table law_table(std::size_t n, double a, double b, double c, double sigma, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ul(250.0, 420.0), uh(55.0, 120.0);
    std::normal_distribution<double> noise(0.0, sigma > 0 ? sigma : 1.0);
    Table t;
    for (std::size_t i = 0; i < n; ++i) {
        const double l = ul(rng), h = uh(rng);
        const double y = a * std::log(l) + b * h + c + (sigma > 0 ? noise(rng) : 0.0);
        t.lvet.push_back(l);
        t.hr.push_back(h);
        t.bp.push_back(y);
        t.beats.push_back({i, 1000 * i, 1000 * i + 300, l, h});
        t.refs.push_back({i, y, y - 40.0});
    }
    return t;
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

} // namespace

TEST(BpTarget, ParseAndPrint) {
    EXPECT_EQ(parse_target("SBP"), BpTarget::Sbp);
    EXPECT_EQ(parse_target("dbp"), BpTarget::Dbp);
    EXPECT_STREQ(to_string(BpTarget::Dbp), "dbp");
    EXPECT_THROW(parse_target("map"), std::invalid_argument);
}

TEST(FitLogLinear, MatchesNormalEquationOracle) {
    const auto t = law_table(80, -18.0, 0.4, 190.0, 2.0, 5);
    const auto f = fit_log_linear(t.lvet, t.hr, t.bp);
    const auto o = oracle::normal_equations(t.lvet, t.hr, t.bp);
    EXPECT_NEAR(f.a, o.a, 1e-9 * std::abs(o.a));
    EXPECT_NEAR(f.b, o.b, 1e-9 * std::abs(o.b));
    EXPECT_NEAR(f.c, o.c, 1e-9 * std::abs(o.c));
    EXPECT_GT(f.condition, 1.0);
}

TEST(FitLogLinear, NoiselessRecovery) {
    const auto t = law_table(50, -20.0, 0.5, 200.0, 0.0, 1);
    const auto f = fit_log_linear(t.lvet, t.hr, t.bp);
    EXPECT_LT(rel(f.a, -20.0), 1e-6);
    EXPECT_LT(rel(f.b, 0.5), 1e-6);
    EXPECT_LT(rel(f.c, 200.0), 1e-6);
}

TEST(FitLogLinear, NoisyRecoveryAveragedOverSeeds) {
    double sa = 0, sb = 0, sc = 0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        const auto t = law_table(200, -20.0, 0.5, 200.0, 1.0, 100 + static_cast<std::uint64_t>(s));
        const auto f = fit_log_linear(t.lvet, t.hr, t.bp);
        sa += f.a;
        sb += f.b;
        sc += f.c;
    }
    EXPECT_LT(rel(sa / seeds, -20.0), 0.05);
    EXPECT_LT(rel(sb / seeds, 0.5), 0.05);
    EXPECT_LT(rel(sc / seeds, 200.0), 0.05);
}

TEST(FitLogLinear, ResidualIsOrthogonalToColumns) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto t = law_table(120, -12.0, 0.9, 150.0, 3.0, seed);
        const auto f = fit_log_linear(t.lvet, t.hr, t.bp);
        double g[3] = {0, 0, 0}, atb[3] = {0, 0, 0};
        for (std::size_t i = 0; i < t.bp.size(); ++i) {
            const double row[3] = {std::log(t.lvet[i]), t.hr[i], 1.0};
            const double r = t.bp[i] - (f.a * row[0] + f.b * row[1] + f.c);
            for (int k = 0; k < 3; ++k) {
                g[k] += row[k] * r;
                atb[k] += row[k] * t.bp[i];
            }
        }
        const double norm = std::sqrt(atb[0] * atb[0] + atb[1] * atb[1] + atb[2] * atb[2]);
        for (double v : g) EXPECT_LT(std::abs(v), 1e-6 * norm);
    }
}

TEST(FitLogLinear, SingularAndShortInputs) {
    const std::vector<double> l(10, 300.0), h(10, 70.0), y(10, 120.0);
    EXPECT_THROW(fit_log_linear(l, h, y), SingularSystem);
    const std::vector<double> l2{300, 310}, h2{60, 70}, y2{120, 121};
    EXPECT_THROW(fit_log_linear(l2, h2, y2), std::invalid_argument);
    std::vector<double> bad{300, -1, 320};
    EXPECT_THROW(fit_log_linear(bad, std::vector<double>{60, 70, 80}, std::vector<double>{1, 2, 3}),
                 std::invalid_argument);
}

TEST(FitLogLinear, UnitChangeOnlyShiftsIntercept) {
    const auto t = law_table(60, -20.0, 0.5, 200.0, 1.0, 9);
    std::vector<double> seconds(t.lvet);
    for (auto& v : seconds) v /= 1000.0;
    const auto ms = fit_log_linear(t.lvet, t.hr, t.bp);
    const auto s = fit_log_linear(seconds, t.hr, t.bp);
    EXPECT_NEAR(s.a, ms.a, 1e-9 * std::abs(ms.a));
    EXPECT_NEAR(s.b, ms.b, 1e-9 * std::abs(ms.b));
    EXPECT_NEAR(s.c, ms.c + ms.a * std::log(1000.0), 1e-9 * std::abs(ms.c));
    for (std::size_t i = 0; i < t.lvet.size(); ++i) {
        const double p_ms = ms.a * std::log(t.lvet[i]) + ms.b * t.hr[i] + ms.c;
        const double p_s = s.a * std::log(seconds[i]) + s.b * t.hr[i] + s.c;
        EXPECT_NEAR(p_ms, p_s, 1e-9);
    }
}

TEST(Estimate, Examples) {
    BpModel m;
    m.a = -20.0;
    m.b = 0.5;
    m.c = 200.0;
    EXPECT_NEAR(m.predict(300.0, 60.0), 115.924, 5e-4);
    BpModel flat;
    flat.c = 120.0;
    const std::vector<BeatFeature> beats{{0, 0, 1, 250.0, 55.0}, {1, 0, 1, 400.0, 130.0}};
    for (double v : estimate(flat, beats)) EXPECT_DOUBLE_EQ(v, 120.0);
}

TEST(Estimate, MonotoneWithSignOfCoefficients) {
    BpModel m;
    m.a = -20.0;
    m.b = 0.5;
    m.c = 200.0;
    for (double l = 200; l < 450; l += 10) EXPECT_LT(m.predict(l + 10, 70), m.predict(l, 70));
    for (double h = 50; h < 140; h += 5) EXPECT_GT(m.predict(300, h + 5), m.predict(300, h));
}

TEST(Calibrate, NoiselessPredictionsReproduceReferences) {
    const auto t = law_table(50, -20.0, 0.5, 200.0, 0.0, 4);
    const auto m = calibrate(t.beats, t.refs, BpTarget::Sbp);
    EXPECT_EQ(m.n_train, 50u);
    EXPECT_EQ(m.train_last_beat_index, 49u);
    const auto p = estimate(m, t.beats);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(p[i], t.bp[i], 1e-6);
}

TEST(Calibrate, SbpAndDbpAreIndependent) {
    auto t = law_table(60, -20.0, 0.5, 200.0, 1.0, 6);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0.0, 2.0);
    for (auto& r : t.refs) r.dbp_mmHg = 80.0 + g(rng);
    const auto s = calibrate(t.beats, t.refs, BpTarget::Sbp);
    const auto d = calibrate(t.beats, t.refs, BpTarget::Dbp);
    EXPECT_EQ(s.target, BpTarget::Sbp);
    EXPECT_EQ(d.target, BpTarget::Dbp);
    EXPECT_NE(s.a, d.a);
    EXPECT_NE(s.c, d.c);
    // refitting SBP after the DBP fit gives the same numbers
    const auto s2 = calibrate(t.beats, t.refs, BpTarget::Sbp);
    EXPECT_EQ(s.a, s2.a);
    EXPECT_EQ(s.c, s2.c);
}

TEST(Split, ChronologicalCounts) {
    EXPECT_EQ(train_count(10, 0.7), 7u);
    EXPECT_EQ(train_count(100, 0.7), 70u);
    EXPECT_EQ(train_count(3, 0.5), 2u);
    EXPECT_THROW(train_count(10, 1.0), std::invalid_argument);
    EXPECT_THROW(train_count(10, 0.0), std::invalid_argument);

    const auto t10 = law_table(10, -20, 0.5, 200, 0, 1);
    const auto [tr, te] = split_calibration({t10.beats, t10.refs}, 0.7);
    EXPECT_EQ(tr.beats.size(), 7u);
    EXPECT_EQ(te.beats.size(), 3u);

    const auto t4 = law_table(4, -20, 0.5, 200, 0, 1);
    EXPECT_THROW(split_calibration({t4.beats, t4.refs}, 0.5), std::invalid_argument);

    const auto t100 = law_table(100, -20, 0.5, 200, 0, 1);
    const auto [a, b] = split_calibration({t100.beats, t100.refs}, 0.7);
    ASSERT_EQ(a.beats.size(), 70u);
    for (std::size_t i = 0; i < 70; ++i) EXPECT_EQ(a.beats[i].beat_index, i);
    for (std::size_t i = 0; i < 30; ++i) EXPECT_EQ(b.beats[i].beat_index, 70 + i);
}

TEST(PairWithReferences, MatchesOnBeatIndex) {
    const std::vector<BeatFeature> beats{{0, 0, 1, 300, 60}, {2, 0, 1, 300, 60}, {3, 0, 1, 300, 60}};
    const std::vector<RefBeatBP> refs{{1, 120, 80}, {2, 121, 81}, {3, 122, 82}, {4, 123, 83}};
    const auto p = pair_with_references(beats, refs);
    ASSERT_EQ(p.beats.size(), 2u);
    EXPECT_EQ(p.beats[0].beat_index, 2u);
    EXPECT_EQ(p.refs[0].beat_index, 2u);
    EXPECT_EQ(p.refs[1].sbp_mmHg, 122.0);
}

TEST(ReferenceBp, SineWindow) {
    std::vector<double> abp(3000);
    for (std::size_t i = 0; i < abp.size(); ++i)
        abp[i] = 100.0 + 20.0 * std::sin(2 * oracle::kPi * static_cast<double>(i) / 1000.0);
    const auto r = reference_bp(SampledSignal(abp, 1000.0), PeakList{0, 1000, 2000});
    ASSERT_EQ(r.size(), 2u);
    EXPECT_NEAR(r[0].sbp_mmHg, 120.0, 1e-9);
    EXPECT_NEAR(r[0].dbp_mmHg, 80.0, 1e-9);
    EXPECT_EQ(r[1].beat_index, 1u);
}

TEST(ReferenceBp, FlatWindowIsDropped) {
    std::vector<double> abp(3000, 100.0);
    for (std::size_t i = 1000; i < 2000; ++i) abp[i] = 100.0 + 20.0 * std::sin(2 * oracle::kPi * static_cast<double>(i) / 1000.0);
    const auto r = reference_bp(SampledSignal(abp, 1000.0), PeakList{0, 1000, 2000});
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].beat_index, 1u);
}

TEST(ReferenceBp, RecoversProgrammedGeneratorValues) {
    SynthConfig c;
    c.seed = 2;
    c.bp.sigma_mmHg = 0.0;
    c.hr = {HrProfileKind::Constant, 70.0, 70.0, 20.0};
    const auto out = generate(c);
    const auto r = reference_bp(*out.recording.abp, PeakList(out.truth.ao_idx));
    ASSERT_GT(r.size(), 60u);
    for (const auto& b : r) {
        EXPECT_NEAR(b.sbp_mmHg, out.truth.sbp_mmHg[b.beat_index], 0.5);
        EXPECT_NEAR(b.dbp_mmHg, out.truth.dbp_mmHg[b.beat_index], 0.5);
    }
}

TEST(ReferenceBp, FromBeatTableAgreesWithAoList) {
    SynthConfig c;
    c.seed = 3;
    const auto out = generate(c);
    const PeakList aos(out.truth.ao_idx);
    std::vector<BeatFeature> beats;
    for (std::size_t i = 0; i + 1 < aos.size(); ++i) {
        const double rr = static_cast<double>(aos[i + 1] - aos[i]);
        beats.push_back({i, aos[i], aos[i] + 300, 300.0, 60000.0 / rr});
    }
    const auto a = reference_bp(*out.recording.abp, aos);
    const auto b = reference_bp(*out.recording.abp, beats);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].beat_index, b[i].beat_index);
        EXPECT_DOUBLE_EQ(a[i].sbp_mmHg, b[i].sbp_mmHg);
        EXPECT_DOUBLE_EQ(a[i].dbp_mmHg, b[i].dbp_mmHg);
    }
}
