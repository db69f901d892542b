#include "oracles.hpp"

#include "scgbp/metrics.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace scgbp;

TEST(ErrorStats, Examples) {
    const std::vector<double> est{121, 119}, ref{120, 120};
    const auto s = error_stats(est, ref);
    EXPECT_DOUBLE_EQ(s.me, 0.0);
    EXPECT_DOUBLE_EQ(s.mae, 1.0);
    EXPECT_DOUBLE_EQ(s.std, 1.0);
    const auto z = error_stats(ref, ref);
    EXPECT_EQ(z.me, 0.0);
    EXPECT_EQ(z.mae, 0.0);
    EXPECT_EQ(z.std, 0.0);
}

TEST(ErrorStats, Errors) {
    const std::vector<double> a{1, 2, 3}, b{1, 2};
    try {
        error_stats(a, b);
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("length mismatch"), std::string::npos);
    }
    EXPECT_THROW(error_stats(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
}

TEST(Pearson, Examples) {
    const std::vector<double> ref{1, 4, 2, 8, 5};
    std::vector<double> neg, aff;
    for (double v : ref) {
        neg.push_back(-v);
        aff.push_back(2 * v + 5);
    }
    EXPECT_NEAR(pearson(ref, ref), 1.0, 1e-12);
    EXPECT_NEAR(pearson(neg, ref), -1.0, 1e-12);
    EXPECT_NEAR(pearson(aff, ref), 1.0, 1e-12);
    EXPECT_THROW(pearson(std::vector<double>(5, 3.0), ref), std::invalid_argument);
}

TEST(BlandAltman, Examples) {
    const std::vector<double> ref{120, 130, 125};
    const auto id = bland_altman(ref, ref);
    EXPECT_EQ(id.bias, 0.0);
    EXPECT_EQ(id.loa_low, 0.0);
    EXPECT_EQ(id.loa_high, 0.0);

    const std::vector<double> est{121, 129}, r2{120, 130};
    const auto b = bland_altman(est, r2);
    EXPECT_DOUBLE_EQ(b.bias, 0.0);
    EXPECT_DOUBLE_EQ(b.sd, 1.0);
    EXPECT_DOUBLE_EQ(b.loa_low, -1.96);
    EXPECT_DOUBLE_EQ(b.loa_high, 1.96);
    EXPECT_EQ(b.means, (std::vector<double>{120.5, 129.5}));
    EXPECT_EQ(b.diffs, (std::vector<double>{1.0, -1.0}));
    EXPECT_THROW(bland_altman(std::vector<double>{1}, std::vector<double>{1}), std::invalid_argument);
}

TEST(BlandAltman, CoverageOnRandomData) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> g(0.0, 5.0);
        std::vector<double> est(1000), ref(1000);
        for (std::size_t i = 0; i < 1000; ++i) {
            ref[i] = 120.0 + g(rng);
            est[i] = ref[i] + 1.0 + g(rng);
        }
        const auto b = bland_altman(est, ref);
        std::size_t inside = 0;
        for (double d : b.diffs) inside += (d >= b.loa_low && d <= b.loa_high);
        EXPECT_GE(static_cast<double>(inside) / 1000.0, 0.93);
    }
}

TEST(IeeeCheck, Boundaries) {
    EXPECT_TRUE(ieee_check(-0.19, 3.3));
    EXPECT_FALSE(ieee_check(5.1, 3.0));
    EXPECT_TRUE(ieee_check(0.0, 8.0));
    EXPECT_TRUE(ieee_check(-5.0, 0.0));
    EXPECT_FALSE(ieee_check(0.0, 8.01));
    EXPECT_FALSE(ieee_check(1.0, 3.0, IeeeBound{0.5, 8.0}));
}

TEST(Metrics, BruteForceAgreementAndInvariants) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> len(2, 400);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = len(rng);
        std::vector<double> est(n), ref(n), diff(n), absd(n);
        for (std::size_t i = 0; i < n; ++i) {
            ref[i] = 100 + 15 * g(rng);
            est[i] = ref[i] + 3 * g(rng) + 0.5;
            diff[i] = est[i] - ref[i];
            absd[i] = std::abs(diff[i]);
        }
        const auto s = error_stats(est, ref);
        EXPECT_NEAR(s.me, oracle::mean(diff), 1e-9);
        EXPECT_NEAR(s.mae, oracle::mean(absd), 1e-9);
        EXPECT_NEAR(s.std, oracle::pop_std(diff), 1e-9);
        EXPECT_NEAR(pearson(est, ref), oracle::pearson(est, ref), 1e-9);
        const auto b = bland_altman(est, ref);
        EXPECT_NEAR(b.bias, s.me, 1e-12);
        EXPECT_NEAR(b.loa_high - b.loa_low, 2 * 1.96 * oracle::pop_std(diff), 1e-9);

        EXPECT_GE(s.mae, std::abs(s.me));
        std::vector<double> e2(est), r2(ref);
        for (auto& v : e2) v += 37.0;
        for (auto& v : r2) v += 37.0;
        EXPECT_NEAR(error_stats(e2, r2).std, s.std, 1e-9);

        const auto rep_ = evaluate(est, ref);
        EXPECT_EQ(rep_.n, n);
        EXPECT_LE(rep_.ba_loa_low_mmHg, rep_.ba_bias_mmHg);
        EXPECT_LE(rep_.ba_bias_mmHg, rep_.ba_loa_high_mmHg);
        EXPECT_TRUE(rep_.pearson_defined);
        EXPECT_LE(std::abs(rep_.pearson_r), 1.0);
    }
}

TEST(Evaluate, ConstantSequenceLeavesPearsonUndefined) {
    const std::vector<double> est(10, 120.0), ref(10, 120.0);
    const auto r = evaluate(est, ref);
    EXPECT_FALSE(r.pearson_defined);
    EXPECT_TRUE(r.ieee_pass);
    EXPECT_EQ(r.mae_mmHg, 0.0);
}
