#include "scgbp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace scgbp {

namespace {

void check_pairs(std::span<const double> est, std::span<const double> ref, std::size_t min_n) {
    if (est.size() != ref.size())
        throw std::invalid_argument("length mismatch: " + std::to_string(est.size()) + " estimates vs " +
                                    std::to_string(ref.size()) + " references");
    if (est.size() < min_n)
        throw std::invalid_argument("need at least " + std::to_string(min_n) + " pairs, got " +
                                    std::to_string(est.size()));
}

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

} // namespace

ErrorStats error_stats(std::span<const double> est, std::span<const double> ref) {
    check_pairs(est, ref, 1);
    const auto n = static_cast<double>(est.size());
    double sum = 0.0, abs_sum = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        const double e = est[i] - ref[i];
        sum += e;
        abs_sum += std::abs(e);
    }
    ErrorStats s;
    s.me = sum / n;
    s.mae = abs_sum / n;
    double sq = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        const double e = est[i] - ref[i] - s.me;
        sq += e * e;
    }
    s.std = std::sqrt(sq / n);
    return s;
}

double pearson(std::span<const double> est, std::span<const double> ref) {
    check_pairs(est, ref, 2);
    const double mx = mean_of(est), my = mean_of(ref);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        const double dx = est[i] - mx, dy = ref[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("correlation undefined for a constant sequence");
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

BlandAltman bland_altman(std::span<const double> est, std::span<const double> ref) {
    check_pairs(est, ref, 2);
    BlandAltman ba;
    ba.means.resize(est.size());
    ba.diffs.resize(est.size());
    for (std::size_t i = 0; i < est.size(); ++i) {
        ba.means[i] = 0.5 * (est[i] + ref[i]);
        ba.diffs[i] = est[i] - ref[i];
    }
    ba.bias = mean_of(ba.diffs);
    double sq = 0.0;
    for (double d : ba.diffs) sq += (d - ba.bias) * (d - ba.bias);
    ba.sd = std::sqrt(sq / static_cast<double>(ba.diffs.size()));
    ba.loa_low = ba.bias - 1.96 * ba.sd;
    ba.loa_high = ba.bias + 1.96 * ba.sd;
    return ba;
}

bool ieee_check(double me, double std, const IeeeBound& bound) {
    return std::abs(me) <= bound.max_abs_me && std <= bound.max_std;
}

EvalReport evaluate(std::span<const double> est, std::span<const double> ref, const IeeeBound& bound) {
    check_pairs(est, ref, 1);
    EvalReport r;
    r.n = est.size();
    const auto s = error_stats(est, ref);
    r.me_mmHg = s.me;
    r.mae_mmHg = s.mae;
    r.std_mmHg = s.std;
    if (est.size() >= 2) {
        try {
            r.pearson_r = pearson(est, ref);
            r.pearson_defined = true;
        } catch (const std::invalid_argument&) {
            r.pearson_defined = false;
        }
        const auto ba = bland_altman(est, ref);
        r.ba_bias_mmHg = ba.bias;
        r.ba_loa_low_mmHg = ba.loa_low;
        r.ba_loa_high_mmHg = ba.loa_high;
    } else {
        r.ba_bias_mmHg = r.ba_loa_low_mmHg = r.ba_loa_high_mmHg = s.me;
    }
    r.ieee_pass = ieee_check(s.me, s.std, bound);
    return r;
}

} // namespace scgbp
