#include "scgbp/bp_model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <unordered_map>

namespace scgbp {

const char* to_string(BpTarget t) { return t == BpTarget::Sbp ? "sbp" : "dbp"; }

BpTarget parse_target(const std::string& s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "sbp") return BpTarget::Sbp;
    if (lower == "dbp") return BpTarget::Dbp;
    throw std::invalid_argument("unknown BP target '" + s + "' (expected sbp or dbp)");
}

double BpModel::predict(double lvet_ms, double hr_bpm) const { return a * std::log(lvet_ms) + b * hr_bpm + c; }

double reference_value(const RefBeatBP& r, BpTarget t) { return t == BpTarget::Sbp ? r.sbp_mmHg : r.dbp_mmHg; }

namespace {

std::optional<RefBeatBP> interval_extrema(const SampledSignal& abp, std::size_t lo, std::size_t hi, std::size_t beat) {
    hi = std::min(hi, abp.size());
    if (lo >= hi) return std::nullopt;
    const auto first = abp.samples().begin() + static_cast<std::ptrdiff_t>(lo);
    const auto last = abp.samples().begin() + static_cast<std::ptrdiff_t>(hi);
    const auto [mn, mx] = std::minmax_element(first, last);
    const double sbp = *mx, dbp = *mn;
    if (!(sbp > dbp) || dbp < kMinPlausibleBp || sbp > kMaxPlausibleBp) return std::nullopt;
    return RefBeatBP{beat, sbp, dbp};
}

} // namespace

std::vector<RefBeatBP> reference_bp(const SampledSignal& abp, const PeakList& aos) {
    std::vector<RefBeatBP> out;
    for (std::size_t i = 0; i + 1 < aos.size(); ++i) {
        if (aos[i] >= abp.size()) break;
        if (auto r = interval_extrema(abp, aos[i], aos[i + 1], i)) out.push_back(*r);
    }
    return out;
}

std::vector<RefBeatBP> reference_bp(const SampledSignal& abp, std::span<const BeatFeature> beats) {
    std::vector<RefBeatBP> out;
    for (const auto& b : beats) {
        if (!(b.hr_bpm > 0.0)) continue;
        const auto rr = static_cast<std::size_t>(std::llround(60.0 * abp.fs() / b.hr_bpm));
        if (auto r = interval_extrema(abp, b.ao_idx, b.ao_idx + rr, b.beat_index)) out.push_back(*r);
    }
    return out;
}

CalibrationSet pair_with_references(std::span<const BeatFeature> beats, std::span<const RefBeatBP> refs) {
    std::unordered_map<std::size_t, const RefBeatBP*> by_index;
    for (const auto& r : refs) by_index[r.beat_index] = &r;
    CalibrationSet out;
    for (const auto& b : beats) {
        auto it = by_index.find(b.beat_index);
        if (it == by_index.end()) continue;
        out.beats.push_back(b);
        out.refs.push_back(*it->second);
    }
    return out;
}

std::size_t train_count(std::size_t n, double frac) {
    if (!(frac > 0.0 && frac < 1.0)) throw std::invalid_argument("calibration fraction must lie in (0, 1)");
    // guard against 0.7 * 10 landing a hair above 7
    return static_cast<std::size_t>(std::ceil(frac * static_cast<double>(n) - 1e-9));
}

std::pair<CalibrationSet, CalibrationSet> split_calibration(const CalibrationSet& all, double frac) {
    if (all.beats.size() != all.refs.size()) throw std::invalid_argument("beats and references differ in length");
    const std::size_t n_train = train_count(all.beats.size(), frac);
    if (n_train < 3)
        throw std::invalid_argument("calibration split leaves " + std::to_string(n_train) +
                                    " training beats (need at least 3)");
    const auto cut = static_cast<std::ptrdiff_t>(n_train);
    CalibrationSet train{{all.beats.begin(), all.beats.begin() + cut}, {all.refs.begin(), all.refs.begin() + cut}};
    CalibrationSet test{{all.beats.begin() + cut, all.beats.end()}, {all.refs.begin() + cut, all.refs.end()}};
    return {std::move(train), std::move(test)};
}

LogLinearFit fit_log_linear(std::span<const double> lvet, std::span<const double> hr, std::span<const double> bp) {
    const std::size_t n = bp.size();
    if (lvet.size() != n || hr.size() != n) throw std::invalid_argument("calibration columns differ in length");
    if (n < 3) throw std::invalid_argument("calibration needs at least 3 beats");

    Eigen::MatrixXd design(static_cast<Eigen::Index>(n), 3);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (!(lvet[i] > 0.0)) throw std::invalid_argument("LVET' must be positive");
        const auto r = static_cast<Eigen::Index>(i);
        design(r, 0) = std::log(lvet[i]);
        design(r, 1) = hr[i];
        design(r, 2) = 1.0;
        rhs(r) = bp[i];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.rows(), design.cols());
    qr.setThreshold(1e-10);
    qr.compute(design);
    if (qr.rank() < 3) throw SingularSystem("calibration design matrix is rank deficient (constant LVET' or HR?)");
    const Eigen::Vector3d x = qr.solve(rhs);

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(design);
    const auto& sv = svd.singularValues();
    const double condition = sv(0) / sv(sv.size() - 1);

    if (!x.allFinite()) throw SingularSystem("calibration produced non-finite coefficients");
    return {x(0), x(1), x(2), condition};
}

BpModel calibrate(std::span<const BeatFeature> beats, std::span<const RefBeatBP> refs, BpTarget target) {
    if (beats.size() != refs.size()) throw std::invalid_argument("beats and references differ in length");
    std::vector<double> lvet, hr, bp;
    for (std::size_t i = 0; i < beats.size(); ++i) {
        lvet.push_back(beats[i].lvet_ms);
        hr.push_back(beats[i].hr_bpm);
        bp.push_back(reference_value(refs[i], target));
    }
    const auto fit = fit_log_linear(lvet, hr, bp);
    BpModel m;
    m.target = target;
    m.a = fit.a;
    m.b = fit.b;
    m.c = fit.c;
    m.n_train = beats.size();
    m.condition_estimate = fit.condition;
    m.train_last_beat_index = beats.back().beat_index;
    return m;
}

BpModel calibrate(const CalibrationSet& train, BpTarget target) { return calibrate(train.beats, train.refs, target); }

std::vector<double> estimate(const BpModel& model, std::span<const BeatFeature> beats) {
    std::vector<double> out;
    out.reserve(beats.size());
    for (const auto& b : beats) out.push_back(model.predict(b.lvet_ms, b.hr_bpm));
    return out;
}

} // namespace scgbp
