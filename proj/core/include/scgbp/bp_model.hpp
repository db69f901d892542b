#pragma once

#include "scgbp/features.hpp"
#include "scgbp/peaks.hpp"
#include "scgbp/signal.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace scgbp {

enum class BpTarget { Sbp, Dbp };

const char* to_string(BpTarget t);
/// Accepts "sbp"/"dbp" in any case.
BpTarget parse_target(const std::string& s);

/// Raised when the calibration design matrix does not have full column rank.
class SingularSystem : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// BP = a * ln(LVET'[ms]) + b * HR[bpm] + c, fitted per subject and target.
struct BpModel {
    BpTarget target = BpTarget::Sbp;
    double a = 0.0; ///< mmHg per ln(ms)
    double b = 0.0; ///< mmHg per bpm
    double c = 0.0; ///< mmHg
    std::size_t n_train = 0;
    double condition_estimate = 0.0;      ///< 2-norm condition number of the design matrix
    std::size_t train_last_beat_index = 0; ///< last beat_index used for calibration

    double predict(double lvet_ms, double hr_bpm) const;
};

inline constexpr double kMinPlausibleBp = 40.0;
inline constexpr double kMaxPlausibleBp = 220.0;

struct RefBeatBP {
    std::size_t beat_index = 0;
    double sbp_mmHg = 0.0;
    double dbp_mmHg = 0.0;
};

/// Per AO-AO interval [ao_i, ao_{i+1}): SBP = max, DBP = min of the ABP.
/// Beats with SBP <= DBP or values outside [40, 220] mmHg are skipped.
std::vector<RefBeatBP> reference_bp(const SampledSignal& abp, const PeakList& aos);
/// Same extraction over [ao_idx, ao_idx + RR) where RR is recovered from each
/// beat's heart rate; used when only the beat table is at hand.
std::vector<RefBeatBP> reference_bp(const SampledSignal& abp, std::span<const BeatFeature> beats);

/// Beats and their references, matched on beat_index, in chronological order.
struct CalibrationSet {
    std::vector<BeatFeature> beats;
    std::vector<RefBeatBP> refs;
};

CalibrationSet pair_with_references(std::span<const BeatFeature> beats, std::span<const RefBeatBP> refs);

/// Train = first ceil(frac * n) beats, test = the rest. No shuffling.
/// Throws std::invalid_argument for frac outside (0, 1) or a train set under 3 beats.
std::pair<CalibrationSet, CalibrationSet> split_calibration(const CalibrationSet& all, double frac);

std::size_t train_count(std::size_t n, double frac);

struct LogLinearFit {
    double a = 0.0, b = 0.0, c = 0.0;
    double condition = 0.0;
};

/// Least-squares solution of [ln(lvet) hr 1] X = bp by column-pivoted
/// Householder QR. lvet may be in any time unit; only c depends on it.
LogLinearFit fit_log_linear(std::span<const double> lvet, std::span<const double> hr, std::span<const double> bp);

BpModel calibrate(std::span<const BeatFeature> beats, std::span<const RefBeatBP> refs, BpTarget target);
BpModel calibrate(const CalibrationSet& train, BpTarget target);

std::vector<double> estimate(const BpModel& model, std::span<const BeatFeature> beats);

double reference_value(const RefBeatBP& r, BpTarget t);

} // namespace scgbp
