#pragma once

#include "scgbp/signal.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace scgbp {

enum class HrProfileKind { Constant, Sweep, Sinusoid };

/// Instantaneous heart rate over time.
///   Constant: lo_bpm throughout.
///   Sweep:    linear from lo_bpm at t = 0 to hi_bpm at t = duration.
///   Sinusoid: midpoint of [lo, hi] plus half-range * sin(2 pi t / period_s).
struct HrProfile {
    HrProfileKind kind = HrProfileKind::Sinusoid;
    double lo_bpm = 60.0;
    double hi_bpm = 100.0;
    double period_s = 20.0;
};

/// LVET' = base_ms - slope_ms_per_bpm * (HR - 60) + N(0, jitter_ms), then
/// clamped to [min_rr_frac, max_rr_frac] of the beat's RR interval and to
/// [150, 450] ms.
struct LvetLaw {
    double base_ms = 370.0;
    double slope_ms_per_bpm = 2.5;
    double jitter_ms = 6.0;
    double min_rr_frac = 0.30;
    double max_rr_frac = 0.45;
};

/// AO complex: Gaussian-windowed cosine centred on the AO instant.
/// AC complex: Gaussian-windowed sine centred on the AC instant; its first
/// positive lobe after the centre is the pAC.
struct Morphology {
    double ao_amp = 1.0;
    double ao_freq_hz = 30.0;
    double ao_width_ms = 9.0;
    double ac_amp = 0.45;
    double ac_freq_hz = 14.0;
    double ac_width_ms = 16.0;
    double beat_amp_jitter = 0.08; ///< relative SD of per-beat amplitude
};

struct BaselineWander {
    double amp = 0.0; ///< in units of ao_amp
    double freq_hz = 0.25;
};

struct BpLawCoeffs {
    double a, b, c;
};

/// Per-beat BP = a ln(LVET' ms) + b HR + c + N(0, sigma_mmHg).
struct BpLaw {
    BpLawCoeffs sbp{-20.0, 0.5, 200.0};
    BpLawCoeffs dbp{-15.0, 0.2, 150.0};
    double sigma_mmHg = 1.0;
};

struct AbpShape {
    double transit_ms = 80.0; ///< AO to pressure foot
    double rise_ms = 120.0;   ///< foot to systolic peak (capped at 30% of RR)
    double decay_ms = 350.0;  ///< diastolic decay time constant
};

struct SynthConfig {
    std::uint64_t seed = 1;
    double duration_s = 60.0;
    double fs = 1000.0;
    HrProfile hr{};
    LvetLaw lvet{};
    Morphology morphology{};
    std::optional<double> noise_snr_db = 20.0; ///< nullopt disables noise
    BaselineWander wander{};
    BpLaw bp{};
    AbpShape abp{};

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Exact fiducial times and per-beat targets; one entry per generated AO.
struct SynthGroundTruth {
    std::vector<std::size_t> ao_idx;
    std::vector<std::size_t> pac_idx;
    std::vector<double> ao_ms;
    std::vector<double> ac_ms;
    std::vector<double> pac_ms;
    std::vector<double> lvet_ms;
    std::vector<double> hr_bpm;
    std::vector<double> sbp_mmHg;
    std::vector<double> dbp_mmHg;

    std::size_t beats() const noexcept { return ao_idx.size(); }
};

struct SynthOutput {
    Recording recording;
    SynthGroundTruth truth;
};

/// Offset (s) from the centre of w(t) = sin(2 pi f t) exp(-t^2 / (2 s^2)) to
/// its first positive peak.
double first_positive_lobe_offset(double freq_hz, double width_s);

/// Deterministic for a given config (including seed).
SynthOutput generate(const SynthConfig& cfg, const std::string& subject_id = "synthetic");

} // namespace scgbp
