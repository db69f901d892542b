#pragma once

#include "scgbp/pac_detect.hpp"
#include "scgbp/peaks.hpp"

#include <span>
#include <vector>

namespace scgbp {

/// One cardiac cycle: LVET' = pAC - AO and the forward AO-AO heart rate.
struct BeatFeature {
    std::size_t beat_index = 0; ///< position of the AO in the AO list
    std::size_t ao_idx = 0;
    std::size_t pac_idx = 0;
    double lvet_ms = 0.0;
    double hr_bpm = 0.0;
};

struct BeatExtraction {
    std::vector<BeatFeature> beats;
    std::size_t dropped_no_pac = 0;
    std::size_t dropped_guard = 0;
};

inline constexpr double kMinHrBpm = 20.0;
inline constexpr double kMaxHrBpm = 250.0;

/// Builds beats from consecutive AOs and their per-interval pAC results.
/// Beats without a pAC, or outside the 20-250 bpm / 0 < LVET' < RR guards,
/// are dropped and counted.
BeatExtraction extract_beats(const PeakList& aos, std::span<const PacResult> pacs, double fs);

} // namespace scgbp
