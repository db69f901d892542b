#pragma once

#include "scgbp/peaks.hpp"
#include "scgbp/signal.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace scgbp {

struct PacParams {
    double hp_cutoff_hz = 10.0;
    int hp_order = 4;
    double ma_window_ms = 15.0;

    void validate() const;
};

/// Search window of one AO-AO interval: M2 = (3 p_i + p_{i+1}) / 4 and
/// M1 = (p_i + p_{i+1}) / 2, each rounded to the nearest sample.
struct SegmentBounds {
    std::size_t m2;
    std::size_t m1;
};

SegmentBounds segment_bounds(std::size_t p_i, std::size_t p_next);

enum class PacStatus { Found, FlatSegment, EdgeMaximum, TooShort };

/// Outcome for the interval starting at AO number `interval`.
struct PacResult {
    std::size_t interval = 0;
    std::optional<std::size_t> index;
    PacStatus status = PacStatus::Found;
};

const char* to_string(PacStatus s);

/// One entry per AO-AO interval. The segment [M2, M1] is mean-removed,
/// normalized to unit peak magnitude, smoothed by a moving average and
/// high-passed; the pAC is its maximum. Intervals whose processed segment is
/// flat, or whose maximum sits on a segment boundary, carry no index.
std::vector<PacResult> detect_pac(const SampledSignal& x, const PeakList& aos, const PacParams& p);

} // namespace scgbp
