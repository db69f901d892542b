#pragma once

#include "scgbp/peaks.hpp"
#include "scgbp/signal.hpp"

#include <utility>
#include <vector>

namespace scgbp {

struct CorrectionParams {
    double th_frac = 0.25;       ///< TH as a fraction of the median interval M
    double tau_search_ms = 60.0; ///< exclusion margin when searching for a missing beat
    int max_passes = 3;

    void validate() const;
};

struct CorrectionReport {
    std::vector<std::size_t> inserted;
    std::vector<std::size_t> removed_systole;
    std::vector<std::size_t> removed_diastole;
    double median_interval = 0.0; ///< M in samples, from the final list
    int passes = 0;
};

/// Median of consecutive differences (mean of the middle two for even counts).
double median_interval(const std::vector<std::size_t>& peaks);

/// Repairs missing beats and removes systole/diastole false detections using
/// interval statistics around the median interval M (TH = th_frac * M):
///   1. d_i - M >  3 TH  -> insert the SCG maximum(s) inside (p_i + tau, p_{i+1} - tau)
///   2. d_i - M < -0.7 M -> drop p_{i+1}
///   3. d_i - M < -TH and d_{i+1} - M < -TH -> drop p_{i+1}
/// Rules 1-2 sweep first, then rule 3, repeated until nothing changes or
/// max_passes. M is recomputed after every edit. Needs at least 3 peaks.
std::pair<PeakList, CorrectionReport> correct_peaks(const SampledSignal& x, const PeakList& pks,
                                                    const CorrectionParams& p);

} // namespace scgbp
