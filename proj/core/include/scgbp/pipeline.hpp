#pragma once

#include "scgbp/ao_detect.hpp"
#include "scgbp/bp_model.hpp"
#include "scgbp/features.hpp"
#include "scgbp/metrics.hpp"
#include "scgbp/pac_detect.hpp"
#include "scgbp/peak_correct.hpp"

namespace scgbp {

struct FiducialParams {
    AoDetectParams ao{};
    CorrectionParams correction{};
    PacParams pac{};
};

struct FiducialResult {
    PeakList ao_raw;
    PeakList ao;
    CorrectionReport correction;
    std::vector<PacResult> pac;
    BeatExtraction beats;
    AoStages stages; ///< populated only when requested
};

/// AO detection, interval correction, pAC detection and beat features.
/// Correction and pAC search run on the detrended SCG.
FiducialResult detect_fiducials(const SampledSignal& scg, const FiducialParams& p, bool keep_stages = false);

struct TargetOutcome {
    BpModel model;
    std::vector<double> estimated;
    std::vector<double> reference;
    EvalReport report;
};

struct ProtocolOutcome {
    std::size_t n_paired = 0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    TargetOutcome sbp;
    TargetOutcome dbp;
};

/// Chronological calibrate-on-frac / test-on-rest protocol for both targets,
/// with references taken from the ABP channel over the corrected AO list.
ProtocolOutcome run_bp_protocol(const FiducialResult& fiducials, const SampledSignal& abp, double calibration_frac,
                                const IeeeBound& bound = {});

} // namespace scgbp
