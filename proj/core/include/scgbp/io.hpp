#pragma once

#include "scgbp/ao_detect.hpp"
#include "scgbp/bp_model.hpp"
#include "scgbp/features.hpp"
#include "scgbp/metrics.hpp"
#include "scgbp/pac_detect.hpp"
#include "scgbp/peak_correct.hpp"
#include "scgbp/signal.hpp"
#include "scgbp/synth.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace scgbp::io {

namespace fs = std::filesystem;

/// Malformed or unreadable input file.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const fs::path& path, const std::string& content);
std::string read_text(const fs::path& path);

/// `<stem>.meta.json` next to `<stem>.csv`.
fs::path meta_path_for(const fs::path& csv);

/// Recording CSV: header `time_s,scg_z[,abp,ecg,ppg]`, one row per sample.
/// The sampling rate comes from fs_override, else the sidecar's fs_hz, else
/// the spacing of the time_s column.
Recording parse_recording(const fs::path& csv, std::optional<double> fs_override = std::nullopt);
void write_recording(const Recording& rec, const fs::path& prefix);

void write_truth(const SynthGroundTruth& truth, const fs::path& path);
SynthGroundTruth read_truth(const fs::path& path);

/// Beats CSV: beat_index, ao_ms, pac_ms, lvet_ms, hr_bpm.
void write_beats(const fs::path& path, const std::vector<BeatFeature>& beats, double fs);
/// Sample indices are recovered with fs.
std::vector<BeatFeature> read_beats(const fs::path& path, double fs);

/// Correction report, per-interval pAC outcomes and drop counts as JSON.
void write_detection_report(const fs::path& path, const std::string& subject_id, const PeakList& ao_raw,
                            const PeakList& ao, const CorrectionReport& correction,
                            const std::vector<PacResult>& pac, const BeatExtraction& beats, double fs);

/// {subject_id, target, a, b, c, n_train, lvet_units: "ms", ...}
void write_model(const fs::path& path, const BpModel& model, const std::string& subject_id);
BpModel read_model(const fs::path& path, std::string* subject_id = nullptr);

struct PredictionRow {
    std::size_t beat_index = 0;
    double predicted_mmHg = 0.0;
    std::optional<double> reference_mmHg;
};

/// predictions CSV: beat_index, predicted_mmHg[, reference_mmHg]
void write_predictions(const fs::path& path, const std::vector<PredictionRow>& rows, bool with_reference);
std::vector<PredictionRow> read_predictions(const fs::path& path);

struct ReferenceRow {
    std::size_t beat_index = 0;
    double reference_mmHg = 0.0;
};

/// references CSV: beat_index, reference_mmHg
void write_references(const fs::path& path, const std::vector<ReferenceRow>& rows);
std::vector<ReferenceRow> read_references(const fs::path& path);

void write_eval_report(const fs::path& path, const EvalReport& report, const std::string& label);
/// Bland-Altman point cloud: mean_mmHg, diff_mmHg.
void write_bland_altman(const fs::path& path, const BlandAltman& ba);
/// Regression pairs: reference_mmHg, estimated_mmHg.
void write_regression(const fs::path& path, std::span<const double> ref, std::span<const double> est);

/// Intermediate detector signals as `<prefix>.<stage>.csv`.
void write_stages(const fs::path& prefix, const AoStages& stages, double fs);

/// Shortest decimal text that round-trips a double.
std::string format_double(double v);

} // namespace scgbp::io
