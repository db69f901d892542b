#pragma once

#include "scgbp/metrics.hpp"
#include "scgbp/pipeline.hpp"
#include "scgbp/synth.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace scgbp::cli {

/// Bad configuration; the message starts with the dotted field name.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every tunable of the batch tool in one place.
struct PipelineConfig {
    std::uint64_t seed = 1; ///< feeds synth and random VMD initialisation
    SynthConfig synth{};
    FiducialParams fiducial{};
    double calibration_frac = 0.7;
    IeeeBound bound{};

    /// Pushes seed into the synth and VMD blocks.
    void apply_seed();
    /// Throws ConfigError naming the first invalid field.
    void validate() const;
};

/// Fields missing from the text keep their defaults; unknown keys are rejected.
PipelineConfig parse_config(const std::string& json_text);
PipelineConfig load_config(const std::filesystem::path& path);
/// Full effective configuration as pretty-printed JSON.
std::string dump_config(const PipelineConfig& cfg);

} // namespace scgbp::cli
