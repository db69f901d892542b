#pragma once

#include "scgbp/peaks.hpp"
#include "scgbp/signal.hpp"
#include "scgbp/vmd.hpp"

#include <stdexcept>
#include <vector>

namespace scgbp {

/// Raised when a segment carries no detectable beat-to-beat structure.
class NoCardiacStructure : public std::runtime_error {
public:
    explicit NoCardiacStructure(const std::string& why)
        : std::runtime_error("no cardiac structure: " + why) {}
};

enum class EnvThresholdMode {
    Relative,  ///< tau = value * mean(D_env^2)
    Absolute,  ///< tau = value
};

struct EnvThreshold {
    EnvThresholdMode mode = EnvThresholdMode::Relative;
    double value = 0.5;
};

struct AoDetectParams {
    VmdParams stage1{.k = 2, .alpha = 50000.0, .init = VmdInit::Zero};
    VmdParams stage2{.k = 5, .alpha = 2000.0, .init = VmdInit::Uniform};
    double detrend_cutoff_hz = 5.0; ///< only stage-1 modes centred below this count as trend
    double gauss_len_ms = 21.0;
    double gauss_sigma = 1.0;
    double rho = 0.1;
    EnvThreshold env_tau{};
    double cce_window_ms = 100.0;
    double cce_min_separation_ms = 300.0;
    double cce_min_rel_height = 0.5;   ///< CCE peaks below this fraction of the 90th-percentile peak are dropped
    double cce_min_prominence = 1.5;   ///< median CCE peak / median CCE; below this the segment is rejected
    double ao_gate_ms = 350.0;
    double guard_ms = 250.0;

    void validate() const;
};

/// Gaussian-derivative filtered modes and their relative energies.
struct GdfmSet {
    std::vector<std::vector<double>> gdfms;
    std::vector<double> rge;       ///< sums to 1
    std::size_t selected_mode = 0; ///< j*
    std::vector<double> selected;  ///< reconstructed s[n]
};

/// Intermediate signals kept for plotting and diagnostics.
struct AoStages {
    std::vector<double> detrended;
    std::vector<double> reconstructed;
    std::vector<double> t_env;
    std::vector<double> cce;
    std::vector<std::size_t> candidates;
    std::vector<std::size_t> cce_peaks;
    std::vector<double> stage2_center_freqs_hz;
    std::vector<double> rge;
};

/// x minus the stage-1 modes whose centre frequency lies below cutoff_hz.
/// Narrow stage-1 modes also lock onto cardiac-band lines when there is
/// little drift, so those are left in place.
SampledSignal detrend(const SampledSignal& x, const VmdParams& stage1, double cutoff_hz = 5.0);

/// First-difference of a Gaussian window of odd length L: d[m] = g[m+1] - g[m],
/// m = 0..L-2, g[l] = exp(-(l / ((L-1)/2))^2 / sigma^2).
std::vector<double> gaussian_derivative_kernel(std::size_t len, double sigma);

/// Same-length convolution (central part of the full convolution).
std::vector<double> convolve_same(std::span<const double> x, std::span<const double> kernel);

/// Convolves every mode with the Gaussian-derivative kernel. Fills gdfms only.
GdfmSet gdfm(const VmdResult& modes, std::size_t gauss_len, double gauss_sigma);

/// Relative energies and the rho-gated reconstruction from the strongest mode
/// and at most one spectral neighbour. Fills rge, selected_mode and selected.
void rge_select(GdfmSet& g, double rho);

/// D_env = U_env - L_env, zeroed wherever D_env^2 <= tau.
std::vector<double> envelope_threshold(std::span<const double> s, const EnvThreshold& policy);

/// Negative-to-positive zero crossings of the Hilbert transform of t_env.
/// Throws std::invalid_argument("empty envelope") when t_env is all zeros.
std::vector<std::size_t> approx_ao(std::span<const double> t_env);

/// Three cascaded forward-looking moving sums of |s| (window samples each).
std::vector<double> cardiac_cycle_envelope(std::span<const double> s, std::size_t window);

/// Peaks of the CCE: local maxima greedily accepted by height with a minimum
/// separation, then thresholded against the 90th-percentile height.
std::vector<std::size_t> cce_peaks(std::span<const double> cce, std::size_t min_separation,
                                   double min_rel_height);

/// Keeps, for each CCE peak k, the first candidate in (peak_k, peak_k + gate].
PeakList gate_candidates(std::span<const std::size_t> cce_peak_idx, std::span<const std::size_t> candidates,
                         std::size_t gate);

/// CCE construction, peak picking, structure check and gating.
PeakList cce_gate(const GdfmSet& g, std::span<const std::size_t> candidates, double fs,
                  const AoDetectParams& p, AoStages* stages = nullptr);

/// Full AO detector. Throws NoCardiacStructure on inputs without beats.
PeakList detect_ao(const SampledSignal& x, const AoDetectParams& p, AoStages* stages = nullptr);

} // namespace scgbp
