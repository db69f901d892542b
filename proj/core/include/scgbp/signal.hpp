#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace scgbp {

/// Uniformly sampled, finite, real-valued channel.
class SampledSignal {
public:
    /// Throws std::invalid_argument if fs <= 0, fewer than two samples, or any
    /// sample is not finite.
    SampledSignal(std::vector<double> samples, double fs, std::string label = {});

    const std::vector<double>& samples() const noexcept { return samples_; }
    std::span<const double> view() const noexcept { return samples_; }
    double fs() const noexcept { return fs_; }
    const std::string& label() const noexcept { return label_; }
    std::size_t size() const noexcept { return samples_.size(); }
    double operator[](std::size_t i) const noexcept { return samples_[i]; }

    /// Same rate and label, new samples.
    SampledSignal with_samples(std::vector<double> samples) const;

    /// Sample count for a duration in ms, rounded to nearest.
    std::size_t ms_to_samples(double ms) const noexcept;
    double samples_to_ms(double n) const noexcept { return n * 1000.0 / fs_; }

private:
    std::vector<double> samples_;
    double fs_;
    std::string label_;
};

/// One subject's synchronously sampled channels. Only scg_z is required.
struct Recording {
    std::string subject_id;
    SampledSignal scg_z;
    std::optional<SampledSignal> abp;
    std::optional<SampledSignal> ecg;
    std::optional<SampledSignal> ppg;

    double fs() const noexcept { return scg_z.fs(); }
    std::size_t size() const noexcept { return scg_z.size(); }

    /// Checks that every present channel shares fs and length with scg_z.
    void validate() const;
};

/// Centered moving average. Near the edges the window is truncated to the
/// samples that exist, so the output keeps the input length.
std::vector<double> moving_average(std::span<const double> x, std::size_t window_len);
SampledSignal moving_average(const SampledSignal& x, std::size_t window_len);

/// Second-order section in transposed direct form II, a0 normalized to 1.
struct Biquad {
    double b0, b1, b2, a1, a2;
};

/// Digital Butterworth high-pass (bilinear transform, prewarped cutoff) as a
/// cascade of second-order sections. Odd orders end with a first-order section
/// stored as a biquad with b2 = a2 = 0.
std::vector<Biquad> butterworth_highpass(int order, double cutoff_hz, double fs);

/// Single forward pass through the cascade with zero initial state.
std::vector<double> sos_filter(std::span<const Biquad> sos, std::span<const double> x);

/// Zero-phase forward-backward filtering with odd-reflection padding and
/// steady-state initial conditions.
std::vector<double> sos_filtfilt(std::span<const Biquad> sos, std::span<const double> x);

std::vector<double> highpass_iir(std::span<const double> x, double fs, double cutoff_hz, int order);
SampledSignal highpass_iir(const SampledSignal& x, double cutoff_hz, int order);

struct AnalyticParts {
    std::vector<double> envelope;   ///< |x + j H{x}|
    std::vector<double> transform;  ///< H{x}
};

/// Analytic signal via the one-sided spectrum over the whole segment.
AnalyticParts hilbert_analytic(std::span<const double> x);
AnalyticParts hilbert_analytic(const SampledSignal& x);

struct PeakEnvelopes {
    std::vector<double> upper;
    std::vector<double> lower;
};

/// Indices of strict local maxima (plateaus report their first sample).
std::vector<std::size_t> local_maxima(std::span<const double> x);
std::vector<std::size_t> local_minima(std::span<const double> x);

/// Monotone piecewise-cubic (Fritsch-Carlson) interpolation of knots
/// (knot_x strictly increasing) evaluated at every integer in [0, n).
/// Outside the knot range the first/last knot value is held.
std::vector<double> pchip_fill(std::span<const std::size_t> knot_x,
                               std::span<const double> knot_y, std::size_t n);

/// Upper/lower envelopes through local maxima/minima. Throws
/// std::invalid_argument("too few extrema") with fewer than two of either.
PeakEnvelopes peak_envelopes(std::span<const double> x);
PeakEnvelopes peak_envelopes(const SampledSignal& x);

} // namespace scgbp
