#include "scgbp/ao_detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace scgbp {

void AoDetectParams::validate() const {
    stage1.validate();
    stage2.validate();
    if (!(detrend_cutoff_hz > 0.0)) throw std::invalid_argument("ao_detect.detrend_cutoff_hz must be > 0");
    if (!(gauss_len_ms > 0.0)) throw std::invalid_argument("ao_detect.gauss_len_ms must be > 0");
    if (!(gauss_sigma > 0.0)) throw std::invalid_argument("ao_detect.gauss_sigma must be > 0");
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("ao_detect.rho must lie in [0, 1]");
    if (!(env_tau.value > 0.0)) throw std::invalid_argument("ao_detect.env_tau must be > 0");
    if (!(cce_window_ms > 0.0)) throw std::invalid_argument("ao_detect.cce_window_ms must be > 0");
    if (!(cce_min_separation_ms > 0.0)) throw std::invalid_argument("ao_detect.cce_min_separation_ms must be > 0");
    if (!(cce_min_rel_height >= 0.0 && cce_min_rel_height <= 1.0))
        throw std::invalid_argument("ao_detect.cce_min_rel_height must lie in [0, 1]");
    if (!(cce_min_prominence >= 0.0)) throw std::invalid_argument("ao_detect.cce_min_prominence must be >= 0");
    if (!(ao_gate_ms > 0.0)) throw std::invalid_argument("ao_detect.ao_gate_ms must be > 0");
    if (!(guard_ms >= 0.0)) throw std::invalid_argument("ao_detect.guard_ms must be >= 0");
}

SampledSignal detrend(const SampledSignal& x, const VmdParams& stage1, double cutoff_hz) {
    if (!(cutoff_hz > 0.0)) throw std::invalid_argument("detrend cutoff must be > 0");
    const auto trend = vmd_decompose(x, stage1);
    std::vector<double> out = x.samples();
    for (std::size_t k = 0; k < trend.modes.size(); ++k) {
        if (trend.center_freqs_hz[k] >= cutoff_hz) continue;
        const auto& mode = trend.modes[k];
        for (std::size_t i = 0; i < out.size(); ++i) out[i] -= mode[i];
    }
    return x.with_samples(std::move(out));
}

std::vector<double> gaussian_derivative_kernel(std::size_t len, double sigma) {
    if (len < 3 || len % 2 == 0) throw std::invalid_argument("gaussian kernel length must be odd and >= 3");
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian sigma must be > 0");
    const double half = static_cast<double>(len - 1) / 2.0;
    std::vector<double> g(len);
    for (std::size_t i = 0; i < len; ++i) {
        const double l = (static_cast<double>(i) - half) / half;
        g[i] = std::exp(-(l * l) / (sigma * sigma));
    }
    std::vector<double> d(len - 1);
    for (std::size_t m = 0; m + 1 < len; ++m) d[m] = g[m + 1] - g[m];
    return d;
}

std::vector<double> convolve_same(std::span<const double> x, std::span<const double> kernel) {
    const std::size_t n = x.size();
    const std::size_t k = kernel.size();
    const std::size_t offset = k / 2;
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        // y[i] = sum_m kernel[m] * x[i + offset - m]
        const std::size_t t = i + offset;
        const std::size_t m_lo = t >= n ? t - (n - 1) : 0;
        const std::size_t m_hi = std::min(k - 1, t);
        double acc = 0.0;
        for (std::size_t m = m_lo; m <= m_hi; ++m) acc += kernel[m] * x[t - m];
        y[i] = acc;
    }
    return y;
}

GdfmSet gdfm(const VmdResult& modes, std::size_t gauss_len, double gauss_sigma) {
    const auto kernel = gaussian_derivative_kernel(gauss_len, gauss_sigma);
    GdfmSet out;
    for (const auto& mode : modes.modes) {
        if (kernel.size() >= mode.size()) throw std::invalid_argument("gaussian kernel longer than mode");
        out.gdfms.push_back(convolve_same(mode, kernel));
    }
    return out;
}

void rge_select(GdfmSet& g, double rho) {
    const std::size_t k = g.gdfms.size();
    if (k == 0) throw std::invalid_argument("rge_select: no modes");

    std::vector<double> energy(k, 0.0);
    for (std::size_t j = 0; j < k; ++j)
        for (double v : g.gdfms[j]) energy[j] += v * v;
    const double total = std::accumulate(energy.begin(), energy.end(), 0.0);
    if (!(total > 0.0)) throw NoCardiacStructure("all filtered modes are silent");

    g.rge.resize(k);
    for (std::size_t j = 0; j < k; ++j) g.rge[j] = energy[j] / total;

    const auto best = static_cast<std::size_t>(std::distance(g.rge.begin(), std::max_element(g.rge.begin(), g.rge.end())));
    g.selected_mode = best;

    const bool use_lower = best > 0 && std::abs(g.rge[best] - g.rge[best - 1]) < rho;
    const bool use_upper = !use_lower && best + 1 < k && std::abs(g.rge[best] - g.rge[best + 1]) < rho;

    const std::size_t n = g.gdfms[best].size();
    g.selected.assign(n, 0.0);
    auto add = [&](std::size_t j) {
        const double w = g.rge[j] * g.rge[j];
        for (std::size_t i = 0; i < n; ++i) g.selected[i] += w * g.gdfms[j][i];
    };
    add(best);
    if (use_lower) add(best - 1);
    if (use_upper) add(best + 1);
}

std::vector<double> envelope_threshold(std::span<const double> s, const EnvThreshold& policy) {
    std::vector<double> t_env(s.size(), 0.0);
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    if (s.empty() || *hi == *lo) return t_env;

    const auto env = peak_envelopes(s);
    std::vector<double> d(s.size());
    double mean_sq = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        d[i] = env.upper[i] - env.lower[i];
        mean_sq += d[i] * d[i];
    }
    mean_sq /= static_cast<double>(s.size());

    const double tau = policy.mode == EnvThresholdMode::Relative ? policy.value * mean_sq : policy.value;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (d[i] * d[i] > tau) t_env[i] = d[i];
    }
    return t_env;
}

std::vector<std::size_t> approx_ao(std::span<const double> t_env) {
    if (std::all_of(t_env.begin(), t_env.end(), [](double v) { return v == 0.0; }))
        throw std::invalid_argument("empty envelope");
    const auto h = hilbert_analytic(t_env).transform;
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i < h.size(); ++i) {
        if (h[i - 1] < 0.0 && h[i] >= 0.0) out.push_back(i);
    }
    return out;
}

std::vector<double> cardiac_cycle_envelope(std::span<const double> s, std::size_t window) {
    if (window == 0) throw std::invalid_argument("cce window must be >= 1 sample");
    std::vector<double> cur(s.size());
    std::transform(s.begin(), s.end(), cur.begin(), [](double v) { return std::abs(v); });
    std::vector<double> prefix(s.size() + 1);
    for (int pass = 0; pass < 3; ++pass) {
        prefix[0] = 0.0;
        for (std::size_t i = 0; i < cur.size(); ++i) prefix[i + 1] = prefix[i] + cur[i];
        for (std::size_t i = 0; i < cur.size(); ++i) {
            const std::size_t hi = std::min(cur.size(), i + window);
            cur[i] = prefix[hi] - prefix[i];
        }
    }
    return cur;
}

std::vector<std::size_t> cce_peaks(std::span<const double> cce, std::size_t min_separation, double min_rel_height) {
    auto candidates = local_maxima(cce);
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) { return cce[a] > cce[b]; });

    std::vector<std::size_t> accepted; // kept sorted by index
    for (std::size_t c : candidates) {
        auto it = std::lower_bound(accepted.begin(), accepted.end(), c);
        const bool clear_right = it == accepted.end() || *it - c >= min_separation;
        const bool clear_left = it == accepted.begin() || c - *std::prev(it) >= min_separation;
        if (clear_left && clear_right) accepted.insert(it, c);
    }
    if (accepted.empty()) return accepted;

    std::vector<double> heights;
    heights.reserve(accepted.size());
    for (std::size_t i : accepted) heights.push_back(cce[i]);
    std::sort(heights.begin(), heights.end());
    const auto rank = static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(heights.size())));
    const double reference = heights[std::max<std::size_t>(rank, 1) - 1];

    std::vector<std::size_t> out;
    for (std::size_t i : accepted) {
        if (cce[i] >= min_rel_height * reference) out.push_back(i);
    }
    return out;
}

PeakList gate_candidates(std::span<const std::size_t> cce_peak_idx, std::span<const std::size_t> candidates,
                         std::size_t gate) {
    std::vector<std::size_t> sorted(candidates.begin(), candidates.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> out;
    for (std::size_t peak : cce_peak_idx) {
        const std::size_t floor = out.empty() ? peak : std::max(peak, out.back());
        auto it = std::upper_bound(sorted.begin(), sorted.end(), floor);
        if (it != sorted.end() && *it <= peak + gate) out.push_back(*it);
    }
    return PeakList(std::move(out));
}

namespace {

double median_of(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
    }
    return m;
}

std::size_t ms_to_count(double ms, double fs) {
    const double n = std::round(ms * fs / 1000.0);
    return n <= 0.0 ? 0 : static_cast<std::size_t>(n);
}

} // namespace

PeakList cce_gate(const GdfmSet& g, std::span<const std::size_t> candidates, double fs, const AoDetectParams& p,
                  AoStages* stages) {
    if (candidates.empty()) throw std::invalid_argument("cce_gate: no candidates");
    const std::size_t window = std::max<std::size_t>(1, ms_to_count(p.cce_window_ms, fs));
    auto cce = cardiac_cycle_envelope(g.selected, window);
    auto peaks = cce_peaks(cce, std::max<std::size_t>(1, ms_to_count(p.cce_min_separation_ms, fs)),
                           p.cce_min_rel_height);

    if (stages) {
        stages->cce = cce;
        stages->cce_peaks = peaks;
    }
    if (peaks.size() < 2) throw NoCardiacStructure("fewer than two cardiac cycle envelope peaks");

    std::vector<double> at_peaks;
    for (std::size_t i : peaks) at_peaks.push_back(cce[i]);
    const double floor = median_of(cce);
    const double prominence = floor > 0.0 ? median_of(at_peaks) / floor : std::numeric_limits<double>::infinity();
    if (prominence < p.cce_min_prominence) throw NoCardiacStructure("cardiac cycle envelope is flat");

    return gate_candidates(peaks, candidates, ms_to_count(p.ao_gate_ms, fs));
}

PeakList detect_ao(const SampledSignal& x, const AoDetectParams& p, AoStages* stages) {
    p.validate();
    const double fs = x.fs();

    const auto detrended = detrend(x, p.stage1, p.detrend_cutoff_hz);
    const auto modes = vmd_decompose(detrended, p.stage2);

    std::size_t len = ms_to_count(p.gauss_len_ms, fs);
    if (len % 2 == 0) ++len;
    len = std::max<std::size_t>(len, 3);
    auto g = gdfm(modes, len, p.gauss_sigma);
    rge_select(g, p.rho);

    const auto t_env = envelope_threshold(g.selected, p.env_tau);
    std::vector<std::size_t> candidates;
    try {
        candidates = approx_ao(t_env);
    } catch (const std::invalid_argument&) {
        throw NoCardiacStructure("thresholded envelope is empty");
    }

    if (stages) {
        stages->detrended = detrended.samples();
        stages->reconstructed = g.selected;
        stages->t_env = t_env;
        stages->candidates = candidates;
        stages->stage2_center_freqs_hz = modes.center_freqs_hz;
        stages->rge = g.rge;
    }
    if (candidates.empty()) throw NoCardiacStructure("no envelope zero crossings");

    const auto gated = cce_gate(g, candidates, fs, p, stages);

    const std::size_t guard = ms_to_count(p.guard_ms, fs);
    std::vector<std::size_t> kept;
    for (std::size_t i : gated) {
        if (i >= guard && i + guard < x.size()) kept.push_back(i);
    }
    if (kept.empty()) throw NoCardiacStructure("no aortic opening detected");
    return PeakList(std::move(kept));
}

} // namespace scgbp
