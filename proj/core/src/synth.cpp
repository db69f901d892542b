#include "scgbp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace scgbp {

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
    throw std::invalid_argument("synth." + field + " " + what);
}

double hr_at(const HrProfile& p, double t, double duration) {
    switch (p.kind) {
    case HrProfileKind::Constant: return p.lo_bpm;
    case HrProfileKind::Sweep: return p.lo_bpm + (p.hi_bpm - p.lo_bpm) * std::clamp(t / duration, 0.0, 1.0);
    case HrProfileKind::Sinusoid: {
        const double mid = 0.5 * (p.lo_bpm + p.hi_bpm);
        const double half = 0.5 * (p.hi_bpm - p.lo_bpm);
        return mid + half * std::sin(2.0 * kPi * t / p.period_s);
    }
    }
    return p.lo_bpm;
}

// Adds amp * window(t - centre) * carrier into out over +/- 5 widths.
template <class Carrier>
void add_wavelet(std::vector<double>& out, double fs, double centre_s, double width_s, double amp, Carrier carrier) {
    const double reach = 5.0 * width_s;
    const auto n = static_cast<std::ptrdiff_t>(out.size());
    const auto lo = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(std::floor((centre_s - reach) * fs)));
    const auto hi = std::min<std::ptrdiff_t>(n - 1, static_cast<std::ptrdiff_t>(std::ceil((centre_s + reach) * fs)));
    for (std::ptrdiff_t i = lo; i <= hi; ++i) {
        const double u = static_cast<double>(i) / fs - centre_s;
        out[static_cast<std::size_t>(i)] += amp * std::exp(-0.5 * u * u / (width_s * width_s)) * carrier(u);
    }
}

} // namespace

void SynthConfig::validate() const {
    if (!(duration_s >= 10.0)) invalid("duration_s", "must be >= 10 s");
    if (!(fs >= 200.0)) invalid("fs", "must be >= 200 Hz");
    if (!(hr.lo_bpm >= 40.0 && hr.lo_bpm <= 180.0)) invalid("hr.lo_bpm", "must lie in [40, 180]");
    if (hr.kind != HrProfileKind::Constant) {
        if (!(hr.hi_bpm >= 40.0 && hr.hi_bpm <= 180.0)) invalid("hr.hi_bpm", "must lie in [40, 180]");
        if (!(hr.hi_bpm >= hr.lo_bpm)) invalid("hr.hi_bpm", "must be >= hr.lo_bpm");
    }
    if (hr.kind == HrProfileKind::Sinusoid && !(hr.period_s > 0.0)) invalid("hr.period_s", "must be > 0");
    if (!(lvet.base_ms > 0.0)) invalid("lvet.base_ms", "must be > 0");
    if (!(lvet.jitter_ms >= 0.0)) invalid("lvet.jitter_ms", "must be >= 0");
    if (!(lvet.min_rr_frac > 0.0 && lvet.min_rr_frac < lvet.max_rr_frac && lvet.max_rr_frac < 1.0))
        invalid("lvet.min_rr_frac", "must satisfy 0 < min_rr_frac < max_rr_frac < 1");
    if (!(morphology.ao_amp > 0.0)) invalid("morphology.ao_amp", "must be > 0");
    if (!(morphology.ao_freq_hz > 0.0 && morphology.ao_freq_hz < fs / 2.0))
        invalid("morphology.ao_freq_hz", "must lie in (0, fs/2)");
    if (!(morphology.ao_width_ms > 0.0)) invalid("morphology.ao_width_ms", "must be > 0");
    if (!(morphology.ac_amp >= 0.0)) invalid("morphology.ac_amp", "must be >= 0");
    if (!(morphology.ac_freq_hz > 0.0 && morphology.ac_freq_hz < fs / 2.0))
        invalid("morphology.ac_freq_hz", "must lie in (0, fs/2)");
    if (!(morphology.ac_width_ms > 0.0)) invalid("morphology.ac_width_ms", "must be > 0");
    if (!(morphology.beat_amp_jitter >= 0.0 && morphology.beat_amp_jitter < 0.5))
        invalid("morphology.beat_amp_jitter", "must lie in [0, 0.5)");
    if (noise_snr_db && !std::isfinite(*noise_snr_db)) invalid("noise_snr_db", "must be finite");
    if (!(wander.amp >= 0.0)) invalid("wander.amp", "must be >= 0");
    if (!(wander.freq_hz > 0.0)) invalid("wander.freq_hz", "must be > 0");
    if (!(bp.sigma_mmHg >= 0.0)) invalid("bp.sigma_mmHg", "must be >= 0");
    if (!(abp.transit_ms >= 0.0)) invalid("abp.transit_ms", "must be >= 0");
    if (!(abp.rise_ms > 0.0)) invalid("abp.rise_ms", "must be > 0");
    if (!(abp.decay_ms > 0.0)) invalid("abp.decay_ms", "must be > 0");
}

double first_positive_lobe_offset(double freq_hz, double width_s) {
    // d/du [sin(wu) e^{-u^2/2s^2}] = 0  <=>  w cos(wu) - (u/s^2) sin(wu) = 0,
    // which changes sign exactly once on (0, 1/(4f)).
    const double w = 2.0 * kPi * freq_hz;
    const double s2 = width_s * width_s;
    auto g = [&](double u) { return w * std::cos(w * u) - u / s2 * std::sin(w * u); };
    double lo = 0.0, hi = 0.25 / freq_hz;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

SynthOutput generate(const SynthConfig& cfg, const std::string& subject_id) {
    cfg.validate();
    const double fs = cfg.fs;
    const auto n = static_cast<std::size_t>(std::llround(cfg.duration_s * fs));
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // AO instants on the sample grid, plus one past the end for the last RR.
    std::vector<std::size_t> ao;
    {
        double t = 0.35;
        while (true) {
            const auto idx = static_cast<std::size_t>(std::llround(t * fs));
            ao.push_back(idx);
            if (idx >= n) break;
            t += 60.0 / hr_at(cfg.hr, t, cfg.duration_s);
        }
    }
    const std::size_t beats = ao.size() - 1;

    SynthGroundTruth truth;
    const auto& mo = cfg.morphology;
    const double ac_offset_s = first_positive_lobe_offset(mo.ac_freq_hz, mo.ac_width_ms / 1000.0);
    for (std::size_t k = 0; k < beats; ++k) {
        const double rr_ms = static_cast<double>(ao[k + 1] - ao[k]) * 1000.0 / fs;
        const double hr = 60000.0 / rr_ms;
        double lvet = cfg.lvet.base_ms - cfg.lvet.slope_ms_per_bpm * (hr - 60.0) + cfg.lvet.jitter_ms * gauss(rng);
        lvet = std::clamp(lvet, cfg.lvet.min_rr_frac * rr_ms, cfg.lvet.max_rr_frac * rr_ms);
        lvet = std::clamp(lvet, 150.0, 450.0);
        const auto pac = ao[k] + static_cast<std::size_t>(std::llround(lvet * fs / 1000.0));
        const double lvet_exact = static_cast<double>(pac - ao[k]) * 1000.0 / fs;

        const double sbp = cfg.bp.sbp.a * std::log(lvet_exact) + cfg.bp.sbp.b * hr + cfg.bp.sbp.c +
                           cfg.bp.sigma_mmHg * gauss(rng);
        const double dbp = cfg.bp.dbp.a * std::log(lvet_exact) + cfg.bp.dbp.b * hr + cfg.bp.dbp.c +
                           cfg.bp.sigma_mmHg * gauss(rng);

        truth.ao_idx.push_back(ao[k]);
        truth.pac_idx.push_back(pac);
        truth.ao_ms.push_back(static_cast<double>(ao[k]) * 1000.0 / fs);
        truth.pac_ms.push_back(static_cast<double>(pac) * 1000.0 / fs);
        truth.ac_ms.push_back(truth.pac_ms.back() - ac_offset_s * 1000.0);
        truth.lvet_ms.push_back(lvet_exact);
        truth.hr_bpm.push_back(hr);
        truth.sbp_mmHg.push_back(sbp);
        truth.dbp_mmHg.push_back(dbp);
    }

    // SCG: AO and AC complexes per beat.
    std::vector<double> scg(n, 0.0);
    const double ao_w = 2.0 * kPi * mo.ao_freq_hz;
    const double ac_w = 2.0 * kPi * mo.ac_freq_hz;
    for (std::size_t k = 0; k < beats; ++k) {
        const double amp = std::max(0.5, 1.0 + mo.beat_amp_jitter * gauss(rng));
        add_wavelet(scg, fs, truth.ao_ms[k] / 1000.0, mo.ao_width_ms / 1000.0, amp * mo.ao_amp,
                    [&](double u) { return std::cos(ao_w * u); });
        if (mo.ac_amp > 0.0) {
            add_wavelet(scg, fs, truth.ac_ms[k] / 1000.0, mo.ac_width_ms / 1000.0, amp * mo.ac_amp,
                        [&](double u) { return std::sin(ac_w * u); });
        }
    }

    if (cfg.noise_snr_db) {
        double power = 0.0;
        for (double v : scg) power += v * v;
        power /= static_cast<double>(n);
        const double sigma = std::sqrt(power / std::pow(10.0, *cfg.noise_snr_db / 10.0));
        for (double& v : scg) v += sigma * gauss(rng);
    }
    if (cfg.wander.amp > 0.0) {
        const double phase = 2.0 * kPi * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / fs;
            scg[i] += cfg.wander.amp * mo.ao_amp * std::sin(2.0 * kPi * cfg.wander.freq_hz * t + phase);
        }
    }

    // ABP: raised-cosine upstroke from DBP_k at the foot to SBP_k, then a
    // normalized exponential decay that lands on DBP_{k+1} at the next foot.
    std::vector<double> abp(n, beats ? truth.dbp_mmHg.front() : 80.0);
    const auto transit = static_cast<std::size_t>(std::llround(cfg.abp.transit_ms * fs / 1000.0));
    const double tau_decay = cfg.abp.decay_ms * fs / 1000.0;
    for (std::size_t k = 0; k < beats; ++k) {
        const std::size_t rr = ao[k + 1] - ao[k];
        const double rise_cap = 0.3 * static_cast<double>(rr);
        const auto rise = static_cast<std::size_t>(
            std::max(1.0, std::min(std::round(cfg.abp.rise_ms * fs / 1000.0), std::floor(rise_cap))));
        const std::size_t foot = ao[k] + transit;
        const std::size_t peak = foot + rise;
        const bool has_next = k + 1 < beats;
        const std::size_t next_foot = has_next ? ao[k + 1] + transit : n;
        const double target = has_next ? truth.dbp_mmHg[k + 1] : truth.dbp_mmHg[k];
        const double sbp = truth.sbp_mmHg[k], dbp = truth.dbp_mmHg[k];

        for (std::size_t i = foot; i <= peak && i < n; ++i) {
            const double u = static_cast<double>(i - foot) / static_cast<double>(rise);
            abp[i] = dbp + (sbp - dbp) * 0.5 * (1.0 - std::cos(kPi * u));
        }
        const double span = static_cast<double>(next_foot - peak);
        const double floor_term = std::exp(-span / tau_decay);
        for (std::size_t i = peak + 1; i < next_foot && i < n; ++i) {
            const double u = static_cast<double>(i - peak);
            abp[i] = target + (sbp - target) * (std::exp(-u / tau_decay) - floor_term) / (1.0 - floor_term);
        }
    }

    Recording rec{subject_id, SampledSignal(std::move(scg), fs, "scg_z"), SampledSignal(std::move(abp), fs, "abp"),
                  std::nullopt, std::nullopt};
    return {std::move(rec), std::move(truth)};
}

} // namespace scgbp
