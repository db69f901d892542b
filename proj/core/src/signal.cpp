#include "scgbp/signal.hpp"

#include "scgbp/fft.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace scgbp {

SampledSignal::SampledSignal(std::vector<double> samples, double fs, std::string label)
    : samples_(std::move(samples)), fs_(fs), label_(std::move(label)) {
    if (!(fs_ > 0.0) || !std::isfinite(fs_)) throw std::invalid_argument("sampling rate must be positive");
    if (samples_.size() < 2) throw std::invalid_argument("signal needs at least 2 samples");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!std::isfinite(samples_[i]))
            throw std::invalid_argument("non-finite sample at index " + std::to_string(i));
    }
}

SampledSignal SampledSignal::with_samples(std::vector<double> samples) const {
    return SampledSignal(std::move(samples), fs_, label_);
}

std::size_t SampledSignal::ms_to_samples(double ms) const noexcept {
    const double n = std::round(ms * fs_ / 1000.0);
    return n <= 0.0 ? 0 : static_cast<std::size_t>(n);
}

void Recording::validate() const {
    auto check = [&](const std::optional<SampledSignal>& ch, const char* name) {
        if (!ch) return;
        if (ch->fs() != scg_z.fs())
            throw std::invalid_argument(std::string("channel ") + name + " sampling rate differs from scg_z");
        if (ch->size() != scg_z.size())
            throw std::invalid_argument(std::string("channel ") + name + " length differs from scg_z");
    };
    check(abp, "abp");
    check(ecg, "ecg");
    check(ppg, "ppg");
}

// --- moving average ---------------------------------------------------------

std::vector<double> moving_average(std::span<const double> x, std::size_t window_len) {
    const std::size_t n = x.size();
    if (window_len == 0 || window_len % 2 == 0)
        throw std::invalid_argument("moving average window must be odd and >= 1");
    if (window_len > n) throw std::invalid_argument("moving average window longer than signal");
    if (window_len == 1) return {x.begin(), x.end()};

    const std::size_t half = window_len / 2;
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(n - 1, i + half);
        out[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
    }
    return out;
}

SampledSignal moving_average(const SampledSignal& x, std::size_t window_len) {
    return x.with_samples(moving_average(x.view(), window_len));
}

// --- Butterworth high-pass --------------------------------------------------

std::vector<Biquad> butterworth_highpass(int order, double cutoff_hz, double fs) {
    if (order < 1) throw std::invalid_argument("filter order must be >= 1");
    if (!(fs > 0.0)) throw std::invalid_argument("sampling rate must be positive");
    if (!(cutoff_hz > 0.0) || cutoff_hz >= fs / 2.0)
        throw std::invalid_argument("cutoff must lie strictly between 0 and Nyquist");

    using cd = std::complex<double>;
    const double pi = std::numbers::pi;
    const double two_fs = 2.0 * fs;
    const double warped = two_fs * std::tan(pi * cutoff_hz / fs);

    auto bilinear = [&](cd s) { return (two_fs + s) / (two_fs - s); };

    std::vector<Biquad> sos;
    for (int k = 0; k < order / 2; ++k) {
        const double theta = pi * (2.0 * k + order + 1) / (2.0 * order);
        const cd proto = std::polar(1.0, theta);
        const cd z = bilinear(warped / proto);
        const double a1 = -2.0 * z.real();
        const double a2 = std::norm(z);
        // unit gain at Nyquist, where the zeros at z = 1 give 4
        const double g = (1.0 - a1 + a2) / 4.0;
        sos.push_back({g, -2.0 * g, g, a1, a2});
    }
    if (order % 2 == 1) {
        const cd z = bilinear(cd(-warped, 0.0));
        const double a1 = -z.real();
        const double g = (1.0 - a1) / 2.0;
        sos.push_back({g, -g, 0.0, a1, 0.0});
    }
    return sos;
}

namespace {

struct SectionState {
    double z1 = 0.0, z2 = 0.0;
};

void run_cascade(std::span<const Biquad> sos, std::vector<SectionState>& state, std::vector<double>& x) {
    for (std::size_t s = 0; s < sos.size(); ++s) {
        const Biquad& q = sos[s];
        double z1 = state[s].z1, z2 = state[s].z2;
        for (double& v : x) {
            const double in = v;
            const double out = q.b0 * in + z1;
            z1 = q.b1 * in - q.a1 * out + z2;
            z2 = q.b2 * in - q.a2 * out;
            v = out;
        }
        state[s] = {z1, z2};
    }
}

// Steady-state section states for a constant unit input, chained through the
// cascade gains.
std::vector<SectionState> steady_state(std::span<const Biquad> sos) {
    std::vector<SectionState> zi(sos.size());
    double u = 1.0;
    for (std::size_t s = 0; s < sos.size(); ++s) {
        const Biquad& q = sos[s];
        const double h = (q.b0 + q.b1 + q.b2) / (1.0 + q.a1 + q.a2);
        const double y = h * u;
        const double z2 = q.b2 * u - q.a2 * y;
        const double z1 = q.b1 * u - q.a1 * y + z2;
        zi[s] = {z1, z2};
        u = y;
    }
    return zi;
}

std::vector<SectionState> scaled(const std::vector<SectionState>& zi, double k) {
    auto out = zi;
    for (auto& s : out) {
        s.z1 *= k;
        s.z2 *= k;
    }
    return out;
}

} // namespace

std::vector<double> sos_filter(std::span<const Biquad> sos, std::span<const double> x) {
    std::vector<double> y(x.begin(), x.end());
    std::vector<SectionState> state(sos.size());
    run_cascade(sos, state, y);
    return y;
}

std::vector<double> sos_filtfilt(std::span<const Biquad> sos, std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("filtfilt needs at least 2 samples");

    std::size_t taps = 2 * sos.size() + 1;
    const auto first_order = static_cast<std::size_t>(
        std::count_if(sos.begin(), sos.end(), [](const Biquad& q) { return q.b2 == 0.0 && q.a2 == 0.0; }));
    taps -= first_order;
    const std::size_t edge = std::min(3 * taps, n - 1);

    std::vector<double> ext;
    ext.reserve(n + 2 * edge);
    for (std::size_t i = edge; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
    ext.insert(ext.end(), x.begin(), x.end());
    for (std::size_t i = 1; i <= edge; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

    const auto zi = steady_state(sos);

    auto state = scaled(zi, ext.front());
    run_cascade(sos, state, ext);

    std::reverse(ext.begin(), ext.end());
    state = scaled(zi, ext.front());
    run_cascade(sos, state, ext);
    std::reverse(ext.begin(), ext.end());

    return {ext.begin() + static_cast<std::ptrdiff_t>(edge),
            ext.begin() + static_cast<std::ptrdiff_t>(edge + n)};
}

std::vector<double> highpass_iir(std::span<const double> x, double fs, double cutoff_hz, int order) {
    const auto sos = butterworth_highpass(order, cutoff_hz, fs);
    return sos_filtfilt(sos, x);
}

SampledSignal highpass_iir(const SampledSignal& x, double cutoff_hz, int order) {
    return x.with_samples(highpass_iir(x.view(), x.fs(), cutoff_hz, order));
}

// --- Hilbert ----------------------------------------------------------------

AnalyticParts hilbert_analytic(std::span<const double> x) {
    const std::size_t n = x.size();
    AnalyticParts out;
    if (n == 0) return out;

    const auto half = fft::rfft(x);
    std::vector<std::complex<double>> spec(n, {0.0, 0.0});
    spec[0] = half[0];
    const std::size_t positive_end = (n + 1) / 2; // exclusive
    for (std::size_t k = 1; k < positive_end; ++k) spec[k] = 2.0 * half[k];
    if (n % 2 == 0) spec[n / 2] = half[n / 2];

    const auto z = fft::ifft(spec);
    out.envelope.resize(n);
    out.transform.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.envelope[i] = std::abs(z[i]);
        out.transform[i] = z[i].imag();
    }
    return out;
}

AnalyticParts hilbert_analytic(const SampledSignal& x) { return hilbert_analytic(x.view()); }

// --- extrema and envelopes --------------------------------------------------

namespace {

template <class Cmp>
std::vector<std::size_t> extrema(std::span<const double> x, Cmp beyond) {
    std::vector<std::size_t> idx;
    const std::size_t n = x.size();
    std::size_t i = 1;
    while (i + 1 < n) {
        if (beyond(x[i], x[i - 1])) {
            std::size_t j = i;
            while (j + 1 < n && x[j + 1] == x[i]) ++j;
            if (j + 1 < n && beyond(x[i], x[j + 1])) idx.push_back(i);
            i = j + 1;
        } else {
            ++i;
        }
    }
    return idx;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

double edge_slope(double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (sign_of(s) != sign_of(d0)) {
        s = 0.0;
    } else if (sign_of(d0) != sign_of(d1) && std::abs(s) > std::abs(3.0 * d0)) {
        s = 3.0 * d0;
    }
    return s;
}

} // namespace

std::vector<std::size_t> local_maxima(std::span<const double> x) {
    return extrema(x, [](double a, double b) { return a > b; });
}

std::vector<std::size_t> local_minima(std::span<const double> x) {
    return extrema(x, [](double a, double b) { return a < b; });
}

std::vector<double> pchip_fill(std::span<const std::size_t> knot_x, std::span<const double> knot_y,
                               std::size_t n) {
    const std::size_t m = knot_x.size();
    if (m == 0 || m != knot_y.size()) throw std::invalid_argument("pchip: knot arrays empty or mismatched");
    std::vector<double> out(n);
    if (m == 1) {
        std::fill(out.begin(), out.end(), knot_y[0]);
        return out;
    }

    std::vector<double> h(m - 1), delta(m - 1);
    for (std::size_t k = 0; k + 1 < m; ++k) {
        if (knot_x[k + 1] <= knot_x[k]) throw std::invalid_argument("pchip: knots must be strictly increasing");
        h[k] = static_cast<double>(knot_x[k + 1] - knot_x[k]);
        delta[k] = (knot_y[k + 1] - knot_y[k]) / h[k];
    }

    std::vector<double> d(m, 0.0);
    if (m == 2) {
        d[0] = d[1] = delta[0];
    } else {
        for (std::size_t k = 1; k + 1 < m; ++k) {
            if (delta[k - 1] * delta[k] <= 0.0) continue;
            const double w1 = 2.0 * h[k] + h[k - 1];
            const double w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
        d[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
        d[m - 1] = edge_slope(h[m - 2], h[m - 3], delta[m - 2], delta[m - 3]);
    }

    std::size_t seg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i <= knot_x.front()) {
            out[i] = knot_y.front();
            continue;
        }
        if (i >= knot_x.back()) {
            out[i] = knot_y.back();
            continue;
        }
        while (knot_x[seg + 1] < i) ++seg;
        const double t = (static_cast<double>(i) - static_cast<double>(knot_x[seg])) / h[seg];
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1;
        const double h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2;
        const double h11 = t3 - t2;
        out[i] = h00 * knot_y[seg] + h10 * h[seg] * d[seg] + h01 * knot_y[seg + 1] + h11 * h[seg] * d[seg + 1];
    }
    return out;
}

PeakEnvelopes peak_envelopes(std::span<const double> x) {
    const auto maxima = local_maxima(x);
    const auto minima = local_minima(x);
    if (maxima.size() < 2 || minima.size() < 2) throw std::invalid_argument("too few extrema");

    std::vector<double> ymax(maxima.size()), ymin(minima.size());
    for (std::size_t k = 0; k < maxima.size(); ++k) ymax[k] = x[maxima[k]];
    for (std::size_t k = 0; k < minima.size(); ++k) ymin[k] = x[minima[k]];

    PeakEnvelopes env{pchip_fill(maxima, ymax, x.size()), pchip_fill(minima, ymin, x.size())};
    // Held endpoint values can cross; collapse to the midpoint there.
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (env.upper[i] < env.lower[i]) {
            const double mid = 0.5 * (env.upper[i] + env.lower[i]);
            env.upper[i] = env.lower[i] = mid;
        }
    }
    return env;
}

PeakEnvelopes peak_envelopes(const SampledSignal& x) { return peak_envelopes(x.view()); }

} // namespace scgbp
