#include "scgbp/vmd.hpp"

#include "scgbp/fft.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace scgbp {

void VmdParams::validate() const {
    if (k < 1) throw std::invalid_argument("vmd.k must be >= 1");
    if (!(alpha > 0.0)) throw std::invalid_argument("vmd.alpha must be > 0");
    if (!(tau_dual >= 0.0)) throw std::invalid_argument("vmd.tau_dual must be >= 0");
    if (!(tol > 0.0)) throw std::invalid_argument("vmd.tol must be > 0");
    if (max_iter < 1) throw std::invalid_argument("vmd.max_iter must be >= 1");
}

namespace {

using cd = std::complex<double>;

std::vector<double> initial_omegas(const VmdParams& p) {
    std::vector<double> omega(static_cast<std::size_t>(p.k), 0.0);
    switch (p.init) {
    case VmdInit::Uniform:
        for (int i = 0; i < p.k; ++i) omega[static_cast<std::size_t>(i)] = 0.5 / p.k * i;
        break;
    case VmdInit::Zero:
        break;
    case VmdInit::Random: {
        std::mt19937_64 rng(p.seed);
        // 53 random mantissa bits, independent of the standard library's
        // distribution implementation
        for (auto& w : omega) w = 0.5 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
        std::sort(omega.begin(), omega.end());
        break;
    }
    }
    return omega;
}

} // namespace

VmdResult vmd_decompose(const SampledSignal& x, const VmdParams& p) {
    p.validate();
    const std::size_t n = x.size();
    const auto k_modes = static_cast<std::size_t>(p.k);
    if (n < 8 * k_modes) throw std::invalid_argument("vmd: signal shorter than 8 samples per mode");

    // Mirror extension: n/2 reflected samples on the left, the rest on the right.
    const std::size_t left = n / 2;
    const std::size_t right = n - left;
    std::vector<double> ext;
    ext.reserve(2 * n);
    for (std::size_t i = left; i-- > 0;) ext.push_back(x[i]);
    ext.insert(ext.end(), x.samples().begin(), x.samples().end());
    for (std::size_t i = 0; i < right; ++i) ext.push_back(x[n - 1 - i]);
    const std::size_t big_n = ext.size();

    const auto spectrum = fft::rfft(ext);
    const std::size_t bins = spectrum.size();
    std::vector<double> freq(bins);
    for (std::size_t b = 0; b < bins; ++b) freq[b] = static_cast<double>(b) / static_cast<double>(big_n);

    std::vector<std::vector<cd>> u(k_modes, std::vector<cd>(bins, cd{}));
    std::vector<cd> total(bins, cd{});
    std::vector<cd> lambda(bins, cd{});
    std::vector<cd> previous(bins);
    std::vector<double> omega = initial_omegas(p);

    VmdResult result;
    const double two_alpha = 2.0 * p.alpha;

    for (int iter = 1; iter <= p.max_iter; ++iter) {
        double change = 0.0;
        double norm = 0.0;
        for (std::size_t m = 0; m < k_modes; ++m) {
            auto& um = u[m];
            previous = um;
            const double w = omega[m];
            double power = 0.0;
            double weighted = 0.0;
            for (std::size_t b = 0; b < bins; ++b) {
                const cd others = total[b] - um[b];
                const double df = freq[b] - w;
                const cd next = (spectrum[b] - others + 0.5 * lambda[b]) / (1.0 + two_alpha * df * df);
                um[b] = next;
                total[b] = others + next;
                const double pw = std::norm(next);
                power += pw;
                weighted += freq[b] * pw;
                change += std::norm(next - previous[b]);
                norm += pw;
            }
            if (power > 0.0) omega[m] = weighted / power;
        }
        // with dual ascent the primal residual must close as well
        double residual_rel = 0.0;
        if (p.tau_dual > 0.0) {
            double res = 0.0, sig = 0.0;
            for (std::size_t b = 0; b < bins; ++b) {
                const cd r = spectrum[b] - total[b];
                lambda[b] += p.tau_dual * r;
                res += std::norm(r);
                sig += std::norm(spectrum[b]);
            }
            residual_rel = sig > 0.0 ? res / sig : 0.0;
        }
        result.iterations = iter;
        const double rel = norm > 0.0 ? change / norm : 0.0;
        if (rel < p.tol && residual_rel < p.tol) {
            result.converged = true;
            break;
        }
    }

    std::vector<std::size_t> order(k_modes);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return omega[a] < omega[b]; });

    const double nyquist = x.fs() / 2.0;
    for (std::size_t m : order) {
        const auto full = fft::irfft(u[m], big_n);
        result.modes.emplace_back(full.begin() + static_cast<std::ptrdiff_t>(left),
                                  full.begin() + static_cast<std::ptrdiff_t>(left + n));
        result.center_freqs_hz.push_back(std::clamp(omega[m] * x.fs(), 0.0, nyquist));
    }
    return result;
}

} // namespace scgbp
