#include "scgbp/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace scgbp::fft {

namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanGuard {
    fftw_plan plan = nullptr;
    ~PlanGuard() {
        if (plan) {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(plan);
        }
    }
};

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

} // namespace

std::vector<std::complex<double>> rfft(std::span<const double> x) {
    const int n = static_cast<int>(x.size());
    if (n == 0) return {};
    std::vector<double> in(x.begin(), x.end());
    std::vector<std::complex<double>> out(static_cast<std::size_t>(n / 2 + 1));
    PlanGuard g;
    {
        std::lock_guard lock(planner_mutex());
        g.plan = fftw_plan_dft_r2c_1d(n, in.data(), as_fftw(out.data()), FFTW_ESTIMATE);
    }
    if (!g.plan) throw std::runtime_error("fftw: failed to create r2c plan");
    fftw_execute(g.plan);
    return out;
}

std::vector<double> irfft(std::span<const std::complex<double>> half, std::size_t n) {
    if (n == 0) return {};
    if (half.size() != n / 2 + 1) throw std::invalid_argument("irfft: spectrum size does not match n");
    // c2r destroys its input
    std::vector<std::complex<double>> in(half.begin(), half.end());
    std::vector<double> out(n);
    PlanGuard g;
    {
        std::lock_guard lock(planner_mutex());
        g.plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), as_fftw(in.data()), out.data(), FFTW_ESTIMATE);
    }
    if (!g.plan) throw std::runtime_error("fftw: failed to create c2r plan");
    fftw_execute(g.plan);
    const double scale = 1.0 / static_cast<double>(n);
    for (double& v : out) v *= scale;
    return out;
}

std::vector<std::complex<double>> ifft(std::span<const std::complex<double>> spectrum) {
    const std::size_t n = spectrum.size();
    if (n == 0) return {};
    std::vector<std::complex<double>> in(spectrum.begin(), spectrum.end());
    std::vector<std::complex<double>> out(n);
    PlanGuard g;
    {
        std::lock_guard lock(planner_mutex());
        g.plan = fftw_plan_dft_1d(static_cast<int>(n), as_fftw(in.data()), as_fftw(out.data()),
                                  FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    if (!g.plan) throw std::runtime_error("fftw: failed to create c2c plan");
    fftw_execute(g.plan);
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& v : out) v *= scale;
    return out;
}

} // namespace scgbp::fft
