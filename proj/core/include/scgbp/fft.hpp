#pragma once

#include <complex>
#include <span>
#include <vector>

namespace scgbp::fft {

/// Unnormalized forward real FFT; returns bins 0..n/2.
std::vector<std::complex<double>> rfft(std::span<const double> x);

/// Inverse of rfft for a length-n real sequence (includes the 1/n factor).
std::vector<double> irfft(std::span<const std::complex<double>> half, std::size_t n);

/// Unnormalized inverse complex FFT scaled by 1/n.
std::vector<std::complex<double>> ifft(std::span<const std::complex<double>> spectrum);

} // namespace scgbp::fft
