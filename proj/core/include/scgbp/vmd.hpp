#pragma once

#include "scgbp/signal.hpp"

#include <cstdint>
#include <vector>

namespace scgbp {

enum class VmdInit { Uniform, Zero, Random };

struct VmdParams {
    int k = 5;                 ///< number of modes
    double alpha = 2000.0;     ///< bandwidth penalty
    double tau_dual = 0.0;     ///< dual ascent step; 0 lets modes absorb less than the full input
    double tol = 1e-6;         ///< relative squared change of the mode spectra (and of the residual when tau_dual > 0)
    int max_iter = 500;
    VmdInit init = VmdInit::Uniform;
    std::uint64_t seed = 0;    ///< used by VmdInit::Random only

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct VmdResult {
    std::vector<std::vector<double>> modes;  ///< sorted by center frequency
    std::vector<double> center_freqs_hz;     ///< non-decreasing, in [0, fs/2]
    int iterations = 0;
    bool converged = false;
};

/// Variational mode decomposition (ADMM in the frequency domain) of a
/// mirror-extended copy of x. Non-convergence is reported through
/// VmdResult::converged, not thrown.
VmdResult vmd_decompose(const SampledSignal& x, const VmdParams& p);

} // namespace scgbp
