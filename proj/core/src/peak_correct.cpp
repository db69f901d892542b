#include "scgbp/peak_correct.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scgbp {

void CorrectionParams::validate() const {
    if (!(th_frac > 0.0 && th_frac < 1.0)) throw std::invalid_argument("peak_correct.th_frac must lie in (0, 1)");
    if (!(tau_search_ms > 0.0)) throw std::invalid_argument("peak_correct.tau_search_ms must be > 0");
    if (max_passes < 1) throw std::invalid_argument("peak_correct.max_passes must be >= 1");
}

double median_interval(const std::vector<std::size_t>& peaks) {
    if (peaks.size() < 2) throw std::invalid_argument("median interval needs at least 2 peaks");
    std::vector<double> d(peaks.size() - 1);
    for (std::size_t i = 0; i + 1 < peaks.size(); ++i) d[i] = static_cast<double>(peaks[i + 1] - peaks[i]);
    std::sort(d.begin(), d.end());
    const std::size_t mid = d.size() / 2;
    return d.size() % 2 ? d[mid] : 0.5 * (d[mid - 1] + d[mid]);
}

namespace {

double interval(const std::vector<std::size_t>& p, std::size_t i) {
    return static_cast<double>(p[i + 1] - p[i]);
}

// Index of the maximum of x over [first, last]; earliest wins.
std::size_t argmax_range(std::span<const double> x, std::size_t first, std::size_t last) {
    std::size_t best = first;
    for (std::size_t i = first + 1; i <= last; ++i) {
        if (x[i] > x[best]) best = i;
    }
    return best;
}

} // namespace

std::pair<PeakList, CorrectionReport> correct_peaks(const SampledSignal& x, const PeakList& pks,
                                                    const CorrectionParams& p) {
    p.validate();
    if (pks.size() < 3) throw std::invalid_argument("peak correction needs at least 3 peaks");

    std::vector<std::size_t> peaks = pks.indices();
    CorrectionReport report;
    const double tau = p.tau_search_ms * x.fs() / 1000.0;

    for (int pass = 0; pass < p.max_passes && peaks.size() >= 3; ++pass) {
        bool changed = false;
        report.passes = pass + 1;

        // Rules 1 and 2.
        std::size_t i = 0;
        while (i + 1 < peaks.size() && peaks.size() >= 3) {
            const double m = median_interval(peaks);
            const double th = p.th_frac * m;
            const double d = interval(peaks, i);

            if (d - m > 3.0 * th) {
                const auto missing = static_cast<std::size_t>(std::max(1.0, std::round(d / m) - 1.0));
                // integer samples strictly inside (p_i + tau, p_{i+1} - tau)
                const double lo = std::floor(static_cast<double>(peaks[i]) + tau) + 1.0;
                const double hi = std::ceil(static_cast<double>(peaks[i + 1]) - tau) - 1.0;
                std::vector<std::size_t> found;
                if (hi >= lo) {
                    const auto first = static_cast<std::size_t>(lo);
                    const auto span_len = static_cast<std::size_t>(hi - lo) + 1;
                    const std::size_t parts = std::min(missing, span_len);
                    for (std::size_t k = 0; k < parts; ++k) {
                        const std::size_t a = first + k * span_len / parts;
                        const std::size_t b = first + (k + 1) * span_len / parts - 1;
                        found.push_back(argmax_range(x.view(), a, std::min(b, x.size() - 1)));
                    }
                }
                if (!found.empty()) {
                    peaks.insert(peaks.begin() + static_cast<std::ptrdiff_t>(i + 1), found.begin(), found.end());
                    report.inserted.insert(report.inserted.end(), found.begin(), found.end());
                    changed = true;
                    i += found.size() + 1;
                    continue;
                }
                ++i;
            } else if (d - m < -0.7 * m) {
                report.removed_systole.push_back(peaks[i + 1]);
                peaks.erase(peaks.begin() + static_cast<std::ptrdiff_t>(i + 1));
                changed = true;
            } else {
                ++i;
            }
        }

        // Rule 3 on the updated list.
        i = 0;
        while (i + 2 < peaks.size() && peaks.size() >= 3) {
            const double m = median_interval(peaks);
            const double th = p.th_frac * m;
            if (interval(peaks, i) - m < -th && interval(peaks, i + 1) - m < -th) {
                report.removed_diastole.push_back(peaks[i + 1]);
                peaks.erase(peaks.begin() + static_cast<std::ptrdiff_t>(i + 1));
                changed = true;
            } else {
                ++i;
            }
        }

        if (!changed) break;
    }

    report.median_interval = peaks.size() >= 2 ? median_interval(peaks) : 0.0;
    return {PeakList(std::move(peaks)), report};
}

} // namespace scgbp
