#include "scgbp/pac_detect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace scgbp {

void PacParams::validate() const {
    if (!(hp_cutoff_hz > 0.0)) throw std::invalid_argument("pac_detect.hp_cutoff_hz must be > 0");
    if (hp_order < 1) throw std::invalid_argument("pac_detect.hp_order must be >= 1");
    if (!(ma_window_ms > 0.0)) throw std::invalid_argument("pac_detect.ma_window_ms must be > 0");
}

SegmentBounds segment_bounds(std::size_t p_i, std::size_t p_next) {
    if (p_next <= p_i) throw std::invalid_argument("segment bounds need p_next > p_i");
    const double a = static_cast<double>(p_i);
    const double b = static_cast<double>(p_next);
    return {static_cast<std::size_t>(std::lround((3.0 * a + b) / 4.0)),
            static_cast<std::size_t>(std::lround((a + b) / 2.0))};
}

const char* to_string(PacStatus s) {
    switch (s) {
    case PacStatus::Found: return "found";
    case PacStatus::FlatSegment: return "flat_segment";
    case PacStatus::EdgeMaximum: return "edge_maximum";
    case PacStatus::TooShort: return "too_short";
    }
    return "unknown";
}

std::vector<PacResult> detect_pac(const SampledSignal& x, const PeakList& aos, const PacParams& p) {
    p.validate();
    if (aos.size() < 2) throw std::invalid_argument("pAC detection needs at least 2 AO peaks");
    if (aos[aos.size() - 1] >= x.size()) throw std::invalid_argument("AO index beyond signal end");

    std::size_t ma_len = x.ms_to_samples(p.ma_window_ms);
    if (ma_len % 2 == 0) ++ma_len;

    std::vector<PacResult> out;
    out.reserve(aos.size() - 1);
    for (std::size_t i = 0; i + 1 < aos.size(); ++i) {
        PacResult r{i, std::nullopt, PacStatus::Found};
        const auto [m2, m1] = segment_bounds(aos[i], aos[i + 1]);
        const std::size_t len = m1 - m2 + 1;
        if (m1 <= m2 + 2 || len < ma_len) {
            r.status = PacStatus::TooShort;
            out.push_back(r);
            continue;
        }

        std::vector<double> seg(x.samples().begin() + static_cast<std::ptrdiff_t>(m2),
                                x.samples().begin() + static_cast<std::ptrdiff_t>(m1 + 1));
        const double mean = std::accumulate(seg.begin(), seg.end(), 0.0) / static_cast<double>(len);
        double peak = 0.0;
        for (double& v : seg) {
            v -= mean;
            peak = std::max(peak, std::abs(v));
        }
        if (!(peak > 0.0)) {
            r.status = PacStatus::FlatSegment;
            out.push_back(r);
            continue;
        }
        for (double& v : seg) v /= peak;

        seg = moving_average(seg, ma_len);
        seg = highpass_iir(seg, x.fs(), p.hp_cutoff_hz, p.hp_order);

        const auto [lo, hi] = std::minmax_element(seg.begin(), seg.end());
        if (*hi - *lo < 1e-9) {
            r.status = PacStatus::FlatSegment;
            out.push_back(r);
            continue;
        }
        const auto best = static_cast<std::size_t>(std::distance(seg.begin(), hi));
        if (best == 0 || best + 1 == len) {
            r.status = PacStatus::EdgeMaximum;
        } else {
            r.index = m2 + best;
        }
        out.push_back(r);
    }
    return out;
}

} // namespace scgbp
