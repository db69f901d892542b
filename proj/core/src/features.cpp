#include "scgbp/features.hpp"

#include <stdexcept>

namespace scgbp {

BeatExtraction extract_beats(const PeakList& aos, std::span<const PacResult> pacs, double fs) {
    if (aos.size() < 2) throw std::invalid_argument("beat extraction needs at least 2 AO peaks");
    if (!(fs > 0.0)) throw std::invalid_argument("sampling rate must be positive");

    std::vector<std::optional<std::size_t>> pac_of(aos.size() - 1);
    for (const auto& r : pacs) {
        if (r.interval < pac_of.size()) pac_of[r.interval] = r.index;
    }

    BeatExtraction out;
    for (std::size_t i = 0; i + 1 < aos.size(); ++i) {
        if (!pac_of[i]) {
            ++out.dropped_no_pac;
            continue;
        }
        const std::size_t ao = aos[i];
        const std::size_t pac = *pac_of[i];
        const double rr_ms = static_cast<double>(aos[i + 1] - ao) * 1000.0 / fs;
        const double hr = 60000.0 / rr_ms;
        const double lvet = (static_cast<double>(pac) - static_cast<double>(ao)) * 1000.0 / fs;
        if (pac <= ao || !(lvet > 0.0) || lvet >= rr_ms || hr < kMinHrBpm || hr > kMaxHrBpm) {
            ++out.dropped_guard;
            continue;
        }
        out.beats.push_back({i, ao, pac, lvet, hr});
    }
    return out;
}

} // namespace scgbp
