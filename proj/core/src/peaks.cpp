#include "scgbp/peaks.hpp"

#include <stdexcept>

namespace scgbp {

PeakList::PeakList(std::vector<std::size_t> idx) : idx_(std::move(idx)) {
    for (std::size_t i = 1; i < idx_.size(); ++i) {
        if (idx_[i] <= idx_[i - 1]) throw std::invalid_argument("peak list must be strictly increasing");
    }
}

} // namespace scgbp
