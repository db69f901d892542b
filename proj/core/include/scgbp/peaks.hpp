#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace scgbp {

/// Strictly increasing sample indices of detected fiducials.
class PeakList {
public:
    PeakList() = default;
    /// Throws std::invalid_argument unless strictly increasing.
    explicit PeakList(std::vector<std::size_t> idx);
    PeakList(std::initializer_list<std::size_t> idx) : PeakList(std::vector<std::size_t>(idx)) {}

    const std::vector<std::size_t>& indices() const noexcept { return idx_; }
    std::size_t size() const noexcept { return idx_.size(); }
    bool empty() const noexcept { return idx_.empty(); }
    std::size_t operator[](std::size_t i) const noexcept { return idx_[i]; }
    auto begin() const noexcept { return idx_.begin(); }
    auto end() const noexcept { return idx_.end(); }

    friend bool operator==(const PeakList&, const PeakList&) = default;

private:
    std::vector<std::size_t> idx_;
};

} // namespace scgbp
