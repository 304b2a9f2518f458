#pragma once

#include <cstddef>
#include <vector>

namespace invmerton {

/// Uniform grid with `n` nodes on [start, stop].
class Grid1D {
public:
    Grid1D(double start, double stop, std::size_t n);

    [[nodiscard]] double start() const noexcept { return start_; }
    [[nodiscard]] double stop() const noexcept { return stop_; }
    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] double spacing() const noexcept { return (stop_ - start_) / static_cast<double>(n_ - 1); }

    /// Node i; the last node is exactly `stop`.
    [[nodiscard]] double operator[](std::size_t i) const noexcept {
        return i + 1 == n_ ? stop_ : start_ + static_cast<double>(i) * spacing();
    }

    [[nodiscard]] std::vector<double> nodes() const;

private:
    double start_;
    double stop_;
    std::size_t n_;
};

/// n log-spaced points on [lo, hi], both > 0. Endpoints are exact.
std::vector<double> log_space(double lo, double hi, std::size_t n);

}  // namespace invmerton
