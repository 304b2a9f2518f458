#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "invmerton/market/surface.hpp"

namespace invmerton {

/// Tensor grid of samples; values are row-major with t as the slow index.
struct TabulatedData {
    std::vector<double> t;
    std::vector<double> w;
    std::vector<double> values;

    [[nodiscard]] double at(std::size_t i, std::size_t j) const { return values[i * w.size() + j]; }
    void validate() const;
};

/// Bilinear interpolation; constant continuation outside the w knots,
/// OutOfDomain outside the t knots. Partials fall back to finite differences.
StrategySurface make_tabulated(TabulatedData data, std::string name = "tabulated");

TabulatedData sample_surface(const StrategySurface& surface, std::vector<double> t_knots,
                             std::vector<double> w_knots);

/// CSV with header `t,w,value`; rows may come in any order but must cover the
/// full tensor grid exactly once.
TabulatedData read_tabulated_csv(const std::filesystem::path& path);
void write_tabulated_csv(const TabulatedData& data, const std::filesystem::path& path);

}  // namespace invmerton
