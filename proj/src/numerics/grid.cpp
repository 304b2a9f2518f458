#include "invmerton/numerics/grid.hpp"

#include <cmath>

#include "invmerton/error.hpp"

namespace invmerton {

Grid1D::Grid1D(double start, double stop, std::size_t n) : start_(start), stop_(stop), n_(n) {
    if (!(std::isfinite(start) && std::isfinite(stop)) || !(start < stop)) {
        fail(ErrorKind::InvalidArgument, "Grid1D requires finite start < stop");
    }
    if (n < 2) fail(ErrorKind::InvalidArgument, "Grid1D requires at least 2 nodes");
}

std::vector<double> Grid1D::nodes() const {
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = (*this)[i];
    return out;
}

std::vector<double> log_space(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0 && hi > lo)) fail(ErrorKind::InvalidArgument, "log_space requires 0 < lo < hi");
    if (n < 2) fail(ErrorKind::InvalidArgument, "log_space requires at least 2 points");
    std::vector<double> out(n);
    const double a = std::log(lo);
    const double step = (std::log(hi) - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(a + step * static_cast<double>(i));
    out.front() = lo;
    out.back() = hi;
    return out;
}

}  // namespace invmerton
