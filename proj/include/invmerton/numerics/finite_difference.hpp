#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "invmerton/error.hpp"

namespace invmerton {

enum class Partial { t, w, ww };

/// Box the stencil must stay inside. One-sided formulas are used when the
/// centred stencil would leave it.
struct FdDomain {
    double t_min = 0.0;
    double t_max = std::numeric_limits<double>::infinity();
    double w_min = 0.0;
    double w_max = std::numeric_limits<double>::infinity();
};

/// Default step for `which` at coordinate x: 1e-5 relative for first
/// derivatives, 1e-4 relative for the second derivative (roundoff in a
/// second difference scales like eps/h^2).
inline double default_fd_step(Partial which, double x) {
    const double rel = which == Partial::ww ? 1e-4 : 1e-5;
    return std::max(rel, rel * std::abs(x));
}

/// Second-order finite difference of f(t, w).
template <typename F>
double fd_partial(const F& f, double t, double w, Partial which, double h = 0.0, const FdDomain& domain = {}) {
    const double x = which == Partial::t ? t : w;
    if (h <= 0.0) h = default_fd_step(which, x);
    auto at = [&](double offset) {
        const double v = which == Partial::t ? f(t + offset, w) : f(t, w + offset);
        if (!std::isfinite(v)) {
            fail(ErrorKind::NonFinite, "fd_partial: non-finite stencil value at offset " + std::to_string(offset));
        }
        return v;
    };

    const double lo = which == Partial::t ? domain.t_min : domain.w_min;
    const double hi = which == Partial::t ? domain.t_max : domain.w_max;
    const double reach = which == Partial::ww ? 3.0 * h : 2.0 * h;
    const bool room_below = x - reach >= lo;
    const bool room_above = x + reach <= hi;

    if (which == Partial::ww) {
        if (x - h >= lo && x + h <= hi) return (at(h) - 2.0 * at(0.0) + at(-h)) / (h * h);
        if (room_above) return (2.0 * at(0.0) - 5.0 * at(h) + 4.0 * at(2.0 * h) - at(3.0 * h)) / (h * h);
        if (room_below) return (2.0 * at(0.0) - 5.0 * at(-h) + 4.0 * at(-2.0 * h) - at(-3.0 * h)) / (h * h);
    } else {
        if (x - h >= lo && x + h <= hi) return (at(h) - at(-h)) / (2.0 * h);
        if (room_above) return (-3.0 * at(0.0) + 4.0 * at(h) - at(2.0 * h)) / (2.0 * h);
        if (room_below) return (3.0 * at(0.0) - 4.0 * at(-h) + at(-2.0 * h)) / (2.0 * h);
    }
    fail(ErrorKind::OutOfDomain, "fd_partial: stencil does not fit in the domain");
}

}  // namespace invmerton
