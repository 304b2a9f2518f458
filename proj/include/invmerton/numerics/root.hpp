#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "invmerton/error.hpp"

namespace invmerton {

inline constexpr double kDefaultInversionTol = 1e-12;

/// Solves f(x) = target for x in [lo, hi] where f is strictly monotone.
///
/// Returns x with |f(x) - target| <= tol * max(1, |target|) unless f is so
/// steep that adjacent doubles straddle the target, in which case the closer
/// of the two is returned. Throws NotBracketed when f(lo), f(hi) do not
/// straddle the target.
template <typename F>
double invert_monotone(const F& f, double target, double lo, double hi, double tol = kDefaultInversionTol) {
    if (!(lo < hi)) fail(ErrorKind::InvalidArgument, "invert_monotone: need lo < hi");
    const double accept = tol * std::max(1.0, std::abs(target));

    double best_x = lo;
    double best_r = std::numeric_limits<double>::infinity();
    auto g = [&](double x) {
        const double r = f(x) - target;
        if (std::isnan(r)) fail(ErrorKind::NonFinite, "invert_monotone: f is NaN at x=" + std::to_string(x));
        if (std::abs(r) < best_r) {
            best_r = std::abs(r);
            best_x = x;
        }
        return r;
    };

    const double glo = g(lo);
    if (std::abs(glo) <= accept) return lo;
    const double ghi = g(hi);
    if (std::abs(ghi) <= accept) return hi;
    if ((glo < 0.0) == (ghi < 0.0)) {
        fail(ErrorKind::NotBracketed, "invert_monotone: target " + std::to_string(target) + " not within [" +
                                          std::to_string(f(lo)) + ", " + std::to_string(f(hi)) + "]");
    }

    struct Stop {
        const double* best_r;
        double accept;
        bool operator()(double a, double b) const {
            return *best_r <= accept || std::abs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                                              std::max(std::abs(a), std::abs(b));
        }
    };
    std::uintmax_t max_iter = 300;
    boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, Stop{&best_r, accept}, max_iter);
    return best_x;
}

}  // namespace invmerton
