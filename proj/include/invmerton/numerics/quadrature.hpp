#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "invmerton/error.hpp"

namespace invmerton {

inline constexpr double kDefaultQuadTol = 1e-10;
inline constexpr int kDefaultQuadDepth = 50;

namespace detail {

// Evaluates f at an endpoint; a non-finite value there is treated as an
// integrable endpoint singularity and re-sampled a hair inside the interval.
template <typename F>
double endpoint_value(const F& f, double x, double inward) {
    double v = f(x);
    if (!std::isfinite(v)) v = f(x + inward);
    if (!std::isfinite(v)) fail(ErrorKind::NonFinite, "quad: integrand non-finite near x=" + std::to_string(x));
    return v;
}

template <typename F>
double interior_value(const F& f, double x) {
    const double v = f(x);
    if (!std::isfinite(v)) fail(ErrorKind::NonFinite, "quad: integrand non-finite at x=" + std::to_string(x));
    return v;
}

template <typename F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                    int depth, double min_width) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = interior_value(f, lm);
    const double frm = interior_value(f, rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double refined = left + right;
    const double delta = refined - whole;
    const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(refined);
    if (std::abs(delta) <= std::max(15.0 * tol, roundoff) ||
        (b - a) <= std::max(min_width, 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b)))) {
        return refined + delta / 15.0;
    }
    if (depth <= 0) {
        fail(ErrorKind::MaxDepthExceeded, "quad: recursion depth exhausted on [" + std::to_string(a) + ", " +
                                              std::to_string(b) + "]");
    }
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, min_width) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, min_width);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] (a > b gives the negated
/// integral). Throws MaxDepthExceeded if `tol` is not met within `max_depth`
/// bisections.
template <typename F>
double quad(const F& f, double a, double b, double tol = kDefaultQuadTol, int max_depth = kDefaultQuadDepth) {
    if (!(tol > 0.0)) fail(ErrorKind::InvalidArgument, "quad: tol must be positive");
    if (a == b) return 0.0;
    if (b < a) return -quad(f, b, a, tol, max_depth);
    const double inward = 1e-12 * (b - a);
    const double fa = detail::endpoint_value(f, a, inward);
    const double fb = detail::endpoint_value(f, b, -inward);
    const double fm = detail::interior_value(f, 0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // Panels narrower than 1e-14 of the interval are accepted as-is; only an
    // endpoint singularity drives the recursion that deep.
    return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth, 1e-14 * (b - a));
}

enum class TailMethod {
    Reciprocal,  ///< substitute x = 1/u and integrate over (0, 1/a]
    Truncate,    ///< march geometric panels until the integrand is negligible
};

/// Integral of f over [a, inf).
template <typename F>
double quad_tail(const F& f, double a, double tol = kDefaultQuadTol, TailMethod method = TailMethod::Reciprocal,
                 int max_depth = kDefaultQuadDepth) {
    if (method == TailMethod::Reciprocal) {
        if (a <= 0.0) return quad(f, a, 1.0, 0.5 * tol, max_depth) + quad_tail(f, 1.0, 0.5 * tol, method, max_depth);
        auto g = [&f](double u) { return f(1.0 / u) / (u * u); };
        return quad(g, 0.0, 1.0 / a, tol, max_depth);
    }

    constexpr int kMaxPanels = 400;
    double lo = a;
    double width = std::max(1.0, std::abs(a));
    double total = 0.0;
    for (int panel = 0; panel < kMaxPanels; ++panel) {
        const double hi = lo + width;
        const double piece = quad(f, lo, hi, tol / 64.0, max_depth);
        total += piece;
        if (std::abs(f(hi)) * width < tol / 4.0 && std::abs(piece) < tol / 4.0) return total;
        lo = hi;
        width *= 2.0;
    }
    fail(ErrorKind::MaxDepthExceeded, "quad_tail: integrand did not decay below tolerance");
}

}  // namespace invmerton
