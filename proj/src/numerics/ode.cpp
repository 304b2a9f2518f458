#include "invmerton/numerics/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "invmerton/error.hpp"

namespace invmerton {
namespace {

double checked(const OdeRhs& rhs, double t, double y) {
    const double v = rhs(t, y);
    if (!std::isfinite(v)) {
        fail(ErrorKind::NonFinite, "ODE rhs returned " + std::to_string(v) + " at t=" + std::to_string(t) +
                                       ", y=" + std::to_string(y));
    }
    return v;
}

struct Stepper {
    const OdeRhs& rhs;
    std::optional<double> floor;

    [[nodiscard]] double guard(double y) const { return floor ? std::max(y, *floor) : y; }

    // Returns the next value; sets `absorbed` when the floor is hit.
    double step(double t, double y, double h, bool& absorbed) const {
        const double k1 = checked(rhs, t, guard(y));
        const double k2 = checked(rhs, t + 0.5 * h, guard(y + 0.5 * h * k1));
        const double k3 = checked(rhs, t + 0.5 * h, guard(y + 0.5 * h * k2));
        const double k4 = checked(rhs, t + h, guard(y + h * k3));
        double next = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (floor && next <= *floor) {
            next = *floor;
            absorbed = true;
        }
        return next;
    }
};

}  // namespace

std::vector<OdeSample> integrate_ode(const OdeRhs& rhs, double t0, double y0, const Grid1D& grid,
                                     std::optional<double> floor) {
    if (grid.start() != t0) fail(ErrorKind::InvalidArgument, "integrate_ode: grid must start at t0");
    if (!std::isfinite(y0)) fail(ErrorKind::NonFinite, "integrate_ode: non-finite initial value");

    const Stepper stepper{rhs, floor};
    std::vector<OdeSample> out;
    out.reserve(grid.size());
    double y = y0;
    bool absorbed = floor && y0 <= *floor;
    if (absorbed) y = *floor;
    out.push_back({grid[0], y});
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double t = grid[i - 1];
        if (!absorbed) y = stepper.step(t, y, grid[i] - t, absorbed);
        out.push_back({grid[i], y});
    }
    return out;
}

double rk4_advance(const OdeRhs& rhs, double t0, double y0, double t1, std::size_t steps,
                   std::optional<double> floor) {
    if (steps == 0 || t1 == t0) return y0;
    const Stepper stepper{rhs, floor};
    const double h = (t1 - t0) / static_cast<double>(steps);
    double y = y0;
    bool absorbed = floor && y0 <= *floor;
    if (absorbed) return *floor;
    for (std::size_t i = 0; i < steps && !absorbed; ++i) {
        y = stepper.step(t0 + static_cast<double>(i) * h, y, h, absorbed);
    }
    return y;
}

}  // namespace invmerton
