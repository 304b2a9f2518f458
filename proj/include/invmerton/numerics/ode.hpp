#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "invmerton/numerics/grid.hpp"

namespace invmerton {

using OdeRhs = std::function<double(double t, double y)>;

struct OdeSample {
    double t;
    double y;
};

/// Classical RK4 for the scalar ODE y' = rhs(t, y), sampled at the grid nodes.
///
/// With an absorbing `floor`, stage evaluations see max(y, floor) and a step
/// that would land below the floor clamps to it; the solution then holds
/// there for the rest of the grid. Throws NonFinite if rhs returns NaN/inf.
std::vector<OdeSample> integrate_ode(const OdeRhs& rhs, double t0, double y0, const Grid1D& grid,
                                     std::optional<double> floor = std::nullopt);

/// Same scheme, returning only y(t1) after `steps` uniform RK4 steps from t0.
double rk4_advance(const OdeRhs& rhs, double t0, double y0, double t1, std::size_t steps,
                   std::optional<double> floor = std::nullopt);

}  // namespace invmerton
