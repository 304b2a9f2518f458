#pragma once

#include <functional>
#include <string>
#include <vector>

#include "invmerton/market/market.hpp"
#include "invmerton/market/surface.hpp"

namespace invmerton {

struct TimeHomConsumption {
    StrategySurface consumption;
    /// Probe points where c < 0 or c_w <= 0.
    std::vector<std::string> warnings;
};

struct TimeHomProbes {
    std::vector<double> t{0.0, 1.0, 5.0};
    std::vector<double> w;  ///< default: 121 log-spaced points on [1e-3, 1e3]
};

/// c(t,w) = r w - sigma^2/2 pi pi_w + beta(t) pi. Throws NotTimeHomogeneous
/// when pi_t is not 0 at the probes.
TimeHomConsumption timehom_consumption(const StrategySurface& pi, double beta, const MarketParams& market,
                                       const TimeHomProbes& probes = {});
/// beta_dt may be empty, in which case c_t is differenced.
TimeHomConsumption timehom_consumption(const StrategySurface& pi, std::function<double(double)> beta,
                                       std::function<double(double)> beta_dt, const MarketParams& market,
                                       const TimeHomProbes& probes = {});

}  // namespace invmerton
