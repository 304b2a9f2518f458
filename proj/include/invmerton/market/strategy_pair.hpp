#pragma once

#include <functional>
#include <string>
#include <vector>

#include "invmerton/market/surface.hpp"

namespace invmerton {

/// Consumption c(t,w) and investment pi(t,w), optionally with a wealth
/// frontier w-bar(t): at and beyond it pi = 0 and c stays at c(t, w-bar(t)).
struct StrategyPair {
    StrategySurface consumption;
    StrategySurface investment;
    std::function<double(double)> wealth_bound;

    [[nodiscard]] double wbar(double t) const;
    [[nodiscard]] bool bounded() const { return static_cast<bool>(wealth_bound); }

    [[nodiscard]] double c(double t, double w) const;
    [[nodiscard]] double pi(double t, double w) const;
    [[nodiscard]] double c_partial(double t, double w, Derivative d) const;
    [[nodiscard]] double pi_partial(double t, double w, Derivative d) const;
};

/// Problems with the standing assumptions c(t,0) = 0 and pi(t,0) = 0 at the given times.
std::vector<std::string> check_origin(const StrategyPair& pair, const std::vector<double>& t_probes,
                                      double tol = 1e-12);

}  // namespace invmerton
