#pragma once

#include <cmath>
#include <functional>

#include "invmerton/market/market.hpp"

namespace invmerton {

/// Utility for a market with Sharpe ratio theta_hat whose optimal consumption
/// matches that of the original utility in the theta market:
/// I_hat(t,z) = I(t, z^{theta/theta_hat} e^{mu t}).
struct SharpeRemap {
    double theta_hat = 0.0;
    double mu = 0.0;        ///< (theta/2)(theta - theta_hat) + r (theta/theta_hat - 1)
    double exponent = 1.0;  ///< theta / theta_hat
    std::function<double(double, double)> I_hat;

    /// lambda_hat = lambda^{theta_hat/theta}.
    [[nodiscard]] double lambda_hat(double lambda) const { return std::pow(lambda, 1.0 / exponent); }
};

SharpeRemap sharpe_remap(std::function<double(double, double)> I, const MarketParams& market, double theta_hat);

}  // namespace invmerton
