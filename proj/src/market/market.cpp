#include "invmerton/market/market.hpp"

#include <cmath>
#include <string>

#include "invmerton/error.hpp"

namespace invmerton {

MarketParams MarketParams::make(double r, double sigma, double theta) {
    MarketParams m{r, sigma, theta};
    m.validate();
    return m;
}

MarketParams MarketParams::risk_neutral(double r, double sigma) {
    MarketParams m{r, sigma, 0.0};
    m.validate_for_simulation();
    return m;
}

void MarketParams::validate_for_simulation() const {
    if (!std::isfinite(r) || !std::isfinite(sigma) || !std::isfinite(theta)) {
        fail(ErrorKind::InvalidArgument, "market parameters must be finite");
    }
    if (!(sigma > 0.0)) fail(ErrorKind::InvalidArgument, "sigma must be positive, got " + std::to_string(sigma));
    if (theta < 0.0) fail(ErrorKind::InvalidArgument, "theta must be non-negative, got " + std::to_string(theta));
}

void MarketParams::validate() const {
    validate_for_simulation();
    if (!(theta > 0.0)) fail(ErrorKind::InvalidArgument, "theta must be positive, got " + std::to_string(theta));
}

double log_state_price_density(const MarketParams& market, double t, double brownian_value) {
    return -market.r * t - market.theta * brownian_value - 0.5 * market.theta * market.theta * t;
}

double state_price_density(const MarketParams& market, double t, double brownian_value) {
    if (t < 0.0) fail(ErrorKind::InvalidArgument, "state_price_density: t must be >= 0");
    if (t == 0.0) return 1.0;  // B_0 = 0 by definition
    return std::exp(log_state_price_density(market, t, brownian_value));
}

}  // namespace invmerton
