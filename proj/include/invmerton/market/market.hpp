#pragma once

namespace invmerton {

/// Black-Scholes market: riskless rate r, volatility sigma, Sharpe ratio theta.
struct MarketParams {
    double r = 0.0;
    double sigma = 1.0;
    double theta = 1.0;

    /// Validated constructor: sigma > 0, theta > 0, all finite.
    static MarketParams make(double r, double sigma, double theta);

    /// theta = 0 is only meaningful for forward simulation, never for recovery.
    static MarketParams risk_neutral(double r, double sigma);

    void validate() const;
    void validate_for_simulation() const;
};

/// Z_t = exp(-r t - theta B_t - theta^2 t / 2).
double state_price_density(const MarketParams& market, double t, double brownian_value);

double log_state_price_density(const MarketParams& market, double t, double brownian_value);

}  // namespace invmerton
