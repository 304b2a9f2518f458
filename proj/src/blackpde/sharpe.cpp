#include "invmerton/blackpde/sharpe.hpp"

#include <cmath>

#include "invmerton/error.hpp"

namespace invmerton {

SharpeRemap sharpe_remap(std::function<double(double, double)> I, const MarketParams& market, double theta_hat) {
    market.validate();
    if (!(theta_hat > 0.0) || !std::isfinite(theta_hat)) fail(ErrorKind::InvalidArgument, "theta_hat must be > 0");
    if (!I) fail(ErrorKind::InvalidArgument, "sharpe_remap: empty inverse marginal utility");
    const double theta = market.theta;
    SharpeRemap out;
    out.theta_hat = theta_hat;
    out.exponent = theta / theta_hat;
    out.mu = 0.5 * theta * (theta - theta_hat) + market.r * (out.exponent - 1.0);
    if (theta_hat == theta) {
        out.I_hat = std::move(I);
        return out;
    }
    out.I_hat = [I = std::move(I), e = out.exponent, mu = out.mu](double t, double z) {
        return I(t, std::pow(z, e) * std::exp(mu * t));
    };
    return out;
}

}  // namespace invmerton
