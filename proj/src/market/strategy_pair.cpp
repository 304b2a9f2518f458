#include "invmerton/market/strategy_pair.hpp"

#include <cmath>
#include <limits>

namespace invmerton {

double StrategyPair::wbar(double t) const {
    return wealth_bound ? wealth_bound(t) : std::numeric_limits<double>::infinity();
}

double StrategyPair::c(double t, double w) const {
    const double bar = wbar(t);
    return consumption.value(t, w < bar ? w : bar);
}

double StrategyPair::pi(double t, double w) const { return w < wbar(t) ? investment.value(t, w) : 0.0; }

double StrategyPair::c_partial(double t, double w, Derivative d) const {
    if (w >= wbar(t) && d != Derivative::t) return 0.0;
    return consumption.partial(t, w, d);
}

double StrategyPair::pi_partial(double t, double w, Derivative d) const {
    if (w >= wbar(t)) return 0.0;
    return investment.partial(t, w, d);
}

std::vector<std::string> check_origin(const StrategyPair& pair, const std::vector<double>& t_probes, double tol) {
    std::vector<std::string> issues;
    for (double t : t_probes) {
        const double c0 = pair.c(t, 0.0);
        const double p0 = pair.pi(t, 0.0);
        if (std::abs(c0) > tol) issues.push_back("c(" + std::to_string(t) + ", 0) = " + std::to_string(c0) + " != 0");
        if (std::abs(p0) > tol) issues.push_back("pi(" + std::to_string(t) + ", 0) = " + std::to_string(p0) + " != 0");
    }
    return issues;
}

}  // namespace invmerton
