#pragma once

#include <cmath>

#include "invmerton/market/market.hpp"
#include "invmerton/market/strategy_pair.hpp"
#include "invmerton/market/surface.hpp"

namespace fixtures {

using namespace invmerton;

// Linear consumption/investment in a lognormal market.
inline constexpr double kappa = 0.1, phi = 0.5;
inline MarketParams crra_market() { return MarketParams::make(0.03, 0.2, 0.08); }
inline StrategyPair crra_pair() { return {families::linear(kappa), families::linear(phi), {}}; }
inline StrategyPair perturbed_pair() { return {families::linear(kappa), families::linear(phi, 0.1), {}}; }
inline constexpr double crra_R = 0.8;
inline constexpr double crra_xi = -0.0868;

// pi = w(1-w) below the frontier w = 1.
inline MarketParams bounded_wealth_market() { return MarketParams::make(0.5, 0.25, 0.7); }
inline StrategyPair bounded_wealth_pair() {
    return {families::cubic_bounded(0.5, 0.25, 0.1), families::logistic_bounded(), [](double) { return 1.0; }};
}

// pi = 1 - e^{-w}, consumption saturating at beta = 0.3.
inline MarketParams bounded_cons_market() { return MarketParams::make(0.0, 0.5, 0.25); }
inline StrategyPair bounded_cons_pair() {
    return {families::exp_bounded_consumption(0.0, 0.5, 0.3), families::exp_bounded(), {}};
}

// Square-root investment with convex consumption kappa w + alpha(e^{-aw} - 1).
inline constexpr double cc_kappa = 0.4, cc_sigma = 0.25, cc_r = 0.6, cc_alpha = 0.1, cc_a = 1.25;
inline MarketParams convex_c_market(double theta = 0.95) { return MarketParams::make(cc_r, cc_sigma, theta); }
inline StrategyPair convex_c_pair() {
    return {families::exp_convex(cc_kappa, cc_alpha, cc_a),
            families::sqrt_convex(cc_sigma, cc_r, cc_kappa, cc_alpha, cc_a), {}};
}
inline double convex_c_delta1() { return std::sqrt(2.0) / cc_sigma * std::sqrt(cc_r - cc_kappa); }
inline double convex_c_delta2() { return std::sqrt(2.0) / cc_sigma * std::sqrt(cc_r - cc_kappa + cc_alpha * cc_a); }

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace fixtures
