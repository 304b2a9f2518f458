#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "invmerton/blackpde/dual.hpp"
#include "invmerton/market/market.hpp"
#include "invmerton/market/strategy_pair.hpp"
#include "invmerton/risk_verdict.hpp"

namespace invmerton {

/// rho(t,c) = theta Y_c / (sigma pi(t, Y)), with Y_c = 1 / c_w(t, Y).
double rho_from_strategy(const RecoveredUtility& u, double t, double c);
double rho_from_strategy(const StrategyPair& pair, const MarketParams& market, double t, double c);

/// -u_cc/u_c with u_cc differenced on the recovered u_c. Throws Saturated
/// at or above c-bar(t), where u_c vanishes.
double rho_from_utility(const RecoveredUtility& u, double t, double c);

enum class RiskRoute { StrategyCriterion, RecoveredUtility };

struct RiskSample {
    double t = 0.0;
    double c = 0.0;
    double w = 0.0;  ///< Y(t, c)
    double rho = 0.0;
    double margin = 0.0;  ///< >= 0 means decreasing (absolute or relative) risk aversion
    double tol = 0.0;
};

struct RiskProfile {
    RiskRoute route = RiskRoute::StrategyCriterion;
    RiskScale scale = RiskScale::Absolute;
    std::vector<RiskSample> samples;
    double min_margin = 0.0;
    double max_margin = 0.0;
    RiskVerdict verdict = RiskVerdict::MIXED;
};

/// t in {0.1, 1, 5} times 20 log-spaced c on [0.05, 0.95] c-bar(t) (or the
/// unbounded default grid of the recovery module).
std::vector<std::pair<double, double>> default_risk_probes(const RecoveredUtility& u);

/// margin = pi_w/pi + c_ww/c_w at w = Y(t,c).
RiskProfile classify_dara_stoch(const RecoveredUtility& u, const std::vector<std::pair<double, double>>& probes);
/// margin = pi_w/pi - (c_w/c - c_ww/c_w), i.e. d/dw log pi - d/dw log(c/c_w).
RiskProfile classify_drra(const RecoveredUtility& u, const std::vector<std::pair<double, double>>& probes);

/// rho from the recovered utility at the same probes; margins are -rho_c
/// by central differences.
RiskProfile rho_profile_from_utility(const RecoveredUtility& u, const std::vector<std::pair<double, double>>& probes);

std::string to_string(RiskRoute r);

/// Columns t,c,rho,margin.
void write_risk_csv(const RiskProfile& profile, const std::filesystem::path& path);

}  // namespace invmerton
