#pragma once

#include <string>
#include <vector>

#include "invmerton/market/market.hpp"
#include "invmerton/market/strategy_pair.hpp"

namespace invmerton {

struct RegularityConfig {
    std::vector<double> t_probes{0.0, 1.0, 5.0};
    double w_lo = 1e-4;
    double w_hi = 1e4;
    std::size_t n_w = 161;
};

/// Sufficient conditions for a time-homogeneous pi with c_w bounded away
/// from 0 and infinity. delta1/delta2 are the smaller/larger of the limits
/// of pi_w at 0+ and at the top of the wealth range.
struct RegularityReport {
    bool applicable = false;  ///< false when pi is not time-homogeneous
    std::string note;

    double delta1 = 0.0;
    double delta2 = 0.0;
    double pi_w_limit_zero = 0.0;
    double pi_w_limit_top = 0.0;
    double pi_w_min = 0.0;  ///< over the probe grid
    double pi_w_max = 0.0;
    bool bounds_hold = false;  ///< delta1 <= pi_w <= delta2 on the probe grid

    double kappa1 = 0.0;
    double kappa2 = 0.0;

    bool condition_a = false;  ///< theta/sigma <= delta1
    bool condition_b = false;  ///< delta1 < theta/sigma <= delta2 and theta (1 - delta2/delta1) + sigma delta2 > 0
    bool shortcut = false;     ///< delta1 > delta2/2
    bool integral_diverges_at_zero = false;
    bool integral_diverges_at_top = false;
    bool pi_integrals_diverge = false;

    bool lemma_applies = false;
};

RegularityReport check_regularity(const StrategyPair& pair, const MarketParams& market,
                                  const RegularityConfig& cfg = {});

}  // namespace invmerton
