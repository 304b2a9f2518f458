#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "invmerton/blackpde/consistency.hpp"
#include "invmerton/blackpde/dual.hpp"
#include "invmerton/blackpde/regularity.hpp"

namespace invmerton {

struct RecoverRequest {
    std::vector<double> t_grid{0.0, 1.0};
    /// Empty: default_consumption_grid at each t.
    std::vector<double> c_grid;
    /// Proceed even when the pair fails the Black check; the result is flagged.
    bool force = false;
    /// The caller vouches for the integrability conditions (e.g. by a closed-form argument).
    bool assume_integrable = false;
    ConsistencyConfig consistency;
    RegularityConfig regularity;
    RecoveryOptions options;
};

struct RecoveryResult {
    RecoveredUtility utility;
    ConsistencyReport consistency;
    RegularityReport regularity;
    std::vector<RecoveryTable> tables;
    bool integrability_verified = false;
    /// Black-consistent and integrability verified.
    bool verified = false;
    bool forced = false;
};

/// Throws InconsistentPair when the Black check fails and `force` is off.
RecoveryResult recover_utility(const StrategyPair& pair, const MarketParams& market, const RecoverRequest& request);

/// n log-spaced consumptions on [0.05, 0.95] c-bar(t), or on
/// [c(t, w0/20), c(t, 20 w0)] when c is unbounded.
std::vector<double> default_consumption_grid(const RecoveredUtility& u, double t, std::size_t n = 20);

RecoveryTable tabulate_utility(const RecoveredUtility& u, double t, std::span<const double> c_grid);

/// Columns t,c,u_c,H.
void write_utility_csv(std::span<const RecoveryTable> tables, const std::filesystem::path& path);

}  // namespace invmerton
