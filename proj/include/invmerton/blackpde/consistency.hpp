#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "invmerton/market/market.hpp"
#include "invmerton/market/strategy_pair.hpp"

namespace invmerton {

/// The five terms of Black's equation at one (t, w).
struct BlackTerms {
    double pi_t = 0.0;
    double diffusion = 0.0;    ///< sigma^2/2 pi^2 pi_ww
    double drift = 0.0;        ///< -(c - r w) pi_w
    double consumption = 0.0;  ///< pi c_w
    double discount = 0.0;     ///< -r pi

    [[nodiscard]] double residual() const { return pi_t + diffusion + drift + consumption + discount; }
    /// max(1, |term|) over the terms; tolerances are relative to this.
    [[nodiscard]] double scale() const;
};

/// Requires 0 < w < w-bar(t).
BlackTerms black_terms(const StrategyPair& pair, const MarketParams& market, double t, double w);
double black_residual(const StrategyPair& pair, const MarketParams& market, double t, double w);

/// Integrated form: int_ref^w pi_t / pi^2 + sigma^2/2 pi_w + c/pi - r w/pi.
/// The integral is skipped when pi is time-homogeneous.
double integrated_black_lhs(const StrategyPair& pair, const MarketParams& market, double t, double w, double ref);

struct BetaSample {
    double t = 0.0;
    double beta = 0.0;      ///< mean of the integrated form over the w grid
    double flatness = 0.0;  ///< its standard deviation
    double tol = 0.0;
};

/// `ref` must lie in the hull of `w_grid`, and the grid inside (0, w-bar(t)).
BetaSample extract_beta(const StrategyPair& pair, const MarketParams& market, double t, std::span<const double> w_grid,
                        double ref);

struct ResidualSample {
    double t = 0.0;
    double w = 0.0;
    double residual = 0.0;
    double tol = 0.0;
};

struct ConsistencyConfig {
    std::vector<double> t_probes{0.0, 0.5, 1.0, 5.0};
    std::vector<double> w_probes{0.2, 0.5, 1.0, 2.0, 5.0};
    double ref = 1.0;
    double tol_res_rel = 1e-6;   ///< times max(1, term magnitudes)
    double tol_flat_rel = 1e-6;  ///< times max(1, |beta|)
};

struct ConsistencyReport {
    std::vector<ResidualSample> residual_grid;
    std::vector<BetaSample> beta;
    double max_abs_residual = 0.0;
    double max_flatness = 0.0;
    bool consistent = false;
};

/// Probes at or beyond w-bar(t) are dropped.
ConsistencyReport check_consistency(const StrategyPair& pair, const MarketParams& market,
                                    const ConsistencyConfig& cfg = {});

/// Columns t,w,residual.
void write_residuals_csv(const ConsistencyReport& report, const std::filesystem::path& path);

}  // namespace invmerton
