#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "invmerton/blackpde/dual.hpp"
#include "invmerton/market/market.hpp"
#include "invmerton/market/strategy_pair.hpp"
#include "invmerton/numerics/tail_fit.hpp"

namespace invmerton {

enum class Scheme { EulerMaruyama };

struct SimConfig {
    std::size_t n_paths = 1000;
    double dt = 1e-2;
    double horizon = 10.0;
    std::uint64_t master_seed = 20240601;
    Scheme scheme = Scheme::EulerMaruyama;
    /// Keep every k-th step in the ensemble (the final step is always kept).
    std::size_t record_every = 1;
    /// Worker threads; 0 means worker_count(). Results do not depend on it.
    std::size_t threads = 0;

    void validate() const;
    [[nodiscard]] std::size_t steps() const;
};

/// Path-major samples: value(p, k) is path p at times[k].
struct PathEnsemble {
    std::vector<double> times;
    std::size_t n_paths = 0;
    std::vector<double> W, Z, B;

    [[nodiscard]] std::size_t n_times() const { return times.size(); }
    [[nodiscard]] std::size_t at(std::size_t p, std::size_t k) const { return p * times.size() + k; }
};

/// Euler-Maruyama for W with absorption at 0; Z from the same Brownian path,
/// exactly. Path p draws from stream (master_seed, p).
PathEnsemble simulate(const StrategyPair& pair, const MarketParams& market, double x, const SimConfig& cfg);

/// f(t, F(0,x) Z_t) along every path, laid out like ensemble.W.
std::vector<double> dual_wealth(const RecoveredUtility& u, double x, const PathEnsemble& ensemble);

struct ConvergenceLevel {
    double dt = 0.0;
    double error = 0.0;  ///< mean over paths of max over checkpoints of |W_euler - W_dual|
};

struct ConvergenceReport {
    std::vector<ConvergenceLevel> levels;
    std::vector<double> ratios;  ///< error[i] / error[i+1]
    double min_ratio = 0.0;
};

/// Every level reuses one set of Brownian paths: increments are drawn at the
/// finest dt and summed for the coarser ones. Checkpoints are the multiples
/// of the coarsest dt. `dts` must be decreasing and nested.
ConvergenceReport dual_convergence_study(const RecoveredUtility& u, double x, std::span<const double> dts,
                                         double horizon, std::size_t n_paths, std::uint64_t seed);

struct BudgetReport {
    double target = 0.0;          ///< x
    double estimate = 0.0;        ///< E int_0^T Z c dt
    double std_error = 0.0;
    double truncation_adjustment = 0.0;  ///< fitted exponential tail of E[Z c] beyond T
    double tail_rate = 0.0;
    TailModel tail_model = TailModel::Zero;
    double horizon = 0.0;
    std::size_t n_paths = 0;
    bool pass = false;  ///< |estimate + tail - x| <= max(3 std_error, 0.01 x)
};

/// Paths are streamed, never stored. Throws TailNotNegligible when the fitted
/// tail exceeds 10% of x.
BudgetReport verify_budget(const StrategyPair& pair, const MarketParams& market, double x, const SimConfig& cfg);

/// h(t) = E[H(t, c(t, W_t))] with W_t = f(t, F(0,x0) Z_t); Z_t is sampled
/// exactly on `t_grid`, so there is no discretisation bias.
std::vector<HSample> estimate_h(const RecoveredUtility& u, double x0, std::span<const double> t_grid,
                                std::size_t n_paths, std::uint64_t seed, std::size_t threads = 0);

struct MeanSeries {
    std::vector<double> times;
    std::vector<double> mean;
    std::vector<double> std_error;
};

/// E[Z_t W_t] over the ensemble.
MeanSeries discounted_wealth(const PathEnsemble& ensemble);

struct SupermartingaleReport {
    MeanSeries series;
    std::size_t violations = 0;  ///< steps where the mean rises by more than 2 std errors of the increment
};

SupermartingaleReport supermartingale_check(const PathEnsemble& ensemble);

/// Columns path_id,t,W,Z.
void write_ensemble_csv(const PathEnsemble& ensemble, const std::filesystem::path& path,
                        std::size_t max_paths = static_cast<std::size_t>(-1));

}  // namespace invmerton
