#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "invmerton/deterministic/weight.hpp"
#include "invmerton/market/surface.hpp"
#include "invmerton/numerics/ode.hpp"
#include "invmerton/numerics/tail_fit.hpp"
#include "invmerton/risk_verdict.hpp"

namespace invmerton {

/// w(t, x0) for the consumption-only dynamics w_t = -c(t, w).
struct WealthPath {
    double x0 = 0.0;
    std::vector<OdeSample> samples;
};

/// RK4 with an absorbing floor at 0; `n` grid nodes on [0, horizon].
WealthPath solve_wealth_path(const StrategySurface& c, double x0, double horizon, std::size_t n);

struct BudgetExhaustion {
    double truncated_ratio = 0.0;  ///< (1/x0) int_0^T c(t, w(t)) dt
    double tail_ratio = 0.0;       ///< extrapolated remainder beyond T, over x0
    double ratio = 0.0;            ///< truncated + tail; 1 when the budget is exhausted
    TailModel tail_model = TailModel::Zero;
};

/// Composite Simpson over the path samples plus a fitted tail. Throws
/// TailNotNegligible when the tail exceeds 1% of x0.
BudgetExhaustion budget_exhaustion(const WealthPath& path, const StrategySurface& c);

struct PathFamilyConfig {
    std::size_t n_paths = 201;
    double x_min = 1e-2;
    double x_max = 1e2;
    double dt = 1e-3;  ///< RK4 step used for every path solve
};

class PathFamily;

/// The consumption map x -> c(t, w(t,x)) sampled across the x grid at one time.
class FamilySlice {
public:
    [[nodiscard]] double t() const { return t_; }
    [[nodiscard]] const std::vector<double>& x() const { return x_; }
    [[nodiscard]] const std::vector<double>& consumption() const { return c_; }
    /// c-bar(t), or +inf when c(t, w(t, x_max)) has not saturated.
    [[nodiscard]] double cbar() const { return cbar_; }

    /// y(t, value): the initial wealth whose path consumes `value` at time t.
    [[nodiscard]] double invert(double value) const;

private:
    friend class PathFamily;
    FamilySlice(const PathFamily& family, double t);

    const PathFamily* family_;
    double t_;
    std::vector<double> x_;
    std::vector<double> c_;
    double cbar_;
};

/// Wealth paths w(t, x) from a log-spaced grid of initial wealths. Grid
/// samples only bracket; every reported value comes from a fresh RK4 solve.
class PathFamily {
public:
    explicit PathFamily(StrategySurface c, PathFamilyConfig cfg = {});

    [[nodiscard]] double wealth(double t, double x) const;
    /// c*(t, x) := c(t, w(t, x)).
    [[nodiscard]] double consumption(double t, double x) const;
    /// d/dx c*(t, x) and d^2/dx^2 c*(t, x) by central differences across paths.
    [[nodiscard]] double dx_consumption(double t, double x) const;
    [[nodiscard]] double dxx_consumption(double t, double x) const;

    [[nodiscard]] FamilySlice slice(double t) const { return FamilySlice(*this, t); }
    [[nodiscard]] const PathFamilyConfig& config() const { return cfg_; }
    [[nodiscard]] const StrategySurface& surface() const { return c_; }

private:
    StrategySurface c_;
    PathFamilyConfig cfg_;
};

/// y(t, value) on a freshly built slice.
double invert_consumption(const PathFamily& family, double t, double value);

struct DeterministicRecovery {
    double t = 0.0;
    double cbar = 0.0;
    std::vector<double> c;
    std::vector<double> y;
    std::vector<double> uc;
    std::vector<double> ucc;
    std::vector<double> rho;
};

/// u_c(t,c) = int_{y(t,c)}^inf D, u_cc = -D(y) / d_x c*(t, y). Consumption at
/// or above c-bar(t) gets u_c = u_cc = 0 and y = +inf.
DeterministicRecovery recover_marginal_utility(const PathFamily& family, const WeightFunction& D, double t,
                                               std::span<const double> c_grid);

struct DetRiskProbe {
    double t = 0.0;
    double x = 0.0;
    double weight_term = 0.0;       ///< D_x/D + D / int_x^inf D
    double consumption_term = 0.0;  ///< d2_x c* / d_x c*
    double S = 0.0;                 ///< weight_term - consumption_term; same sign as rho_c
    double tol = 0.0;
};

struct DetRiskReport {
    std::vector<DetRiskProbe> probes;
    double min_margin = 0.0;
    double max_margin = 0.0;
    RiskVerdict verdict = RiskVerdict::MIXED;
};

DetRiskReport classify_risk_det(const PathFamily& family, const WeightFunction& D,
                                std::span<const std::pair<double, double>> probes);

/// Columns t,c,y,u_c,u_cc,rho.
void write_recovery_csv(std::span<const DeterministicRecovery> tables, const std::filesystem::path& path);

}  // namespace invmerton
