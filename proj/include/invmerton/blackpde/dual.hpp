#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "invmerton/market/market.hpp"
#include "invmerton/market/strategy_pair.hpp"

namespace invmerton {

/// Integration base w0(t) of the F integral. A moving base must stay inside
/// (0, w-bar(t)) and needs its derivative for the A correction.
struct BaseCurve {
    std::function<double(double)> w0;
    std::function<double(double)> dw0;

    static BaseCurve fixed(double w);
    static BaseCurve moving(std::function<double(double)> w0, std::function<double(double)> dw0);

    [[nodiscard]] double at(double t) const { return w0(t); }
    [[nodiscard]] bool constant() const { return !dw0; }
};

/// beta(t) and A(t) for a consistent pair.
class DiscountCurve {
public:
    DiscountCurve(StrategyPair pair, MarketParams market, BaseCurve base);

    /// Integrated form evaluated at its own base, where the integral vanishes.
    [[nodiscard]] double beta(double t) const;
    /// -(theta/sigma) int_0^t beta + (theta^2/2 - r) t, minus the moving-base
    /// correction int_0^t theta w0'/(sigma pi(s, w0(s))) ds.
    [[nodiscard]] double A(double t) const;
    /// True when beta is constant and A(t) = xi t exactly.
    [[nodiscard]] bool linear() const { return linear_; }
    [[nodiscard]] double xi() const { return xi_; }

private:
    StrategyPair pair_;
    MarketParams market_;
    BaseCurve base_;
    bool linear_ = false;
    double xi_ = 0.0;
};

/// A(t) for constant beta: xi t with xi = -theta beta/sigma + theta^2/2 - r.
double discount_A(double beta, const MarketParams& market, double t);
/// Simpson over beta sampled on a uniform grid spanning [0, t].
double discount_A(std::span<const double> beta_on_uniform_grid, const MarketParams& market, double t);

/// int_ref^w dxi / pi(t, xi); integrated in log w, and in -log(wbar - w) on
/// the upper half of a bounded range.
double log_pi_integral(const StrategyPair& pair, double t, double ref, double w);

/// F(t,w) = e^A exp(-(theta/sigma) int_ref^w dxi/pi). 0 at and beyond w-bar(t).
double compute_F(const StrategyPair& pair, const MarketParams& market, double A, double t, double w, double ref);

/// f(t,z) = F(t,.)^{-1}(z). OutOfRange if z is outside the image of F(t,.).
double invert_F(const StrategyPair& pair, const MarketParams& market, double A, double t, double z, double ref);

struct HSample {
    double t = 0.0;
    double h = 0.0;
    double std_error = 0.0;
    double positive_part = 0.0;  ///< E[H - h]^+
};

struct RecoveryOptions {
    BaseCurve base = BaseCurve::fixed(1.0);
    /// Base consumption of H; c(t, w0(t)) when empty.
    std::function<double(double)> c0;
};

class RecoveredUtility {
public:
    RecoveredUtility(StrategyPair pair, MarketParams market, RecoveryOptions opts = {});

    [[nodiscard]] double A(double t) const { return discount_.A(t); }
    [[nodiscard]] double beta(double t) const { return discount_.beta(t); }
    [[nodiscard]] double F(double t, double w) const;
    [[nodiscard]] double f(double t, double z) const;
    /// d f / d z by central differences.
    [[nodiscard]] double f_z(double t, double z) const;
    /// Inverse of c(t, .); w-bar(t) (possibly +inf) for c >= c-bar(t).
    [[nodiscard]] double Y(double t, double c) const;
    /// F(t, Y(t,c)); 0 at and above c-bar(t).
    [[nodiscard]] double uc(double t, double c) const;
    /// int_{c0(t)}^c u_c(t, b) db.
    [[nodiscard]] double H(double t, double c) const;
    /// H(t, c(t, w_i)) for every w_i, in one sweep.
    [[nodiscard]] std::vector<double> H_along_wealth(double t, std::span<const double> w) const;

    /// lim c(t, w) as w -> w-bar(t); +inf when c is unbounded.
    [[nodiscard]] double cbar(double t) const;
    [[nodiscard]] double wbar(double t) const { return pair_.wbar(t); }
    [[nodiscard]] double w0(double t) const { return opts_.base.at(t); }
    [[nodiscard]] double c0(double t) const;

    [[nodiscard]] const StrategyPair& pair() const { return pair_; }
    [[nodiscard]] const MarketParams& market() const { return market_; }
    [[nodiscard]] const DiscountCurve& discount() const { return discount_; }

    /// Filled by estimate_h when requested.
    std::vector<HSample> h;

private:
    StrategyPair pair_;
    MarketParams market_;
    RecoveryOptions opts_;
    DiscountCurve discount_;
};

struct RecoveryTable {
    double t = 0.0;
    std::vector<double> c;
    std::vector<double> uc;
    std::vector<double> H;
};

}  // namespace invmerton
