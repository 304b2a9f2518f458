#include "invmerton/blackpde/dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "invmerton/blackpde/consistency.hpp"
#include "invmerton/error.hpp"
#include "invmerton/numerics/quadrature.hpp"
#include "invmerton/numerics/root.hpp"

namespace invmerton {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogWealthMax = 700.0;

// Solves g(u) = target for u = log w with g increasing in u. The bracket
// grows outward from u0; upward moves stop short of log(wbar) when finite.
template <typename G>
double invert_in_log_wealth(const G& g, double target, double u0, double wbar, const char* who) {
    const double g0 = g(u0);
    if (g0 == target) return u0;
    double lo = u0, hi = u0;
    if (g0 < target) {
        bool found = false;
        for (int k = 0; k < 80 && !found; ++k) {
            lo = hi;
            if (std::isfinite(wbar)) {
                hi = std::log(wbar - (wbar - std::exp(u0)) * std::ldexp(1.0, -(k + 1)));
                if (!(hi > lo)) break;
            } else {
                hi = u0 + std::ldexp(1.0, k);
                if (hi > kLogWealthMax) break;
            }
            found = g(hi) >= target;
        }
        if (!found) fail(ErrorKind::OutOfRange, std::string(who) + ": target above the attainable range");
    } else {
        bool found = false;
        for (int k = 0; k < 12 && !found; ++k) {
            hi = lo;
            lo = u0 - std::ldexp(1.0, k);
            if (lo < -kLogWealthMax) break;
            found = g(lo) <= target;
        }
        if (!found) fail(ErrorKind::OutOfRange, std::string(who) + ": target below the attainable range");
    }
    return invert_monotone(g, target, lo, hi);
}

double simpson_uniform(std::span<const double> v, double h) {
    const std::size_t n = v.size();
    if (n < 2) return 0.0;
    const std::size_t end = (n - 1) % 2 == 0 ? n - 1 : n - 2;
    double total = 0.0;
    for (std::size_t i = 0; i + 2 <= end; i += 2) total += h / 3.0 * (v[i] + 4.0 * v[i + 1] + v[i + 2]);
    if (end != n - 1) total += 0.5 * h * (v[n - 1] + v[n - 2]);
    return total;
}

}  // namespace

BaseCurve BaseCurve::fixed(double w) {
    if (!(w > 0.0) || !std::isfinite(w)) fail(ErrorKind::InvalidArgument, "base wealth must be positive");
    return {[w](double) { return w; }, {}};
}

BaseCurve BaseCurve::moving(std::function<double(double)> w0, std::function<double(double)> dw0) {
    if (!w0 || !dw0) fail(ErrorKind::InvalidArgument, "moving base needs w0 and its derivative");
    return {std::move(w0), std::move(dw0)};
}

DiscountCurve::DiscountCurve(StrategyPair pair, MarketParams market, BaseCurve base)
    : pair_(std::move(pair)), market_(market), base_(std::move(base)) {
    market_.validate();
    linear_ = base_.constant() && pair_.consumption.time_homogeneous() && pair_.investment.time_homogeneous();
    if (linear_) xi_ = discount_A(beta(0.0), market_, 1.0);
}

double DiscountCurve::beta(double t) const {
    const double w0 = base_.at(t);
    return integrated_black_lhs(pair_, market_, t, w0, w0);
}

double DiscountCurve::A(double t) const {
    if (t < 0.0) fail(ErrorKind::InvalidArgument, "A(t): t must be >= 0");
    if (t == 0.0) return 0.0;
    if (linear_) return xi_ * t;
    const double k = market_.theta / market_.sigma;
    auto integrand = [&](double s) {
        double v = -k * beta(s);
        if (!base_.constant()) {
            const double w0 = base_.at(s);
            v -= k * base_.dw0(s) / pair_.pi(s, w0);
        }
        return v;
    };
    return quad(integrand, 0.0, t, 1e-11) + (0.5 * market_.theta * market_.theta - market_.r) * t;
}

double discount_A(double beta, const MarketParams& market, double t) {
    const double xi = -market.theta * beta / market.sigma + 0.5 * market.theta * market.theta - market.r;
    return xi * t;
}

double discount_A(std::span<const double> beta_on_uniform_grid, const MarketParams& market, double t) {
    if (beta_on_uniform_grid.size() < 2) fail(ErrorKind::InvalidArgument, "discount_A: need >= 2 beta samples");
    const double h = t / static_cast<double>(beta_on_uniform_grid.size() - 1);
    return -market.theta / market.sigma * simpson_uniform(beta_on_uniform_grid, h) +
           (0.5 * market.theta * market.theta - market.r) * t;
}

double log_pi_integral(const StrategyPair& pair, double t, double ref, double w) {
    if (w == ref) return 0.0;
    auto inv_pi = [&](double x) {
        const double p = pair.pi(t, x);
        if (!(p > 0.0)) {
            fail(ErrorKind::SingularIntegrand, "pi vanishes inside the F integral at w=" + std::to_string(x));
        }
        return 1.0 / p;
    };
    // Below the split point integrate in log w; above it, in -log(wbar - w),
    // which keeps both ends of a bounded range well conditioned.
    const double bar = pair.wbar(t);
    const double split = std::isfinite(bar) ? 0.5 * bar : std::numeric_limits<double>::infinity();
    auto low = [&](double a, double b) {
        if (a == b) return 0.0;
        return quad([&](double u) { return std::exp(u) * inv_pi(std::exp(u)); }, std::log(a), std::log(b), 1e-12);
    };
    auto high = [&](double a, double b) {
        if (a == b) return 0.0;
        auto g = [&](double v) {
            // bar - w is exact once w is rounded, so the Jacobian matches the pi actually sampled
            const double w = bar - std::exp(-v);
            return (bar - w) * inv_pi(w);
        };
        return quad(g, -std::log(bar - a), -std::log(bar - b), 1e-12);
    };
    const double lo = std::min(ref, w), hi = std::max(ref, w);
    double total;
    if (hi <= split) total = low(lo, hi);
    else if (lo >= split) total = high(lo, hi);
    else total = low(lo, split) + high(split, hi);
    return w > ref ? total : -total;
}

double compute_F(const StrategyPair& pair, const MarketParams& market, double A, double t, double w, double ref) {
    if (!(w > 0.0)) fail(ErrorKind::OutOfDomain, "compute_F: w must be > 0");
    if (w >= pair.wbar(t)) return 0.0;
    return std::exp(A - market.theta / market.sigma * log_pi_integral(pair, t, ref, w));
}

double invert_F(const StrategyPair& pair, const MarketParams& market, double A, double t, double z, double ref) {
    if (!(z > 0.0) || !std::isfinite(z)) fail(ErrorKind::OutOfRange, "invert_F: z must be finite and > 0");
    // F = e^{A - k I(w)}  <=>  I(w) = (A - log z) / k
    const double k = market.theta / market.sigma;
    const double target = (A - std::log(z)) / k;
    auto g = [&](double u) { return log_pi_integral(pair, t, ref, std::exp(u)); };
    return std::exp(invert_in_log_wealth(g, target, std::log(ref), pair.wbar(t), "invert_F"));
}

RecoveredUtility::RecoveredUtility(StrategyPair pair, MarketParams market, RecoveryOptions opts)
    : pair_(std::move(pair)), market_(market), opts_(std::move(opts)), discount_(pair_, market_, opts_.base) {}

double RecoveredUtility::F(double t, double w) const { return compute_F(pair_, market_, A(t), t, w, w0(t)); }

double RecoveredUtility::f(double t, double z) const { return invert_F(pair_, market_, A(t), t, z, w0(t)); }

double RecoveredUtility::f_z(double t, double z) const {
    const double h = 1e-4 * z;
    return (f(t, z + h) - f(t, z - h)) / (2.0 * h);
}

double RecoveredUtility::cbar(double t) const {
    const double bar = pair_.wbar(t);
    if (std::isfinite(bar)) return pair_.c(t, bar);
    const double c1 = pair_.c(t, 1e6);
    const double c2 = pair_.c(t, 2e6);
    return std::abs(c2 - c1) <= 1e-9 * std::max(1.0, std::abs(c2)) ? c2 : kInf;
}

double RecoveredUtility::c0(double t) const { return opts_.c0 ? opts_.c0(t) : pair_.c(t, w0(t)); }

double RecoveredUtility::Y(double t, double c) const {
    if (!(c > 0.0)) return 0.0;
    if (c >= cbar(t)) return pair_.wbar(t);
    auto g = [&](double u) { return pair_.c(t, std::exp(u)); };
    return std::exp(invert_in_log_wealth(g, c, std::log(w0(t)), pair_.wbar(t), "Y"));
}

double RecoveredUtility::uc(double t, double c) const {
    if (!(c > 0.0)) return kInf;
    if (c >= cbar(t)) return 0.0;
    return F(t, Y(t, c));
}

double RecoveredUtility::H(double t, double c) const {
    const double w[] = {Y(t, c)};
    return H_along_wealth(t, w)[0];
}

std::vector<double> RecoveredUtility::H_along_wealth(double t, std::span<const double> w) const {
    const double base_c = c0(t);
    if (!(base_c > 0.0) || base_c >= cbar(t)) fail(ErrorKind::OutOfRange, "H: base consumption outside (0, c-bar)");
    const double bar = pair_.wbar(t);
    const double wb = Y(t, base_c);
    const double k = market_.theta / market_.sigma;

    std::vector<double> target(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(w[i] > 0.0)) fail(ErrorKind::OutOfDomain, "H: wealth must be > 0");
        if (std::isinf(w[i])) fail(ErrorKind::OutOfRange, "H at satiation needs a finite wealth frontier");
        // F vanishes at w-bar like a power of the distance, so stopping a hair short changes nothing.
        target[i] = std::min(w[i], bar * (1.0 - 1e-12));
    }
    std::vector<std::size_t> order(w.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return target[a] < target[b]; });

    std::vector<double> out(w.size());
    auto sweep = [&](auto first, auto last, bool up) {
        double s = wb;
        double Fs = F(t, wb);
        double acc = 0.0;
        for (auto it = first; it != last; ++it) {
            const double goal = target[*it];
            while (s != goal) {
                const double next = up ? std::min(goal, 1.5 * s) : std::max(goal, s / 1.5);
                auto inner = [&](double x) {
                    return quad([&](double xi) { return 1.0 / pair_.pi(t, xi); }, s, x, 1e-13);
                };
                auto g = [&](double x) {
                    return Fs * std::exp(-k * inner(x)) * pair_.c_partial(t, x, Derivative::w);
                };
                const double scale = std::abs(g(s) * (next - s)) + 1e-300;
                acc += quad(g, s, next, 1e-11 * scale);
                Fs *= std::exp(-k * inner(next));
                s = next;
            }
            out[*it] = acc;
        }
    };
    const auto split = std::lower_bound(order.begin(), order.end(), wb,
                                        [&](std::size_t i, double v) { return target[i] < v; });
    sweep(split, order.end(), true);
    sweep(std::make_reverse_iterator(split), order.rend(), false);
    return out;
}

}  // namespace invmerton
