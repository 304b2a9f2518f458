#include "invmerton/blackpde/regularity.hpp"

#include <algorithm>
#include <cmath>

#include "invmerton/blackpde/dual.hpp"
#include "invmerton/error.hpp"
#include "invmerton/numerics/grid.hpp"

namespace invmerton {
namespace {

bool looks_time_homogeneous(const StrategySurface& s, const std::vector<double>& t_probes) {
    if (s.time_homogeneous()) return true;
    for (double t : t_probes) {
        for (double w : {0.1, 1.0, 10.0}) {
            if (std::abs(s.partial(t, w, Derivative::t)) > 1e-8 * std::max(1.0, std::abs(s.value(t, w)))) return false;
        }
    }
    return true;
}

// Partial integrals of 1/pi over successive decades approaching an end. The
// integral diverges (to the resolution of the test) when the last piece is at
// least half the one before, as for pi ~ w or pi ~ (wbar - w).
bool diverges(const StrategyPair& pair, double t, double a0, double a1, double a2) {
    const double d1 = std::abs(log_pi_integral(pair, t, a0, a1));
    const double d2 = std::abs(log_pi_integral(pair, t, a1, a2));
    return d1 > 0.0 && d2 >= 0.5 * d1;
}

}  // namespace

RegularityReport check_regularity(const StrategyPair& pair, const MarketParams& market, const RegularityConfig& cfg) {
    market.validate();
    if (cfg.t_probes.empty() || !(cfg.w_lo > 0.0) || !(cfg.w_hi > cfg.w_lo) || cfg.n_w < 2) {
        fail(ErrorKind::InvalidArgument, "check_regularity: bad configuration");
    }
    RegularityReport rep;
    if (!looks_time_homogeneous(pair.investment, cfg.t_probes)) {
        rep.note = "pi is not time-homogeneous; the sufficient conditions do not apply";
        return rep;
    }
    rep.applicable = true;

    const double t0 = cfg.t_probes.front();
    const double bar = pair.wbar(t0);
    const bool bounded = std::isfinite(bar);
    const double top = bounded ? bar * (1.0 - 1e-4) : cfg.w_hi;
    const auto grid = log_space(cfg.w_lo, top, cfg.n_w);

    auto pi_w = [&](double w) { return pair.pi_partial(t0, w, Derivative::w); };
    rep.pi_w_limit_zero = 2.0 * pi_w(0.5 * cfg.w_lo) - pi_w(cfg.w_lo);
    if (bounded) {
        const double d = bar - top;
        rep.pi_w_limit_top = 2.0 * pi_w(bar - 0.5 * d) - pi_w(bar - d);
    } else {
        rep.pi_w_limit_top = 2.0 * pi_w(2.0 * top) - pi_w(top);
    }
    rep.delta1 = std::min(rep.pi_w_limit_zero, rep.pi_w_limit_top);
    rep.delta2 = std::max(rep.pi_w_limit_zero, rep.pi_w_limit_top);

    rep.pi_w_min = rep.pi_w_max = pi_w(grid.front());
    for (double w : grid) {
        rep.pi_w_min = std::min(rep.pi_w_min, pi_w(w));
        rep.pi_w_max = std::max(rep.pi_w_max, pi_w(w));
    }
    const double slack = 1e-6 * std::max(1.0, std::abs(rep.delta2));
    rep.bounds_hold = rep.pi_w_min >= rep.delta1 - slack && rep.pi_w_max <= rep.delta2 + slack;

    bool first = true;
    for (double t : cfg.t_probes) {
        for (double w : grid) {
            if (w >= pair.wbar(t)) continue;
            const double cw = pair.c_partial(t, w, Derivative::w);
            rep.kappa1 = first ? cw : std::min(rep.kappa1, cw);
            rep.kappa2 = first ? cw : std::max(rep.kappa2, cw);
            first = false;
        }
        // limits at the ends, as for pi_w
        auto c_w = [&](double w) { return pair.c_partial(t, w, Derivative::w); };
        const double ends[] = {2.0 * c_w(0.5 * cfg.w_lo) - c_w(cfg.w_lo),
                               bounded ? c_w(top) : 2.0 * c_w(2.0 * top) - c_w(top)};
        for (double v : ends) {
            rep.kappa1 = std::min(rep.kappa1, v);
            rep.kappa2 = std::max(rep.kappa2, v);
        }
    }

    const double k = market.theta / market.sigma;
    rep.condition_a = k <= rep.delta1;
    rep.condition_b = rep.delta1 > 0.0 && rep.delta1 < k && k <= rep.delta2 &&
                      market.theta * (1.0 - rep.delta2 / rep.delta1) + market.sigma * rep.delta2 > 0.0;
    rep.shortcut = rep.delta1 > 0.5 * rep.delta2;

    const double base = bounded ? 0.5 * bar : 1.0;
    rep.integral_diverges_at_zero = diverges(pair, t0, base * 1e-4, base * 1e-8, base * 1e-12);
    if (bounded) {
        const double gap = bar - base;
        rep.integral_diverges_at_top =
            diverges(pair, t0, bar - gap * 1e-4, bar - gap * 1e-8, bar - gap * 1e-12);
    } else {
        rep.integral_diverges_at_top = diverges(pair, t0, 1e4, 1e8, 1e12);
    }
    rep.pi_integrals_diverge = rep.integral_diverges_at_zero && rep.integral_diverges_at_top;

    const bool positive_bounds = rep.delta1 > 0.0 && std::isfinite(rep.delta2) && rep.kappa1 > 0.0 &&
                                 std::isfinite(rep.kappa2);
    rep.lemma_applies = (rep.condition_a || rep.condition_b) && positive_bounds && rep.bounds_hold &&
                        rep.pi_integrals_diverge && !bounded;
    if (!positive_bounds) rep.note = "pi_w or c_w is not bounded away from 0 and infinity";
    else if (!rep.bounds_hold) rep.note = "pi_w leaves [delta1, delta2] on the probe grid";
    else if (!(rep.condition_a || rep.condition_b)) rep.note = "theta/sigma is outside the admissible range";
    return rep;
}

}  // namespace invmerton
