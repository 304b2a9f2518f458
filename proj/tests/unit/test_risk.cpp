#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "invmerton/blackpde/dual.hpp"
#include "invmerton/error.hpp"
#include "invmerton/risk/risk.hpp"

using namespace invmerton;
using namespace fixtures;
using doctest::Approx;

namespace {

struct Fixture {
    const char* name;
    StrategyPair pair;
    MarketParams market;
    RecoveryOptions opts;
};

std::vector<Fixture> consistent_fixtures() {
    return {
        {"crra", crra_pair(), crra_market(), {}},
        {"convex_c", convex_c_pair(), convex_c_market(), {}},
        {"bounded_wealth", bounded_wealth_pair(), bounded_wealth_market(), {BaseCurve::fixed(0.5), {}}},
        {"bounded_cons", bounded_cons_pair(), bounded_cons_market(), {BaseCurve::fixed(std::log(2.0)), {}}},
    };
}

// d rho / dc from the strategy route by central differences.
double rho_c_strategy(const RecoveredUtility& u, double t, double c) {
    const double h = std::min(1e-4 * c, 0.25 * (u.cbar(t) - c));
    return (rho_from_strategy(u, t, c + h) - rho_from_strategy(u, t, c - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("rho from the strategy") {
    const auto m = crra_market();
    CHECK(rho_from_strategy(crra_pair(), m, 0.0, 2.0) == Approx(0.4).epsilon(1e-12));
    RecoveredUtility u(crra_pair(), m);
    for (double t : {0.0, 1.0, 5.0}) {
        for (double c : {0.01, 0.3, 2.0}) {
            CHECK(rho_from_strategy(u, t, c) == Approx(crra_R / c).epsilon(1e-12));
            CHECK(rho_from_strategy(u, t, c) == Approx(2.0 * rho_from_strategy(u, t, 2.0 * c)).epsilon(1e-12));
        }
    }

    RecoveredUtility bc(bounded_cons_pair(), bounded_cons_market(), {BaseCurve::fixed(std::log(2.0)), {}});
    for (double c : {0.05, 0.1, 0.2}) {
        const double rho = rho_from_strategy(bc, 1.0, c);
        CHECK(std::isfinite(rho));
        CHECK(rho > 0.0);
    }
    CHECK_THROWS_AS(rho_from_strategy(bc, 1.0, 0.3), Error);
}

TEST_CASE("DARA criterion") {
    RecoveredUtility crra(crra_pair(), crra_market());
    const auto p = classify_dara_stoch(crra, default_risk_probes(crra));
    CHECK(p.verdict == RiskVerdict::DARA);
    for (const auto& s : p.samples) CHECK(s.margin == Approx(1.0 / s.w).epsilon(1e-10));

    RecoveredUtility cc(convex_c_pair(), convex_c_market());
    const auto q = classify_dara_stoch(cc, default_risk_probes(cc));
    CHECK(q.verdict == RiskVerdict::DARA);
    CHECK(q.min_margin > 0.0);
}

TEST_CASE("DRRA criterion") {
    RecoveredUtility crra(crra_pair(), crra_market());
    const auto p = classify_drra(crra, default_risk_probes(crra));
    CHECK(p.verdict == RiskVerdict::CRRA);
    for (const auto& s : p.samples) CHECK(std::abs(s.margin) <= s.tol);

    // c proportional to pi, both linear
    const StrategyPair prop{families::linear(0.2), families::linear(0.4), {}};
    const auto m = MarketParams::make(0.05, 0.3, 0.1);
    RecoveredUtility pu(prop, m);
    for (const auto& s : classify_drra(pu, default_risk_probes(pu)).samples) CHECK(std::abs(s.margin) <= 1e-12);

    // the relative verdict agrees with the sign of d(c rho)/dc on the strategy route
    RecoveredUtility bc(bounded_cons_pair(), bounded_cons_market(), {BaseCurve::fixed(std::log(2.0)), {}});
    const auto r = classify_drra(bc, default_risk_probes(bc));
    for (const auto& s : r.samples) {
        if (std::abs(s.margin) <= 1e3 * s.tol) continue;
        const double h = std::min(1e-4 * s.c, 0.25 * (0.3 - s.c));
        const double up = (s.c + h) * rho_from_strategy(bc, s.t, s.c + h);
        const double down = (s.c - h) * rho_from_strategy(bc, s.t, s.c - h);
        INFO("t=" << s.t << " c=" << s.c);
        CHECK((s.margin > 0.0) == ((up - down) < 0.0));
    }
    // regression value: relative risk aversion rises with consumption towards satiation
    CHECK(r.verdict == RiskVerdict::IRRA);
}

TEST_CASE("rho from the recovered utility") {
    RecoveredUtility crra(crra_pair(), crra_market());
    for (double t : {0.0, 1.0, 5.0}) {
        for (double c : {0.05, 0.5, 1.0}) CHECK(rel(rho_from_utility(crra, t, c), crra_R / c) < 1e-4);
    }

    RecoveredUtility bw(bounded_wealth_pair(), bounded_wealth_market(), {BaseCurve::fixed(0.5), {}});
    const double t = 1.0;
    double prev = 0.0;
    for (double gap : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const double rho = rho_from_utility(bw, t, 0.5 * (1.0 - gap));
        CHECK(rho > prev);
        prev = rho;
    }
    CHECK_THROWS_AS(rho_from_utility(bw, t, 0.5), Error);
    CHECK_THROWS_AS(rho_from_utility(bw, t, 0.7), Error);
}

TEST_CASE("routes agree") {
    for (const auto& fx : consistent_fixtures()) {
        RecoveredUtility u(fx.pair, fx.market, fx.opts);
        const auto probes = default_risk_probes(u);
        for (const auto& [t, c] : probes) {
            const double a = rho_from_strategy(u, t, c);
            const double b = rho_from_utility(u, t, c);
            INFO(fx.name << " t=" << t << " c=" << c);
            CHECK(a > 0.0);
            CHECK(std::abs(a - b) <= 1e-3 * a);
        }
        // the DARA verdict matches the sign of d rho/dc on the strategy route
        const auto prof = classify_dara_stoch(u, probes);
        for (const auto& s : prof.samples) {
            if (std::abs(s.margin) <= 1e3 * s.tol) continue;
            INFO(fx.name << " t=" << s.t << " c=" << s.c << " margin=" << s.margin);
            CHECK((s.margin > 0.0) == (rho_c_strategy(u, s.t, s.c) < 0.0));
        }
        const auto util = rho_profile_from_utility(u, probes);
        if (prof.verdict != RiskVerdict::MIXED) CHECK(util.verdict == prof.verdict);
    }
}

TEST_CASE("rho does not depend on the base of H") {
    RecoveredUtility a(convex_c_pair(), convex_c_market());
    RecoveredUtility b(convex_c_pair(), convex_c_market(), {BaseCurve::fixed(1.0), [](double t) { return 0.1 + t; }});
    for (double c : {0.05, 0.3, 1.0}) {
        CHECK(rho_from_utility(a, 1.0, c) == Approx(rho_from_utility(b, 1.0, c)).epsilon(1e-12));
        CHECK(a.H(1.0, c) - b.H(1.0, c) == Approx(a.H(1.0, 0.5) - b.H(1.0, 0.5)).epsilon(1e-9));
    }
}
