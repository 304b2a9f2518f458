#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "invmerton/blackpde/dual.hpp"
#include "invmerton/error.hpp"
#include "invmerton/montecarlo/montecarlo.hpp"

using namespace invmerton;
using namespace fixtures;
using doctest::Approx;

namespace {

SimConfig small(std::size_t n, double dt, double horizon) {
    SimConfig cfg;
    cfg.n_paths = n;
    cfg.dt = dt;
    cfg.horizon = horizon;
    return cfg;
}

// CRRA with H based at c0 = 1, so h(t) has the closed form below.
RecoveredUtility crra_unit_base() {
    return RecoveredUtility(crra_pair(), crra_market(), {BaseCurve::fixed(1.0), [](double) { return 1.0; }});
}

double crra_h(double t) {
    return (kappa * std::exp(-kappa * t) - std::exp(crra_xi * t) * std::pow(kappa, crra_R)) / (1.0 - crra_R);
}

}  // namespace

TEST_CASE("config validation") {
    CHECK_THROWS_AS(small(0, 0.1, 1.0).validate(), Error);
    CHECK_THROWS_AS(small(1, 0.0, 1.0).validate(), Error);
    CHECK_THROWS_AS(small(1, 0.1, 0.05).validate(), Error);
    CHECK(small(1, 1e-2, 60.0).steps() == 6000);
    CHECK_THROWS_AS(simulate(crra_pair(), crra_market(), 0.0, small(1, 0.1, 1.0)), Error);
    CHECK_THROWS_AS(simulate(bounded_wealth_pair(), bounded_wealth_market(), 1.0, small(1, 0.1, 1.0)), Error);
}

TEST_CASE("zero investment decays deterministically") {
    const StrategyPair pair{families::linear(kappa), families::linear(0.0), {}};
    const auto ens = simulate(pair, crra_market(), 1.0, small(3, 1e-3, 10.0));
    const double exact = std::exp((0.03 - kappa) * 10.0);
    for (std::size_t p = 0; p < 3; ++p) {
        const double w = ens.W[ens.at(p, ens.n_times() - 1)];
        CHECK(std::abs(w - exact) <= 10.0 * 1e-3 * exact);
    }
    CHECK(ens.times.back() == Approx(10.0));
}

TEST_CASE("zero Sharpe ratio log increments") {
    const auto m = MarketParams::risk_neutral(0.03, 0.2);
    const auto ens = simulate(crra_pair(), m, 1.0, small(4000, 1e-2, 2.0));
    std::vector<double> logs(ens.n_paths);
    for (std::size_t p = 0; p < ens.n_paths; ++p) logs[p] = std::log(ens.W[ens.at(p, ens.n_times() - 1)]);
    double mean = 0.0, var = 0.0;
    for (double v : logs) mean += v;
    mean /= logs.size();
    for (double v : logs) var += (v - mean) * (v - mean);
    const double se = std::sqrt(var / (logs.size() - 1) / logs.size());
    const double drift = (0.03 - kappa - 0.5 * phi * phi * 0.04) * 2.0;
    CHECK(std::abs(mean - drift) <= 4.0 * se);
}

TEST_CASE("bounded wealth stays below the frontier") {
    SimConfig cfg = small(500, 1e-3, 5.0);
    cfg.record_every = 10;
    const auto ens = simulate(bounded_wealth_pair(), bounded_wealth_market(), 0.5, cfg);
    const double slack = 2.0 * std::sqrt(cfg.dt) * 0.25;
    CHECK(*std::max_element(ens.W.begin(), ens.W.end()) < 1.0 + slack);
    CHECK(*std::min_element(ens.W.begin(), ens.W.end()) >= 0.0);
    for (double z : ens.Z) CHECK(z > 0.0);
}

TEST_CASE("dual wealth") {
    const auto m = crra_market();
    RecoveredUtility u(crra_pair(), m);
    const double x = 1.7;
    const auto ens = simulate(crra_pair(), m, x, small(20, 0.05, 5.0));
    const auto dual = dual_wealth(u, x, ens);
    const double mu = phi * m.sigma * m.theta + m.r - kappa - 0.5 * m.sigma * m.sigma * phi * phi;
    for (std::size_t p = 0; p < ens.n_paths; ++p) {
        CHECK(dual[ens.at(p, 0)] == x);
        for (std::size_t k = 1; k < ens.n_times(); ++k) {
            const std::size_t i = ens.at(p, k);
            const double closed = x * std::exp(phi * m.sigma * ens.B[i] + mu * ens.times[k]);
            CHECK(std::abs(dual[i] - closed) <= 1e-8 * closed);
        }
    }
}

TEST_CASE("pathwise dual identity converges") {
    RecoveredUtility u(crra_pair(), crra_market());
    const double dts[] = {1e-2, 5e-3, 2.5e-3};
    const auto rep = dual_convergence_study(u, 1.0, dts, 5.0, 100, 7);
    REQUIRE(rep.ratios.size() == 2);
    for (double r : rep.ratios) CHECK(r >= 1.3);
    CHECK(rep.levels.back().error < rep.levels.front().error);
}

TEST_CASE("budget identity") {
    const auto m = crra_market();
    SimConfig cfg = small(4000, 0.05, 60.0);
    const auto rep = verify_budget(crra_pair(), m, 1.0, cfg);
    const double truncated = 1.0 - std::exp(-kappa * 60.0);
    CHECK(rep.std_error > 0.0);
    CHECK(std::abs(rep.estimate - truncated) <= 3.0 * rep.std_error);
    CHECK(rep.truncation_adjustment == Approx(std::exp(-kappa * 60.0)).epsilon(0.2));
    CHECK(rep.pass);

    const StrategyPair idle{families::linear(0.0), families::linear(phi), {}};
    const auto none = verify_budget(idle, m, 1.0, small(100, 0.1, 20.0));
    CHECK(none.estimate == 0.0);
    CHECK_FALSE(none.pass);

    // horizon too short for the tail to be negligible
    CHECK_THROWS_AS(verify_budget(crra_pair(), m, 1.0, small(200, 0.1, 5.0)), Error);
}

TEST_CASE("budget determinism across threads") {
    SimConfig a = small(600, 0.1, 40.0);
    SimConfig b = a;
    a.threads = 1;
    b.threads = 3;
    const auto ra = verify_budget(crra_pair(), crra_market(), 1.0, a);
    const auto rb = verify_budget(crra_pair(), crra_market(), 1.0, b);
    CHECK(ra.estimate == rb.estimate);
    CHECK(ra.std_error == rb.std_error);
    CHECK(ra.truncation_adjustment == rb.truncation_adjustment);

    const auto ea = simulate(convex_c_pair(), convex_c_market(), 1.0, a);
    const auto eb = simulate(convex_c_pair(), convex_c_market(), 1.0, b);
    CHECK(ea.W == eb.W);
    CHECK(ea.Z == eb.Z);
    CHECK(ea.B == eb.B);
}

TEST_CASE("h estimator") {
    const auto u = crra_unit_base();
    const double grid[] = {0.0, 0.5, 1.0, 2.0};
    const auto h = estimate_h(u, 1.0, grid, 20000, 11);
    REQUIRE(h.size() == 4);
    CHECK(h[0].h == Approx(u.H(0.0, kappa)).epsilon(1e-12));
    CHECK(h[0].std_error == 0.0);
    CHECK(h[0].h == Approx(crra_h(0.0)).epsilon(1e-8));
    for (std::size_t j = 1; j < 4; ++j) {
        INFO("t=" << h[j].t << " h=" << h[j].h << " exact=" << crra_h(h[j].t) << " se=" << h[j].std_error);
        CHECK(std::abs(h[j].h - crra_h(h[j].t)) <= 3.0 * h[j].std_error);
    }

    // E[H - h]^+ first grows with the spread of W, then decays at least exponentially
    const double tail[] = {2.0, 5.0, 10.0, 20.0, 40.0};
    const auto late = estimate_h(u, 1.0, tail, 5000, 13);
    for (std::size_t j = 2; j < late.size(); ++j) CHECK(late[j].positive_part < late[j - 1].positive_part);
    const double rate_mid = std::log(late[2].positive_part / late[3].positive_part) / 10.0;
    const double rate_end = std::log(late[3].positive_part / late[4].positive_part) / 20.0;
    CHECK(rate_mid > 0.0);
    CHECK(rate_end >= 0.9 * rate_mid);
}

TEST_CASE("discounted wealth") {
    const auto m = crra_market();
    SimConfig cfg = small(4000, 0.02, 10.0);
    cfg.record_every = 25;
    const auto ens = simulate(crra_pair(), m, 1.0, cfg);
    const auto sm = supermartingale_check(ens);
    CHECK(sm.violations == 0);
    CHECK(sm.series.mean.front() == 1.0);
    const double last = sm.series.mean.back();
    CHECK(std::abs(last - std::exp(-kappa * 10.0)) <= 3.0 * sm.series.std_error.back());

    const auto cc = simulate(convex_c_pair(), convex_c_market(), 1.0, cfg);
    CHECK(supermartingale_check(cc).violations == 0);
    const auto bw = simulate(bounded_wealth_pair(), bounded_wealth_market(), 0.5, cfg);
    CHECK(supermartingale_check(bw).violations == 0);
}
