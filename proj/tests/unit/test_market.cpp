#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "doctest.h"
#include "invmerton/error.hpp"
#include "invmerton/market/market.hpp"
#include "invmerton/market/strategy_pair.hpp"
#include "invmerton/market/surface.hpp"
#include "invmerton/market/tabulated.hpp"

using namespace invmerton;
using doctest::Approx;

TEST_CASE("market parameters are validated") {
    CHECK_NOTHROW(MarketParams::make(0.03, 0.2, 0.08));
    CHECK_THROWS_AS(MarketParams::make(0.03, 0.0, 0.08), Error);
    CHECK_THROWS_AS(MarketParams::make(0.03, 0.2, 0.0), Error);
    CHECK_THROWS_AS(MarketParams::make(0.03, 0.2, -1.0), Error);
    CHECK_NOTHROW(MarketParams::risk_neutral(0.03, 0.2));
}

TEST_CASE("state price density") {
    const auto m = MarketParams::make(0.03, 0.2, 0.08);
    CHECK(state_price_density(m, 0.0, 1.7) == 1.0);
    CHECK(std::abs(state_price_density(m, 1.0, 0.0) - std::exp(-0.0332)) < 1e-9);
    for (double t : {0.5, 2.0, 7.0}) {
        CHECK(state_price_density(m, t, -m.theta * t) ==
              Approx(std::exp((0.5 * m.theta * m.theta - m.r) * t)).epsilon(1e-14));
    }
    // multiplicative over increments
    const double t = 1.3, s = 0.7, bt = 0.4, bts = -0.25;
    const double lhs = state_price_density(m, t + s, bts);
    const double rhs = state_price_density(m, t, bt) *
                       std::exp(-m.r * s - m.theta * (bts - bt) - 0.5 * m.theta * m.theta * s);
    CHECK(lhs == Approx(rhs).epsilon(1e-14));
}

TEST_CASE("family values") {
    CHECK(families::linear(0.1).value(0.0, 2.0) == Approx(0.2));
    CHECK(families::power_shift(0.5, 60.0, 0.2).value(1.0, 0.0) == 0.0);
    CHECK(families::logistic_bounded().value(0.0, 0.5) == 0.25);
    CHECK(families::logistic_bounded().value(0.0, 1.5) == 0.0);
    CHECK(families::power(1.0, 2.0).value(0.0, 3.0) == Approx(9.0));
    // cubic bounded reaches r at the frontier and stays there
    auto cb = families::cubic_bounded(0.5, 0.25, 0.1);
    CHECK(cb.value(0.0, 1.0 - 1e-12) == Approx(0.5).epsilon(1e-9));
    CHECK(cb.value(0.0, 3.0) == 0.5);
    // exp-bounded consumption saturates at beta when r = 0
    CHECK(families::exp_bounded_consumption(0.0, 0.5, 0.3).value(0.0, 50.0) == Approx(0.3));
    CHECK_THROWS_AS(families::linear(1.0).value(0.0, -1.0), Error);
}

TEST_CASE("family partial examples") {
    CHECK(families::linear(0.37).partial(2.0, 5.0, Derivative::w) == 0.37);
    CHECK(families::logistic_bounded().partial(0.0, 0.3, Derivative::ww) == -2.0);
    CHECK(families::exp_bounded().partial(0.0, 0.0, Derivative::w) == 1.0);
    CHECK(std::abs(families::power_shift(0.5, 60.0, 0.2).partial(0.0, 0.0, Derivative::w) - 12.5) < 1e-12);
}

TEST_CASE("g families match their defining wealth paths") {
    for (auto choice : {GChoice::Log1p, GChoice::OneMinusExp}) {
        auto c = families::g_family(choice);
        for (double t : {0.5, 1.0, 2.0}) {
            for (double x : {0.3, 1.0, 2.0}) {
                // c(t, w(t,x)) = -d/dt w(t,x)
                const double h = 1e-5;
                const double wt = (gfamily::wealth(choice, t + h, x) - gfamily::wealth(choice, t - h, x)) / (2 * h);
                CHECK(c.value(t, gfamily::wealth(choice, t, x)) == Approx(-wt).epsilon(1e-8));
            }
        }
        CHECK(c.value(0.0, 0.8) == Approx(0.32));
    }
    CHECK(std::abs(gfamily::wealth(GChoice::Log1p, 2.0, 1.0) - std::log(3.0) / 2.0) < 1e-15);
    auto ome = families::g_family(GChoice::OneMinusExp);
    CHECK(ome.value(2.0, 0.6) == 0.25);  // beyond w-bar = 1/2: 1/t^2
}

namespace {

struct Named {
    const char* label;
    StrategySurface surface;
    double w_limit;  // probes at or above this are outside the smooth region
};

std::vector<Named> all_families() {
    const double inf = 1e300;
    return {
        {"linear", families::linear(0.3), inf},
        {"power", families::power(0.7, 2.0), inf},
        {"power_shift convex", families::power_shift(2.1, -60.0, 1.0 / 30.0), inf},
        {"power_shift concave", families::power_shift(0.5, 60.0, 0.2), inf},
        {"logistic", families::logistic_bounded(), 1.0},
        {"exp_bounded", families::exp_bounded(), inf},
        {"cubic_bounded", families::cubic_bounded(0.5, 0.25, 0.1), 1.0},
        {"exp_bounded_consumption", families::exp_bounded_consumption(0.0, 0.5, 0.3), inf},
        {"sqrt_convex", families::sqrt_convex(0.25, 0.6, 0.4, 0.1, 1.25), inf},
        {"exp_convex", families::exp_convex(0.4, 0.1, 1.25), inf},
        {"g log1p", families::g_family(GChoice::Log1p), inf},
        {"g one_minus_exp", families::g_family(GChoice::OneMinusExp), inf},
    };
}

}  // namespace

TEST_CASE("analytic partials agree with finite differences") {
    for (const auto& fam : all_families()) {
        for (double t : {0.1, 1.0, 5.0}) {
            for (double w : {0.1, 0.5, 1.0, 2.0, 10.0}) {
                if (w >= fam.w_limit) continue;
                if (fam.surface.name() == "g_family" && w * t >= 0.9) continue;  // near or past w-bar = 1/t
                for (auto d : {Derivative::t, Derivative::w, Derivative::ww, Derivative::www}) {
                    REQUIRE(fam.surface.has_analytic(d));
                    const double a = fam.surface.partial(t, w, d);
                    const double f = fam.surface.fd(t, w, d);
                    INFO(fam.label << " d" << to_string(d) << " at t=" << t << " w=" << w << ": " << a << " vs " << f);
                    CHECK(std::abs(a - f) <= 1e-5 * std::max(1.0, std::abs(a)));
                }
            }
        }
    }
}

TEST_CASE("sqrt_convex limits at zero and infinity") {
    const double sigma = 0.25, r = 0.6, kappa = 0.4, alpha = 0.1, a = 1.25;
    auto pi = families::sqrt_convex(sigma, r, kappa, alpha, a);
    CHECK(pi.value(0.0, 0.0) == 0.0);
    const double d2 = std::sqrt(2.0) / sigma * std::sqrt(r - kappa + alpha * a);
    const double d1 = std::sqrt(2.0) / sigma * std::sqrt(r - kappa);
    CHECK(pi.partial(0.0, 0.0, Derivative::w) == Approx(d2).epsilon(1e-14));
    CHECK(pi.partial(0.0, 1e-7, Derivative::w) == Approx(d2).epsilon(1e-6));
    CHECK(pi.partial(0.0, 1e6, Derivative::w) == Approx(d1).epsilon(1e-6));
    CHECK(pi.partial(0.0, 0.0, Derivative::ww) == Approx(pi.partial(0.0, 1e-6, Derivative::ww)).epsilon(1e-4));
}

TEST_CASE("custom surfaces fall back to finite differences") {
    families::CustomSpec spec;
    spec.value = [](double t, double w) { return t * w * w; };
    auto s = families::custom(spec);
    CHECK_FALSE(s.has_analytic(Derivative::w));
    CHECK(s.partial(2.0, 3.0, Derivative::w) == Approx(12.0).epsilon(1e-8));
    CHECK(s.partial(2.0, 3.0, Derivative::t) == Approx(9.0).epsilon(1e-8));
    CHECK(s.partial(2.0, 3.0, Derivative::ww) == Approx(4.0).epsilon(1e-6));
}

TEST_CASE("tabulated surfaces") {
    auto src = families::power_shift(0.5, 60.0, 0.2);
    std::vector<double> tk{0.0, 1.0, 2.5};
    std::vector<double> wk{0.0, 0.1, 0.5, 1.0, 4.0};
    auto data = sample_surface(src, tk, wk);
    auto tab = make_tabulated(data);
    for (double t : tk) {
        for (double w : wk) CHECK(tab.value(t, w) == src.value(t, w));
    }
    // bilinear between knots, constant beyond the last w knot
    CHECK(tab.value(0.5, 0.3) == Approx(0.5 * (src.value(0, 0.1) + src.value(0, 0.5))));
    CHECK(tab.value(1.0, 9.0) == src.value(1.0, 4.0));
    CHECK_THROWS_AS(tab.value(3.0, 1.0), Error);
    CHECK_THROWS_AS(tab.value(-0.1, 1.0), Error);

    auto bad = data;
    bad.w[2] = bad.w[1];
    CHECK_THROWS_AS(make_tabulated(bad), Error);
    auto single = TabulatedData{{0.0}, {0.0, 1.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(make_tabulated(single), Error);
}

TEST_CASE("tabulated csv round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "invmerton_test_market";
    std::filesystem::create_directories(dir);
    auto data = sample_surface(families::exp_bounded(), {0.0, 2.0}, {0.0, 0.25, 1.0, 3.0});
    write_tabulated_csv(data, dir / "pi.csv");
    auto back = read_tabulated_csv(dir / "pi.csv");
    CHECK(back.t == data.t);
    CHECK(back.w == data.w);
    CHECK(back.values == data.values);

    {
        std::ofstream f(dir / "bad.csv");
        f << "t,w,val\n0,0,0\n";
    }
    CHECK_THROWS_AS(read_tabulated_csv(dir / "bad.csv"), Error);
    {
        std::ofstream f(dir / "holes.csv");
        f << "t,w,value\n0,0,0\n0,1,1\n1,0,0\n";
    }
    CHECK_THROWS_AS(read_tabulated_csv(dir / "holes.csv"), Error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("strategy pair frontier") {
    StrategyPair pair{families::cubic_bounded(0.5, 0.25, 0.1), families::logistic_bounded(),
                      [](double) { return 1.0; }};
    CHECK(pair.pi(0.0, 1.2) == 0.0);
    CHECK(pair.c(0.0, 1.2) == pair.consumption.value(0.0, 1.0));
    CHECK(pair.pi_partial(0.0, 1.2, Derivative::w) == 0.0);
    CHECK(check_origin(pair, {0.0, 1.0}).empty());

    StrategyPair shifted{families::linear(0.1), families::linear(0.5, 0.1), {}};
    CHECK(check_origin(shifted, {0.0}).size() == 1);
}
