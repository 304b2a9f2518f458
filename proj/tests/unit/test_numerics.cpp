#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "invmerton/error.hpp"
#include "invmerton/numerics/finite_difference.hpp"
#include "invmerton/numerics/grid.hpp"
#include "invmerton/numerics/ode.hpp"
#include "invmerton/numerics/parallel.hpp"
#include "invmerton/numerics/quadrature.hpp"
#include "invmerton/numerics/rng.hpp"
#include "invmerton/numerics/root.hpp"
#include "invmerton/numerics/tail_fit.hpp"

using namespace invmerton;
using doctest::Approx;

TEST_CASE("grid validates and hits endpoints exactly") {
    Grid1D g(0.0, 1.0, 101);
    CHECK(g.size() == 101);
    CHECK(g[100] == 1.0);
    CHECK(g.spacing() == Approx(0.01));
    CHECK_THROWS_AS(Grid1D(1.0, 0.0, 3), Error);
    CHECK_THROWS_AS(Grid1D(0.0, 1.0, 1), Error);
    const auto ls = log_space(1e-2, 1e2, 5);
    CHECK(ls.front() == 1e-2);
    CHECK(ls.back() == 1e2);
    CHECK(ls[2] == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("rk4 on exponential decay") {
    const auto path = integrate_ode([](double, double y) { return -y; }, 0.0, 1.0, Grid1D(0.0, 1.0, 101));
    CHECK(std::abs(path.back().y - std::exp(-1.0)) < 1e-8);

    const auto flat = integrate_ode([](double, double) { return 0.0; }, 0.0, 3.0, Grid1D(0.0, 5.0, 11));
    for (const auto& s : flat) CHECK(s.y == 3.0);

    const double crra = rk4_advance([](double, double y) { return -0.1 * y; }, 0.0, 1.0, 10.0, 1000);
    CHECK(std::abs(crra - 0.367879441171) < 1e-7);
}

TEST_CASE("rk4 error falls like h^4") {
    auto rhs = [](double, double y) { return -y; };
    const double exact = std::exp(-1.0);
    const double e1 = std::abs(rk4_advance(rhs, 0.0, 1.0, 1.0, 10) - exact);
    const double e2 = std::abs(rk4_advance(rhs, 0.0, 1.0, 1.0, 20) - exact);
    CHECK(e1 / e2 >= 12.0);
}

TEST_CASE("rk4 absorbing floor clamps and holds") {
    // y' = -1 crosses zero at t = 0.5
    const auto path = integrate_ode([](double, double) { return -1.0; }, 0.0, 0.5, Grid1D(0.0, 2.0, 41), 0.0);
    CHECK(path.back().y == 0.0);
    for (const auto& s : path) CHECK(s.y >= 0.0);
}

TEST_CASE("rk4 rejects non-finite rhs") {
    CHECK_THROWS_AS(integrate_ode([](double, double) { return std::nan(""); }, 0.0, 1.0, Grid1D(0.0, 1.0, 3)),
                    Error);
}

TEST_CASE("adaptive simpson") {
    CHECK(quad([](double x) { return x; }, 0.0, 1.0) == Approx(0.5).epsilon(1e-12));
    const double phi = 0.5;
    CHECK(std::abs(quad([&](double xi) { return 1.0 / (phi * xi); }, 1.0, 2.0) - std::log(2.0) / phi) < 1e-8);
    auto cubic = [](double x) { return 3.0 * x * x * x - x + 2.0; };
    // antiderivative 3x^4/4 - x^2/2 + 2x on [-1, 2]
    const double exact = (12.0 - 2.0 + 4.0) - (0.75 - 0.5 - 2.0);
    CHECK(std::abs(quad(cubic, -1.0, 2.0) - exact) < 1e-10);
    CHECK(std::abs(quad(cubic, -1.0, 0.5) + quad(cubic, 0.5, 2.0) - exact) < 1e-10);
    CHECK(quad([](double x) { return x; }, 1.0, 0.0) == Approx(-0.5));
}

TEST_CASE("tail integrals by both methods") {
    const double R = 2.0;
    auto d = [&](double x) { return R * std::pow(x, -R - 1.0); };
    CHECK(std::abs(quad_tail(d, 1.0) - 1.0) < 1e-8);
    CHECK(std::abs(quad_tail(d, 1.0, 1e-10, TailMethod::Truncate) - 1.0) < 1e-6);
    CHECK(std::abs(quad_tail([](double x) { return std::exp(-x); }, 0.0) - 1.0) < 1e-8);
}

TEST_CASE("endpoint singularity is integrable") {
    // log x on [0,1] = -1; the endpoint is re-sampled just inside
    CHECK(std::abs(quad([](double x) { return std::log(x); }, 0.0, 1.0, 1e-8) + 1.0) < 1e-6);
}

TEST_CASE("quad reports depth exhaustion") {
    CHECK_THROWS_AS(quad([](double x) { return std::sin(1.0 / (x + 1e-9)); }, 0.0, 1.0, 1e-14, 4), Error);
}

TEST_CASE("monotone inversion") {
    CHECK(std::abs(invert_monotone([](double x) { return x * x; }, 4.0, 0.0, 10.0) - 2.0) < 1e-10);
    CHECK(invert_monotone([](double w) { return 0.1 * w; }, 0.05, 0.0, 10.0) == Approx(0.5).epsilon(1e-12));

    const double ratio = 0.25 / 0.5;  // theta/sigma for the bounded-consumption fixture
    auto F = [&](double w) { return std::pow(std::expm1(w), -ratio); };
    CHECK(std::abs(invert_monotone(F, 1.0, std::log(1.5), std::log(4.0)) - std::log(2.0)) < 1e-8);

    CHECK_THROWS_AS(invert_monotone([](double x) { return x; }, 5.0, 0.0, 1.0), Error);
}

TEST_CASE("inversion round trips") {
    auto f = [](double x) { return std::exp(x) + x * x * x; };
    for (double y : {1.5, 3.0, 20.0, 1e3}) {
        const double x = invert_monotone(f, y, -5.0, 10.0);
        CHECK(std::abs(f(x) - y) <= 1e-12 * std::max(1.0, y));
    }
    auto dec = [](double x) { return 1.0 / x; };
    const double x = invert_monotone(dec, 0.3, 0.1, 100.0);
    CHECK(std::abs(dec(x) - 0.3) <= 1e-12);
}

TEST_CASE("finite differences") {
    auto sq = [](double, double w) { return w * w; };
    CHECK(std::abs(fd_partial(sq, 0.0, 3.0, Partial::w) - 6.0) < 1e-6);
    CHECK(std::abs(fd_partial(sq, 0.0, 3.0, Partial::ww) - 2.0) < 1e-5);

    const double phi = 0.5, psi = 60.0, p = 0.2;
    auto ps = [&](double, double w) { return phi * w + psi * (std::pow(1.0 + w, p) - 1.0); };
    // one-sided at the w = 0 boundary
    CHECK(std::abs(fd_partial(ps, 0.0, 0.0, Partial::w) - 12.5) < 1e-5);

    auto tw = [](double t, double w) { return t * t * w; };
    CHECK(std::abs(fd_partial(tw, 2.0, 3.0, Partial::t) - 12.0) < 1e-6);
    CHECK(std::abs(fd_partial(tw, 0.0, 3.0, Partial::t) - 0.0) < 1e-6);

    auto quadratic = [](double, double w) { return 4.0 * w * w - 3.0 * w + 1.0; };
    for (double w : {0.0, 0.1, 1.0, 10.0}) {
        CHECK(std::abs(fd_partial(quadratic, 1.0, w, Partial::w) - (8.0 * w - 3.0)) <= 1e-6 * std::max(1.0, 8.0 * w));
        CHECK(std::abs(fd_partial(quadratic, 1.0, w, Partial::ww) - 8.0) <= 1e-6 * 8.0 * 10.0);
    }
    CHECK_THROWS_AS(fd_partial([](double, double w) { return 1.0 / w; }, 0.0, 0.0, Partial::w), Error);
}

TEST_CASE("gaussian increments are reproducible") {
    const RngStream s{42, 7};
    const auto a = gaussian_increments(s, 4, 0.01);
    const auto b = gaussian_increments(s, 4, 0.01);
    CHECK(a == b);
    const auto c = gaussian_increments(RngStream{42, 8}, 4, 0.01);
    CHECK(a != c);
}

TEST_CASE("gaussian increments moments and independence") {
    constexpr std::size_t n = 1'000'000;
    const double dt = 0.01;
    const auto a = gaussian_increments(RngStream{2024, 0}, n, dt);
    const auto b = gaussian_increments(RngStream{2024, 1}, n, dt);
    const double mean = pairwise_sum(a) / n;
    CHECK(std::abs(mean) < 4.0 * 0.1 / 1e3);

    double saa = 0.0, sbb = 0.0, sab = 0.0;
    const double mb = pairwise_sum(b) / n;
    for (std::size_t i = 0; i < n; ++i) {
        saa += (a[i] - mean) * (a[i] - mean);
        sbb += (b[i] - mb) * (b[i] - mb);
        sab += (a[i] - mean) * (b[i] - mb);
    }
    CHECK(saa / n == Approx(dt).epsilon(0.01));
    CHECK(std::abs(sab / std::sqrt(saa * sbb)) < 0.01);
}

TEST_CASE("parallel_for is thread-count independent") {
    std::vector<double> one(257), many(257);
    auto fill = [](std::vector<double>& out) {
        return [&out](std::size_t i) { out[i] = gaussian_increments(RngStream{9, i}, 3, 1.0)[2]; };
    };
    parallel_for(one.size(), fill(one), 1);
    parallel_for(many.size(), fill(many), 4);
    CHECK(one == many);
    CHECK_THROWS(parallel_for(10, [](std::size_t i) {
        if (i == 3) fail(ErrorKind::NonFinite, "boom");
    }, 3));
}

TEST_CASE("tail fits") {
    std::vector<double> t, ve, vp;
    for (int i = 0; i <= 1000; ++i) {
        const double ti = i * 0.1;
        t.push_back(ti);
        ve.push_back(0.1 * std::exp(-0.1 * ti));
        vp.push_back(1.0 / ((1.0 + ti) * (1.0 + ti)));
    }
    const auto e = fit_local_tail(t, ve);
    CHECK(e.model == TailModel::Exponential);
    CHECK(e.tail == Approx(std::exp(-10.0)).epsilon(1e-9));
    const auto ls = fit_exponential_tail(t, ve);
    CHECK(ls.tail == Approx(std::exp(-10.0)).epsilon(1e-9));

    const auto p = fit_local_tail(t, vp);
    CHECK(p.model == TailModel::PowerLaw);
    CHECK(p.tail == Approx(1.0 / 101.0).epsilon(0.02));
}
