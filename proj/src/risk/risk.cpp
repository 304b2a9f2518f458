#include "invmerton/risk/risk.hpp"

#include <algorithm>
#include <cmath>

#include "invmerton/blackpde/recover.hpp"
#include "invmerton/error.hpp"
#include "invmerton/io/csv.hpp"
#include "invmerton/numerics/grid.hpp"
#include "invmerton/numerics/parallel.hpp"

namespace invmerton {
namespace {

void require_below_cbar(const RecoveredUtility& u, double t, double c, const char* who) {
    if (!(c > 0.0)) fail(ErrorKind::OutOfDomain, std::string(who) + ": consumption must be > 0");
    if (c >= u.cbar(t)) {
        fail(ErrorKind::Saturated, std::string(who) + ": c=" + std::to_string(c) + " at or above c-bar(t)=" +
                                       std::to_string(u.cbar(t)));
    }
}

struct Local {
    double pi, pi_w, c, c_w, c_ww;
};

Local local_terms(const RecoveredUtility& u, double t, double w) {
    const auto& p = u.pair();
    return {p.pi(t, w), p.pi_partial(t, w, Derivative::w), p.c(t, w), p.c_partial(t, w, Derivative::w),
            p.c_partial(t, w, Derivative::ww)};
}

template <typename MarginFn>
RiskProfile classify(const RecoveredUtility& u, const std::vector<std::pair<double, double>>& probes, RiskRoute route,
                     RiskScale scale, MarginFn margin_fn) {
    if (probes.empty()) fail(ErrorKind::InvalidArgument, "risk classification: no probes");
    RiskProfile prof;
    prof.route = route;
    prof.scale = scale;
    prof.samples.resize(probes.size());
    parallel_for(probes.size(), [&](std::size_t i) {
        RiskSample s;
        s.t = probes[i].first;
        s.c = probes[i].second;
        require_below_cbar(u, s.t, s.c, "risk classification");
        s.w = u.Y(s.t, s.c);
        margin_fn(s);
        prof.samples[i] = s;
    });
    std::vector<double> dec(prof.samples.size()), tol(prof.samples.size());
    prof.min_margin = prof.max_margin = prof.samples.front().margin;
    for (std::size_t i = 0; i < prof.samples.size(); ++i) {
        dec[i] = -prof.samples[i].margin;
        tol[i] = prof.samples[i].tol;
        prof.min_margin = std::min(prof.min_margin, prof.samples[i].margin);
        prof.max_margin = std::max(prof.max_margin, prof.samples[i].margin);
    }
    prof.verdict = verdict_from_decreasing_margins(dec, tol, scale);
    return prof;
}

}  // namespace

double rho_from_strategy(const RecoveredUtility& u, double t, double c) {
    require_below_cbar(u, t, c, "rho_from_strategy");
    const double w = u.Y(t, c);
    const auto& p = u.pair();
    return u.market().theta / (u.market().sigma * p.pi(t, w) * p.c_partial(t, w, Derivative::w));
}

double rho_from_strategy(const StrategyPair& pair, const MarketParams& market, double t, double c) {
    return rho_from_strategy(RecoveredUtility(pair, market), t, c);
}

double rho_from_utility(const RecoveredUtility& u, double t, double c) {
    require_below_cbar(u, t, c, "rho_from_utility");
    const double v = u.uc(t, c);
    if (!(v > 0.0)) fail(ErrorKind::Saturated, "rho_from_utility: u_c vanishes at c=" + std::to_string(c));
    const double h = std::min(1e-4 * c, 0.5 * (u.cbar(t) - c));
    return -(u.uc(t, c + h) - u.uc(t, c - h)) / (2.0 * h) / v;
}

std::vector<std::pair<double, double>> default_risk_probes(const RecoveredUtility& u) {
    std::vector<std::pair<double, double>> probes;
    for (double t : {0.1, 1.0, 5.0}) {
        for (double c : default_consumption_grid(u, t, 20)) probes.emplace_back(t, c);
    }
    return probes;
}

RiskProfile classify_dara_stoch(const RecoveredUtility& u, const std::vector<std::pair<double, double>>& probes) {
    const double k = u.market().theta / u.market().sigma;
    return classify(u, probes, RiskRoute::StrategyCriterion, RiskScale::Absolute, [&](RiskSample& s) {
        const Local l = local_terms(u, s.t, s.w);
        const double a = l.pi_w / l.pi, b = l.c_ww / l.c_w;
        s.rho = k / (l.pi * l.c_w);
        s.margin = a + b;
        s.tol = 1e-6 * std::max({1.0, std::abs(a), std::abs(b)});
    });
}

RiskProfile classify_drra(const RecoveredUtility& u, const std::vector<std::pair<double, double>>& probes) {
    const double k = u.market().theta / u.market().sigma;
    return classify(u, probes, RiskRoute::StrategyCriterion, RiskScale::Relative, [&](RiskSample& s) {
        const Local l = local_terms(u, s.t, s.w);
        const double a = l.pi_w / l.pi, b = l.c_w / l.c, d = l.c_ww / l.c_w;
        s.rho = k / (l.pi * l.c_w);
        s.margin = a - (b - d);
        s.tol = 1e-6 * std::max({1.0, std::abs(a), std::abs(b), std::abs(d)});
    });
}

RiskProfile rho_profile_from_utility(const RecoveredUtility& u, const std::vector<std::pair<double, double>>& probes) {
    return classify(u, probes, RiskRoute::RecoveredUtility, RiskScale::Absolute, [&](RiskSample& s) {
        s.rho = rho_from_utility(u, s.t, s.c);
        const double h = std::min(1e-3 * s.c, 0.25 * (u.cbar(s.t) - s.c));
        const double up = rho_from_utility(u, s.t, s.c + h);
        const double down = rho_from_utility(u, s.t, s.c - h);
        s.margin = -(up - down) / (2.0 * h);
        // rho carries ~1e-8 relative noise from the quadratures; differencing amplifies it by c/h
        s.tol = 1e-4 * std::abs(s.rho) / s.c;
    });
}

std::string to_string(RiskRoute r) {
    return r == RiskRoute::StrategyCriterion ? "strategy-criterion" : "recovered-utility";
}

void write_risk_csv(const RiskProfile& profile, const std::filesystem::path& path) {
    CsvWriter out(path, {"t", "c", "rho", "margin"});
    for (const auto& s : profile.samples) out.row({s.t, s.c, s.rho, s.margin});
}

}  // namespace invmerton
