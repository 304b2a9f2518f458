#include "invmerton/deterministic/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "invmerton/error.hpp"
#include "invmerton/io/csv.hpp"
#include "invmerton/numerics/finite_difference.hpp"
#include "invmerton/numerics/grid.hpp"
#include "invmerton/numerics/parallel.hpp"
#include "invmerton/numerics/root.hpp"

namespace invmerton {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

OdeRhs wealth_rhs(const StrategySurface& c) {
    return [&c](double t, double y) { return -c.value(t, std::max(y, 0.0)); };
}

// Composite Simpson on a uniform grid; a trailing odd panel uses the trapezoid rule.
double integrate_samples(std::span<const double> t, std::span<const double> v) {
    const std::size_t n = t.size();
    if (n < 2) return 0.0;
    const std::size_t simpson_end = (n - 1) % 2 == 0 ? n - 1 : n - 2;
    double total = 0.0;
    for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
        total += (t[i + 2] - t[i]) / 6.0 * (v[i] + 4.0 * v[i + 1] + v[i + 2]);
    }
    if (simpson_end != n - 1) total += 0.5 * (t[n - 1] - t[n - 2]) * (v[n - 1] + v[n - 2]);
    return total;
}

}  // namespace

WealthPath solve_wealth_path(const StrategySurface& c, double x0, double horizon, std::size_t n) {
    if (!(x0 >= 0.0)) fail(ErrorKind::InvalidArgument, "solve_wealth_path: x0 must be >= 0");
    return {x0, integrate_ode(wealth_rhs(c), 0.0, x0, Grid1D(0.0, horizon, n), 0.0)};
}

BudgetExhaustion budget_exhaustion(const WealthPath& path, const StrategySurface& c) {
    if (!(path.x0 > 0.0)) fail(ErrorKind::InvalidArgument, "budget_exhaustion: x0 must be positive");
    std::vector<double> t, v;
    t.reserve(path.samples.size());
    v.reserve(path.samples.size());
    for (const auto& s : path.samples) {
        t.push_back(s.t);
        v.push_back(c.value(s.t, s.y));
    }
    BudgetExhaustion out;
    out.truncated_ratio = integrate_samples(t, v) / path.x0;
    const TailEstimate tail = fit_local_tail(t, v);
    out.tail_model = tail.model;
    if (tail.model == TailModel::Divergent || tail.tail > 0.01 * path.x0) {
        fail(ErrorKind::TailNotNegligible, "budget_exhaustion: consumption tail beyond T=" + std::to_string(t.back()) +
                                               " is " + std::to_string(tail.tail) + " (> 1% of x0)");
    }
    out.tail_ratio = tail.tail / path.x0;
    out.ratio = out.truncated_ratio + out.tail_ratio;
    return out;
}

PathFamily::PathFamily(StrategySurface c, PathFamilyConfig cfg) : c_(std::move(c)), cfg_(cfg) {
    if (cfg_.n_paths < 2 || !(cfg_.x_min > 0.0) || !(cfg_.x_max > cfg_.x_min) || !(cfg_.dt > 0.0)) {
        fail(ErrorKind::InvalidArgument, "PathFamily: bad configuration");
    }
}

double PathFamily::wealth(double t, double x) const {
    if (t < 0.0) fail(ErrorKind::InvalidArgument, "PathFamily: t must be >= 0");
    if (t == 0.0) return x;
    const auto steps = static_cast<std::size_t>(std::ceil(t / cfg_.dt - 1e-9));
    return rk4_advance(wealth_rhs(c_), 0.0, x, t, std::max<std::size_t>(steps, 1), 0.0);
}

double PathFamily::consumption(double t, double x) const { return c_.value(t, wealth(t, x)); }

double PathFamily::dx_consumption(double t, double x) const {
    auto f = [this](double tt, double xx) { return consumption(tt, xx); };
    return fd_partial(f, t, x, Partial::w, 1e-4 * x, FdDomain{});
}

double PathFamily::dxx_consumption(double t, double x) const {
    auto f = [this](double tt, double xx) { return consumption(tt, xx); };
    return fd_partial(f, t, x, Partial::ww, 1e-3 * x, FdDomain{});
}

FamilySlice::FamilySlice(const PathFamily& family, double t)
    : family_(&family), t_(t), x_(log_space(family.config().x_min, family.config().x_max, family.config().n_paths)) {
    c_.resize(x_.size());
    parallel_for(x_.size(), [&](std::size_t i) { c_[i] = family.consumption(t, x_[i]); });

    if (!(c_.front() > 0.0)) {
        fail(ErrorKind::InvalidArgument, "consumption c(t, w(t,x)) is zero at t=" + std::to_string(t) + ", x=" +
                                             std::to_string(x_.front()) +
                                             "; paths that stop consuming are not supported");
    }
    for (std::size_t i = 1; i < c_.size(); ++i) {
        if (c_[i] < c_[i - 1] * (1.0 - 1e-12)) {
            fail(ErrorKind::InvalidArgument, "consumption map x -> c(t, w(t,x)) is not increasing at t=" +
                                                 std::to_string(t) + ", x=" + std::to_string(x_[i]));
        }
    }
    const double top = c_.back();
    const double doubled = family.consumption(t, 2.0 * x_.back());
    cbar_ = (doubled - top) <= 1e-6 * std::abs(top) ? doubled : kInf;
}

double FamilySlice::invert(double value) const {
    if (value < 0.0) fail(ErrorKind::OutOfRange, "invert_consumption: negative consumption");
    if (value == 0.0) return 0.0;
    if (value >= cbar_) {
        fail(ErrorKind::AboveFrontier, "consumption " + std::to_string(value) + " >= c-bar(" + std::to_string(t_) +
                                           ") = " + std::to_string(cbar_));
    }
    const auto it = std::lower_bound(c_.begin(), c_.end(), value);
    if (it == c_.end()) {
        fail(ErrorKind::NotBracketed, "consumption " + std::to_string(value) + " above the x-grid range at t=" +
                                          std::to_string(t_) + "; raise x_max");
    }
    const auto i = static_cast<std::size_t>(it - c_.begin());
    if (c_[i] == value) return x_[i];
    const double lo = i == 0 ? 0.0 : x_[i - 1];
    const double hi = x_[i];
    return invert_monotone([this](double x) { return family_->consumption(t_, x); }, value, lo, hi);
}

double invert_consumption(const PathFamily& family, double t, double value) { return family.slice(t).invert(value); }

DeterministicRecovery recover_marginal_utility(const PathFamily& family, const WeightFunction& D, double t,
                                               std::span<const double> c_grid) {
    const FamilySlice slice = family.slice(t);
    DeterministicRecovery out;
    out.t = t;
    out.cbar = slice.cbar();
    out.c.assign(c_grid.begin(), c_grid.end());
    const std::size_t n = c_grid.size();
    out.y.assign(n, kInf);
    out.uc.assign(n, 0.0);
    out.ucc.assign(n, 0.0);
    out.rho.assign(n, std::numeric_limits<double>::quiet_NaN());

    parallel_for(n, [&](std::size_t k) {
        const double c = c_grid[k];
        if (c >= slice.cbar()) return;
        const double y = slice.invert(c);
        out.y[k] = y;
        out.uc[k] = D.tail(y);
        out.ucc[k] = -D.density(y) / family.dx_consumption(t, y);
        out.rho[k] = -out.ucc[k] / out.uc[k];
    });
    return out;
}

DetRiskReport classify_risk_det(const PathFamily& family, const WeightFunction& D,
                                std::span<const std::pair<double, double>> probes) {
    if (probes.empty()) fail(ErrorKind::InvalidArgument, "classify_risk_det: no probes");
    DetRiskReport report;
    report.probes.resize(probes.size());
    parallel_for(probes.size(), [&](std::size_t k) {
        const auto [t, x] = probes[k];
        DetRiskProbe p;
        p.t = t;
        p.x = x;
        const double slope = D.log_slope(x);
        const double hazard = D.density(x) / D.tail(x);
        p.weight_term = slope + hazard;
        p.consumption_term = family.dxx_consumption(t, x) / family.dx_consumption(t, x);
        p.S = p.weight_term - p.consumption_term;
        p.tol = 1e-6 * std::max({1.0, std::abs(slope), std::abs(hazard), std::abs(p.consumption_term)});
        report.probes[k] = p;
    });
    std::vector<double> margins, tols;
    for (const auto& p : report.probes) {
        margins.push_back(p.S);
        tols.push_back(p.tol);
    }
    report.min_margin = *std::min_element(margins.begin(), margins.end());
    report.max_margin = *std::max_element(margins.begin(), margins.end());
    report.verdict = verdict_from_decreasing_margins(margins, tols, RiskScale::Absolute);
    return report;
}

void write_recovery_csv(std::span<const DeterministicRecovery> tables, const std::filesystem::path& path) {
    CsvWriter out(path, {"t", "c", "y", "u_c", "u_cc", "rho"});
    for (const auto& tab : tables) {
        for (std::size_t k = 0; k < tab.c.size(); ++k) {
            out.row({tab.t, tab.c[k], tab.y[k], tab.uc[k], tab.ucc[k], tab.rho[k]});
        }
    }
}

}  // namespace invmerton
