#include "invmerton/blackpde/consistency.hpp"

#include <algorithm>
#include <cmath>

#include "invmerton/error.hpp"
#include "invmerton/io/csv.hpp"
#include "invmerton/numerics/parallel.hpp"
#include "invmerton/numerics/quadrature.hpp"

namespace invmerton {
namespace {

void require_interior(const StrategyPair& pair, double t, double w, const char* who) {
    if (!(w > 0.0) || !(w < pair.wbar(t))) {
        fail(ErrorKind::OutOfDomain, std::string(who) + ": w=" + std::to_string(w) + " outside (0, w-bar(t))");
    }
}

}  // namespace

double BlackTerms::scale() const {
    return std::max({1.0, std::abs(pi_t), std::abs(diffusion), std::abs(drift), std::abs(consumption),
                     std::abs(discount)});
}

BlackTerms black_terms(const StrategyPair& pair, const MarketParams& market, double t, double w) {
    require_interior(pair, t, w, "black_residual");
    const double s2 = market.sigma * market.sigma;
    const double pi = pair.pi(t, w);
    const double c = pair.c(t, w);
    BlackTerms b;
    b.pi_t = pair.investment.time_homogeneous() ? 0.0 : pair.pi_partial(t, w, Derivative::t);
    b.diffusion = 0.5 * s2 * pi * pi * pair.pi_partial(t, w, Derivative::ww);
    b.drift = -(c - market.r * w) * pair.pi_partial(t, w, Derivative::w);
    b.consumption = pi * pair.c_partial(t, w, Derivative::w);
    b.discount = -market.r * pi;
    return b;
}

double black_residual(const StrategyPair& pair, const MarketParams& market, double t, double w) {
    return black_terms(pair, market, t, w).residual();
}

double integrated_black_lhs(const StrategyPair& pair, const MarketParams& market, double t, double w, double ref) {
    require_interior(pair, t, w, "integrated_black_lhs");
    const double pi = pair.pi(t, w);
    if (!(pi > 0.0)) fail(ErrorKind::SingularIntegrand, "integrated_black_lhs: pi <= 0 at w=" + std::to_string(w));
    double integral = 0.0;
    if (!pair.investment.time_homogeneous() && w != ref) {
        require_interior(pair, t, ref, "integrated_black_lhs");
        integral = quad(
            [&](double x) {
                const double p = pair.pi(t, x);
                if (!(p > 0.0)) fail(ErrorKind::SingularIntegrand, "pi <= 0 at w=" + std::to_string(x));
                return pair.pi_partial(t, x, Derivative::t) / (p * p);
            },
            ref, w, 1e-12);
    }
    const double s2 = market.sigma * market.sigma;
    return integral + 0.5 * s2 * pair.pi_partial(t, w, Derivative::w) + (pair.c(t, w) - market.r * w) / pi;
}

BetaSample extract_beta(const StrategyPair& pair, const MarketParams& market, double t, std::span<const double> w_grid,
                        double ref) {
    if (w_grid.empty()) fail(ErrorKind::InvalidArgument, "extract_beta: empty grid");
    const auto [lo, hi] = std::minmax_element(w_grid.begin(), w_grid.end());
    if (ref < *lo || ref > *hi) fail(ErrorKind::InvalidArgument, "extract_beta: ref outside the grid hull");

    std::vector<double> lhs(w_grid.size());
    parallel_for(w_grid.size(), [&](std::size_t i) { lhs[i] = integrated_black_lhs(pair, market, t, w_grid[i], ref); });

    const double n = static_cast<double>(lhs.size());
    const double mean = pairwise_sum(lhs) / n;
    std::vector<double> sq(lhs.size());
    for (std::size_t i = 0; i < lhs.size(); ++i) sq[i] = (lhs[i] - mean) * (lhs[i] - mean);
    BetaSample out;
    out.t = t;
    out.beta = mean;
    out.flatness = std::sqrt(pairwise_sum(sq) / n);
    return out;
}

ConsistencyReport check_consistency(const StrategyPair& pair, const MarketParams& market,
                                    const ConsistencyConfig& cfg) {
    market.validate();
    if (cfg.t_probes.empty() || cfg.w_probes.empty()) fail(ErrorKind::InvalidArgument, "check_consistency: no probes");
    if (!(cfg.tol_res_rel > 0.0) || !(cfg.tol_flat_rel > 0.0)) {
        fail(ErrorKind::InvalidArgument, "check_consistency: tolerances must be positive");
    }

    ConsistencyReport report;
    for (double t : cfg.t_probes) {
        for (double w : cfg.w_probes) {
            if (w > 0.0 && w < pair.wbar(t)) report.residual_grid.push_back({t, w, 0.0, 0.0});
        }
    }
    parallel_for(report.residual_grid.size(), [&](std::size_t k) {
        auto& s = report.residual_grid[k];
        const BlackTerms terms = black_terms(pair, market, s.t, s.w);
        s.residual = terms.residual();
        s.tol = cfg.tol_res_rel * terms.scale();
    });

    bool ok = true;
    for (const auto& s : report.residual_grid) {
        report.max_abs_residual = std::max(report.max_abs_residual, std::abs(s.residual));
        ok = ok && std::abs(s.residual) <= s.tol;
    }
    for (double t : cfg.t_probes) {
        std::vector<double> grid;
        for (double w : cfg.w_probes) {
            if (w > 0.0 && w < pair.wbar(t)) grid.push_back(w);
        }
        if (grid.size() < 2) continue;
        BetaSample b = extract_beta(pair, market, t, grid, cfg.ref);
        b.tol = cfg.tol_flat_rel * std::max(1.0, std::abs(b.beta));
        report.max_flatness = std::max(report.max_flatness, b.flatness);
        ok = ok && b.flatness <= b.tol;
        report.beta.push_back(b);
    }
    if (report.residual_grid.empty() || report.beta.empty()) {
        fail(ErrorKind::InvalidArgument, "check_consistency: no probe lies inside (0, w-bar(t))");
    }
    report.consistent = ok;
    return report;
}

void write_residuals_csv(const ConsistencyReport& report, const std::filesystem::path& path) {
    CsvWriter out(path, {"t", "w", "residual"});
    for (const auto& s : report.residual_grid) out.row({s.t, s.w, s.residual});
}

}  // namespace invmerton
