#include "invmerton/montecarlo/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "invmerton/error.hpp"
#include "invmerton/io/csv.hpp"
#include "invmerton/numerics/parallel.hpp"
#include "invmerton/numerics/rng.hpp"

namespace invmerton {
namespace {

// Paths per reduction block. Blocks, not threads, own partial sums, so the
// summation order is fixed by the configuration alone.
constexpr std::size_t kBlock = 256;

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(std::span<const double> v) {
    const double n = static_cast<double>(v.size());
    MeanSe out;
    out.mean = pairwise_sum(v) / n;
    if (v.size() < 2) return out;
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - out.mean) * (v[i] - out.mean);
    out.se = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
    return out;
}

// One Euler-Maruyama step given c = c(t, w); 0 is absorbing.
double euler_step(const StrategyPair& pair, const MarketParams& m, double t, double w, double c, double dt, double dB) {
    if (w <= 0.0) return 0.0;
    const double next = w + pair.pi(t, w) * m.sigma * (dB + m.theta * dt) + (m.r * w - c) * dt;
    return next > 0.0 ? next : 0.0;
}

double euler_step(const StrategyPair& pair, const MarketParams& m, double t, double w, double dt, double dB) {
    return w <= 0.0 ? 0.0 : euler_step(pair, m, t, w, pair.c(t, w), dt, dB);
}

void check_start(const StrategyPair& pair, const MarketParams& market, double x) {
    market.validate_for_simulation();
    if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorKind::InvalidArgument, "initial wealth must be positive");
    if (!(x < pair.wbar(0.0))) fail(ErrorKind::InvalidArgument, "initial wealth must lie below w-bar(0)");
}

}  // namespace

void SimConfig::validate() const {
    if (n_paths < 1) fail(ErrorKind::InvalidArgument, "SimConfig: n_paths must be >= 1");
    if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorKind::InvalidArgument, "SimConfig: dt must be > 0");
    if (!(horizon >= dt) || !std::isfinite(horizon)) fail(ErrorKind::InvalidArgument, "SimConfig: horizon must be >= dt");
    if (record_every < 1) fail(ErrorKind::InvalidArgument, "SimConfig: record_every must be >= 1");
}

std::size_t SimConfig::steps() const {
    const double n = horizon / dt;
    const double r = std::round(n);
    return static_cast<std::size_t>(std::abs(n - r) <= 1e-9 * r ? r : std::ceil(n));
}

PathEnsemble simulate(const StrategyPair& pair, const MarketParams& market, double x, const SimConfig& cfg) {
    cfg.validate();
    check_start(pair, market, x);
    const std::size_t n = cfg.steps();
    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k <= n; ++k) {
        if (k % cfg.record_every == 0 || k == n) kept.push_back(k);
    }

    PathEnsemble ens;
    ens.n_paths = cfg.n_paths;
    for (std::size_t k : kept) ens.times.push_back(static_cast<double>(k) * cfg.dt);
    const std::size_t nt = ens.times.size();
    ens.W.assign(cfg.n_paths * nt, 0.0);
    ens.Z.assign(cfg.n_paths * nt, 0.0);
    ens.B.assign(cfg.n_paths * nt, 0.0);

    const double sdt = std::sqrt(cfg.dt);
    parallel_for(
        cfg.n_paths,
        [&](std::size_t p) {
            GaussianSource g(RngStream{cfg.master_seed, p});
            double w = x, b = 0.0;
            std::size_t slot = 0;
            for (std::size_t k = 0;; ++k) {
                const double t = static_cast<double>(k) * cfg.dt;
                if (slot < nt && kept[slot] == k) {
                    const std::size_t i = ens.at(p, slot++);
                    ens.W[i] = w;
                    ens.B[i] = b;
                    ens.Z[i] = state_price_density(market, t, b);
                }
                if (k == n) break;
                const double dB = sdt * g.next();
                w = euler_step(pair, market, t, w, cfg.dt, dB);
                b += dB;
            }
        },
        cfg.threads);
    return ens;
}

std::vector<double> dual_wealth(const RecoveredUtility& u, double x, const PathEnsemble& ensemble) {
    const double lambda = u.F(0.0, x);
    std::vector<double> out(ensemble.W.size());
    parallel_for(ensemble.n_paths, [&](std::size_t p) {
        for (std::size_t k = 0; k < ensemble.n_times(); ++k) {
            const double t = ensemble.times[k];
            const std::size_t i = ensemble.at(p, k);
            out[i] = t == 0.0 ? x : u.f(t, lambda * ensemble.Z[i]);
        }
    });
    return out;
}

ConvergenceReport dual_convergence_study(const RecoveredUtility& u, double x, std::span<const double> dts,
                                         double horizon, std::size_t n_paths, std::uint64_t seed) {
    if (dts.size() < 2 || n_paths < 1) fail(ErrorKind::InvalidArgument, "convergence study: need >= 2 levels");
    const auto& pair = u.pair();
    const auto& m = u.market();
    check_start(pair, m, x);
    const double fine = dts.back();
    std::vector<std::size_t> factor;
    for (std::size_t i = 0; i < dts.size(); ++i) {
        const double ratio = dts[i] / fine;
        const double r = std::round(ratio);
        if (std::abs(ratio - r) > 1e-9 * r || (i > 0 && !(dts[i] < dts[i - 1]))) {
            fail(ErrorKind::InvalidArgument, "convergence study: dt levels must be decreasing multiples of the finest");
        }
        factor.push_back(static_cast<std::size_t>(r));
    }
    const std::size_t stride = factor.front();
    const std::size_t n_fine = static_cast<std::size_t>(std::round(horizon / dts.front())) * stride;
    const double lambda = u.F(0.0, x);

    std::vector<double> err(dts.size() * n_paths);
    parallel_for(n_paths, [&](std::size_t p) {
        GaussianSource g(RngStream{seed, p});
        std::vector<double> inc(n_fine);
        for (auto& d : inc) d = std::sqrt(fine) * g.next();

        std::vector<double> dual;  // at checkpoints k * stride, k >= 1
        double b = 0.0;
        for (std::size_t k = 0; k < n_fine; ++k) {
            b += inc[k];
            if ((k + 1) % stride == 0) {
                const double t = static_cast<double>(k + 1) * fine;
                dual.push_back(u.f(t, lambda * state_price_density(m, t, b)));
            }
        }
        for (std::size_t lvl = 0; lvl < dts.size(); ++lvl) {
            const std::size_t f = factor[lvl];
            double w = x, worst = 0.0;
            for (std::size_t k = 0; k < n_fine; k += f) {
                double dB = 0.0;
                for (std::size_t j = k; j < k + f; ++j) dB += inc[j];
                w = euler_step(pair, m, static_cast<double>(k) * fine, w, dts[lvl], dB);
                if ((k + f) % stride == 0) worst = std::max(worst, std::abs(w - dual[(k + f) / stride - 1]));
            }
            err[lvl * n_paths + p] = worst;
        }
    });

    ConvergenceReport rep;
    for (std::size_t lvl = 0; lvl < dts.size(); ++lvl) {
        rep.levels.push_back(
            {dts[lvl], pairwise_sum(std::span<const double>(err).subspan(lvl * n_paths, n_paths)) /
                           static_cast<double>(n_paths)});
    }
    for (std::size_t i = 0; i + 1 < rep.levels.size(); ++i) {
        rep.ratios.push_back(rep.levels[i].error / rep.levels[i + 1].error);
    }
    rep.min_ratio = *std::min_element(rep.ratios.begin(), rep.ratios.end());
    return rep;
}

BudgetReport verify_budget(const StrategyPair& pair, const MarketParams& market, double x, const SimConfig& cfg) {
    cfg.validate();
    check_start(pair, market, x);
    const std::size_t n = cfg.steps();
    const std::size_t n_blocks = (cfg.n_paths + kBlock - 1) / kBlock;
    std::vector<double> per_path(cfg.n_paths);
    std::vector<double> block_zc(n_blocks * (n + 1), 0.0);
    const double sdt = std::sqrt(cfg.dt);

    parallel_for(
        n_blocks,
        [&](std::size_t blk) {
            double* zc_sum = &block_zc[blk * (n + 1)];
            const std::size_t end = std::min(cfg.n_paths, (blk + 1) * kBlock);
            for (std::size_t p = blk * kBlock; p < end; ++p) {
                GaussianSource g(RngStream{cfg.master_seed, p});
                double w = x, b = 0.0, integral = 0.0, prev = 0.0;
                for (std::size_t k = 0;; ++k) {
                    const double t = static_cast<double>(k) * cfg.dt;
                    const double c = w > 0.0 ? pair.c(t, w) : 0.0;
                    const double zc = c > 0.0 ? state_price_density(market, t, b) * c : 0.0;
                    zc_sum[k] += zc;
                    if (k > 0) integral += 0.5 * cfg.dt * (prev + zc);
                    prev = zc;
                    if (k == n) break;
                    const double dB = sdt * g.next();
                    w = euler_step(pair, market, t, w, c, cfg.dt, dB);
                    b += dB;
                }
                per_path[p] = integral;
            }
        },
        cfg.threads);

    std::vector<double> times(n + 1), mean_zc(n + 1), column(n_blocks);
    for (std::size_t k = 0; k <= n; ++k) {
        times[k] = static_cast<double>(k) * cfg.dt;
        for (std::size_t blk = 0; blk < n_blocks; ++blk) column[blk] = block_zc[blk * (n + 1) + k];
        mean_zc[k] = pairwise_sum(column) / static_cast<double>(cfg.n_paths);
    }

    BudgetReport rep;
    rep.target = x;
    rep.horizon = times.back();
    rep.n_paths = cfg.n_paths;
    const MeanSe est = mean_se(per_path);
    rep.estimate = est.mean;
    rep.std_error = est.se;
    const TailEstimate tail = fit_exponential_tail(times, mean_zc, 0.25);
    rep.tail_model = tail.model;
    rep.tail_rate = tail.rate;
    rep.truncation_adjustment = tail.tail;
    if (tail.model == TailModel::Divergent || tail.tail > 0.1 * x) {
        fail(ErrorKind::TailNotNegligible, "verify_budget: fitted tail of E[Z c] beyond T=" +
                                               std::to_string(rep.horizon) + " is " + std::to_string(tail.tail) +
                                               " (> 10% of x); raise the horizon");
    }
    rep.pass = std::abs(rep.estimate + rep.truncation_adjustment - x) <= std::max(3.0 * rep.std_error, 0.01 * x);
    return rep;
}

std::vector<HSample> estimate_h(const RecoveredUtility& u, double x0, std::span<const double> t_grid,
                                std::size_t n_paths, std::uint64_t seed, std::size_t threads) {
    if (n_paths < 2) fail(ErrorKind::InvalidArgument, "estimate_h: need >= 2 paths");
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        if (t_grid[j] < 0.0 || (j > 0 && !(t_grid[j] > t_grid[j - 1]))) {
            fail(ErrorKind::InvalidArgument, "estimate_h: t_grid must be increasing and >= 0");
        }
    }
    const auto& m = u.market();
    const std::size_t nt = t_grid.size();
    std::vector<double> B(n_paths * nt);
    parallel_for(
        n_paths,
        [&](std::size_t p) {
            GaussianSource g(RngStream{seed, p});
            double b = 0.0, prev = 0.0;
            for (std::size_t j = 0; j < nt; ++j) {
                b += std::sqrt(t_grid[j] - prev) * g.next();
                prev = t_grid[j];
                B[p * nt + j] = b;
            }
        },
        threads);

    const double lambda = u.F(0.0, x0);
    std::vector<HSample> out;
    std::vector<double> w(n_paths);
    for (std::size_t j = 0; j < nt; ++j) {
        const double t = t_grid[j];
        parallel_for(
            n_paths,
            [&](std::size_t p) {
                w[p] = t == 0.0 ? x0 : u.f(t, lambda * state_price_density(m, t, B[p * nt + j]));
            },
            threads);
        const auto H = u.H_along_wealth(t, w);
        const MeanSe ms = mean_se(H);
        std::vector<double> excess(n_paths);
        for (std::size_t p = 0; p < n_paths; ++p) excess[p] = std::max(H[p] - ms.mean, 0.0);
        out.push_back({t, ms.mean, ms.se, pairwise_sum(excess) / static_cast<double>(n_paths)});
    }
    return out;
}

MeanSeries discounted_wealth(const PathEnsemble& ens) {
    MeanSeries s;
    s.times = ens.times;
    std::vector<double> v(ens.n_paths);
    for (std::size_t k = 0; k < ens.n_times(); ++k) {
        for (std::size_t p = 0; p < ens.n_paths; ++p) v[p] = ens.Z[ens.at(p, k)] * ens.W[ens.at(p, k)];
        const MeanSe ms = mean_se(v);
        s.mean.push_back(ms.mean);
        s.std_error.push_back(ms.se);
    }
    return s;
}

SupermartingaleReport supermartingale_check(const PathEnsemble& ens) {
    SupermartingaleReport rep;
    rep.series = discounted_wealth(ens);
    std::vector<double> d(ens.n_paths);
    for (std::size_t k = 0; k + 1 < ens.n_times(); ++k) {
        for (std::size_t p = 0; p < ens.n_paths; ++p) {
            d[p] = ens.Z[ens.at(p, k + 1)] * ens.W[ens.at(p, k + 1)] - ens.Z[ens.at(p, k)] * ens.W[ens.at(p, k)];
        }
        const MeanSe ms = mean_se(d);
        if (ms.mean > 2.0 * ms.se + 1e-12 * std::abs(rep.series.mean[k])) ++rep.violations;
    }
    return rep;
}

void write_ensemble_csv(const PathEnsemble& ens, const std::filesystem::path& path, std::size_t max_paths) {
    CsvWriter out(path, {"path_id", "t", "W", "Z"});
    for (std::size_t p = 0; p < std::min(ens.n_paths, max_paths); ++p) {
        for (std::size_t k = 0; k < ens.n_times(); ++k) {
            out.row({static_cast<double>(p), ens.times[k], ens.W[ens.at(p, k)], ens.Z[ens.at(p, k)]});
        }
    }
}

}  // namespace invmerton
