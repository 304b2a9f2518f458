#include "invmerton/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <string>

#include "CLI11.hpp"

#include "invmerton/blackpde/recover.hpp"
#include "invmerton/blackpde/sharpe.hpp"
#include "invmerton/cli/config.hpp"
#include "invmerton/deterministic/recovery.hpp"
#include "invmerton/error.hpp"
#include "invmerton/io/csv.hpp"
#include "invmerton/montecarlo/montecarlo.hpp"
#include "invmerton/numerics/grid.hpp"
#include "invmerton/risk/risk.hpp"

namespace invmerton::cli {
namespace {

// JSON has no infinity; non-finite values are written as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Config, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

void prepare_out(const CommandOptions& opt) {
    std::error_code ec;
    std::filesystem::create_directories(opt.out, ec);
    if (ec) fail(ErrorKind::Config, "cannot create output directory " + opt.out.string());
}

JobConfig load(const CommandOptions& opt) {
    if (opt.config.empty()) fail(ErrorKind::Config, "--config is required");
    auto cfg = load_config(opt.config);
    prepare_out(opt);
    return cfg;
}

MarketParams recovery_market(const JobConfig& cfg) {
    const auto m = require_market(cfg);
    try {
        m.validate();
    } catch (const Error& e) {
        fail(ErrorKind::Config, std::string("config.market: ") + e.what());
    }
    return m;
}

std::vector<double> det_consumption_grid(const PathFamily& fam, const JobConfig& cfg, double t) {
    if (!cfg.det.c_grid.empty()) return cfg.det.c_grid;
    std::vector<double> c;
    for (double x : log_space(0.1, 10.0, 20)) {
        const double v = fam.consumption(t, x);
        if (v > 0.0 && (c.empty() || v > c.back())) c.push_back(v);
    }
    return c;
}

json risk_json(const RiskProfile& p) {
    return {{"route", to_string(p.route)},
            {"scale", p.scale == RiskScale::Absolute ? "absolute" : "relative"},
            {"verdict", std::string(to_string(p.verdict))},
            {"min_margin", number(p.min_margin)},
            {"max_margin", number(p.max_margin)}};
}

std::vector<double> plot_wealth(const RecoveredUtility& u, const JobConfig& cfg, double t) {
    double top = cfg.recover.plot.w_max.value_or(10.0 * u.w0(t));
    if (std::isfinite(u.wbar(t))) top = std::min(top, u.wbar(t) * (1.0 - 1e-3));
    const std::size_t n = cfg.recover.plot.n;
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = top * static_cast<double>(i + 1) / static_cast<double>(n);
    return w;
}

}  // namespace

int cmd_det_recover(const CommandOptions& opt) {
    const auto cfg = load(opt);
    if (!cfg.consumption) fail(ErrorKind::Config, "config.pair.consumption is required");
    const auto D = build_weight(cfg);
    PathFamilyConfig pc;
    pc.n_paths = cfg.det.n_paths;
    pc.x_min = cfg.det.x_min;
    pc.x_max = cfg.det.x_max;
    pc.dt = cfg.det.dt;
    PathFamily fam(build_surface(*cfg.consumption, cfg), pc);

    std::vector<DeterministicRecovery> tables;
    for (double t : cfg.det.t_grid) tables.push_back(recover_marginal_utility(fam, D, t, det_consumption_grid(fam, cfg, t)));
    write_recovery_csv(tables, opt.out / "det_recovery.csv");

    std::vector<std::pair<double, double>> probes;
    for (double t : cfg.det.probe_t) {
        for (double x : cfg.det.probe_x) probes.emplace_back(t, x);
    }
    const auto rep = classify_risk_det(fam, D, probes);
    json j{{"name", cfg.name},
           {"weight", {{"kind", cfg.weight->kind}, {"param", cfg.weight->param}}},
           {"verdict", std::string(to_string(rep.verdict))},
           {"min_margin", number(rep.min_margin)},
           {"max_margin", number(rep.max_margin)},
           {"probes", json::array()}};
    for (const auto& p : rep.probes) {
        j["probes"].push_back({{"t", p.t},
                               {"x", p.x},
                               {"S", number(p.S)},
                               {"tol", number(p.tol)},
                               {"weight_term", number(p.weight_term)},
                               {"consumption_term", number(p.consumption_term)}});
    }
    write_json(opt.out / "det_risk.json", j);
    return Success;
}

int cmd_black_check(const CommandOptions& opt) {
    const auto cfg = load(opt);
    const auto market = recovery_market(cfg);
    const auto pair = build_pair(cfg);
    const auto rep = check_consistency(pair, market, cfg.consistency);
    write_residuals_csv(rep, opt.out / "residuals.csv");
    json j{{"name", cfg.name},
           {"consistent", rep.consistent},
           {"max_abs_residual", number(rep.max_abs_residual)},
           {"max_flatness", number(rep.max_flatness)},
           {"n_residual_probes", rep.residual_grid.size()},
           {"beta", json::array()}};
    for (const auto& b : rep.beta) {
        j["beta"].push_back({{"t", b.t}, {"beta", number(b.beta)}, {"flatness", number(b.flatness)}, {"tol", b.tol}});
    }
    write_json(opt.out / "consistency.json", j);
    return rep.consistent ? Success : DomainFail;
}

int cmd_recover(const CommandOptions& opt) {
    const auto cfg = load(opt);
    const auto market = recovery_market(cfg);
    const auto pair = build_pair(cfg);
    const auto& rc = cfg.recover;

    RecoverRequest req;
    req.t_grid = rc.t_grid;
    req.c_grid = rc.c_grid;
    req.force = opt.force;
    req.assume_integrable = rc.assume_integrable;
    req.consistency = cfg.consistency;
    req.options.base = BaseCurve::fixed(rc.base_wealth);
    auto res = recover_utility(pair, market, req);
    auto& u = res.utility;
    if (rc.c_grid.empty() && rc.n_c != 20) {
        res.tables.clear();
        for (double t : rc.t_grid) res.tables.push_back(tabulate_utility(u, t, default_consumption_grid(u, t, rc.n_c)));
    }

    const double tp = rc.plot.t;
    if (rc.h) {
        std::set<double> ts(rc.h->t_grid.begin(), rc.h->t_grid.end());
        ts.insert(tp);
        const std::vector<double> grid(ts.begin(), ts.end());
        u.h = estimate_h(u, rc.h->x0, grid, rc.h->n_paths, rc.h->seed);
    }
    write_utility_csv(res.tables, opt.out / "utility.csv");

    const auto probes = default_risk_probes(u);
    const auto dara = classify_dara_stoch(u, probes);
    const auto drra = classify_drra(u, probes);
    const auto util = rho_profile_from_utility(u, probes);
    double disagreement = 0.0;
    for (std::size_t i = 0; i < dara.samples.size(); ++i) {
        const double a = dara.samples[i].rho;
        disagreement = std::max(disagreement, std::abs(a - util.samples[i].rho) / a);
    }
    write_risk_csv(dara, opt.out / "rho.csv");

    // plot panes: pi(w), c(w), rho(c), u(t, c)
    {
        CsvWriter pi_out(opt.out / "plot_pi.csv", {"w", "pi"});
        CsvWriter c_out(opt.out / "plot_c.csv", {"w", "c"});
        for (double w : plot_wealth(u, cfg, tp)) {
            pi_out.row({w, pair.pi(tp, w)});
            c_out.row({w, pair.c(tp, w)});
        }
        const auto cs = default_consumption_grid(u, tp, rc.plot.n);
        CsvWriter rho_out(opt.out / "plot_rho.csv", {"c", "rho"});
        for (double c : cs) rho_out.row({c, rho_from_strategy(u, tp, c)});
        std::vector<double> ws;
        for (double c : cs) ws.push_back(u.Y(tp, c));
        const auto H = u.H_along_wealth(tp, ws);
        double shift = 0.0;
        for (const auto& s : u.h) {
            if (s.t == tp) shift = s.h;
        }
        CsvWriter u_out(opt.out / "plot_u.csv", {"c", "u"});
        for (std::size_t i = 0; i < cs.size(); ++i) u_out.row({cs[i], H[i] - shift});
    }

    json j{{"name", cfg.name},
           {"status", res.verified ? "verified" : "not verified"},
           {"verified", res.verified},
           {"forced", res.forced},
           {"consistent", res.consistency.consistent},
           {"integrability_verified", res.integrability_verified},
           {"assume_integrable", rc.assume_integrable},
           {"base_wealth", rc.base_wealth},
           {"u_normalised_by_h", !u.h.empty()}};
    const auto& rg = res.regularity;
    j["regularity"] = {{"applicable", rg.applicable},       {"note", rg.note},
                       {"delta1", number(rg.delta1)},      {"delta2", number(rg.delta2)},
                       {"kappa1", number(rg.kappa1)},      {"kappa2", number(rg.kappa2)},
                       {"condition_a", rg.condition_a},    {"condition_b", rg.condition_b},
                       {"pi_integrals_diverge", rg.pi_integrals_diverge},
                       {"lemma_applies", rg.lemma_applies}};
    j["discount"] = json::array();
    for (double t : rc.t_grid) {
        j["discount"].push_back({{"t", t}, {"A", number(u.A(t))}, {"beta", number(u.beta(t))}, {"cbar", number(u.cbar(t))}});
    }
    j["risk"] = {{"absolute", risk_json(dara)},
                 {"relative", risk_json(drra)},
                 {"utility_route", risk_json(util)},
                 {"max_route_disagreement", number(disagreement)}};
    j["h"] = json::array();
    for (const auto& s : u.h) {
        j["h"].push_back({{"t", s.t}, {"h", number(s.h)}, {"std_error", number(s.std_error)},
                          {"positive_part", number(s.positive_part)}});
    }
    if (rc.theta_hat) {
        // I(t, z) = c(t, f(t, z)) is the inverse of u_c in c.
        auto I = [&u](double t, double z) { return u.pair().c(t, u.f(t, z)); };
        const auto remap = sharpe_remap(I, market, *rc.theta_hat);
        json samples = json::array();
        for (const auto& tab : res.tables) {
            for (double z : tab.uc) {
                if (z > 0.0 && std::isfinite(z)) {
                    samples.push_back({{"t", tab.t}, {"z", z}, {"c_hat", number(remap.I_hat(tab.t, z))}});
                }
            }
        }
        j["sharpe_remap"] = {{"theta_hat", remap.theta_hat}, {"mu", remap.mu}, {"exponent", remap.exponent},
                             {"samples", samples}};
    }
    write_json(opt.out / "utility.json", j);
    return Success;
}

int cmd_simulate(const CommandOptions& opt) {
    const auto cfg = load(opt);
    const auto market = require_market(cfg);
    const auto pair = build_pair(cfg);
    const auto sim = build_sim_config(cfg);
    const auto ens = simulate(pair, market, cfg.simulation.x, sim);
    write_ensemble_csv(ens, opt.out / "ensemble.csv", cfg.simulation.dump_paths);
    const auto sm = supermartingale_check(ens);
    std::size_t absorbed = 0;
    for (std::size_t p = 0; p < ens.n_paths; ++p) absorbed += ens.W[ens.at(p, ens.n_times() - 1)] == 0.0;
    json j{{"name", cfg.name},
           {"x", cfg.simulation.x},
           {"n_paths", ens.n_paths},
           {"dt", sim.dt},
           {"horizon", ens.times.back()},
           {"seed", sim.master_seed},
           {"max_W", *std::max_element(ens.W.begin(), ens.W.end())},
           {"absorbed_paths", absorbed},
           {"supermartingale_violations", sm.violations},
           {"ZW_final_mean", sm.series.mean.back()},
           {"ZW_final_std_error", sm.series.std_error.back()}};
    write_json(opt.out / "simulate.json", j);
    return sm.violations == 0 ? Success : DomainFail;
}

int cmd_budget(const CommandOptions& opt) {
    const auto cfg = load(opt);
    const auto market = require_market(cfg);
    const auto pair = build_pair(cfg);
    const auto sim = build_sim_config(cfg);
    const auto rep = verify_budget(pair, market, cfg.simulation.x, sim);
    json j{{"name", cfg.name},
           {"target", rep.target},
           {"estimate", number(rep.estimate)},
           {"std_error", number(rep.std_error)},
           {"truncation_adjustment", number(rep.truncation_adjustment)},
           {"tail_model", std::string(to_string(rep.tail_model))},
           {"tail_rate", number(rep.tail_rate)},
           {"horizon", rep.horizon},
           {"dt", sim.dt},
           {"n_paths", rep.n_paths},
           {"seed", sim.master_seed},
           {"verdict", rep.pass ? "pass" : "fail"}};
    write_json(opt.out / "budget.json", j);
    return rep.pass ? Success : DomainFail;
}

int cmd_examples(const CommandOptions& opt) {
    prepare_out(opt);
    for (const auto& [stem, j] : example_configs()) {
        write_json(opt.out / (stem + ".json"), to_json(parse_config(j)));
    }
    return Success;
}

int exit_code_for(const std::exception& e) {
    if (const auto* err = dynamic_cast<const Error*>(&e)) {
        switch (err->kind()) {
        case ErrorKind::Config:
            return ConfigError;
        case ErrorKind::InconsistentPair:
            return DomainFail;
        default:
            return NumericalError;
        }
    }
    if (dynamic_cast<const json::exception*>(&e) != nullptr) return ConfigError;
    return NumericalError;
}

int run(int argc, char** argv) {
    CLI::App app{"Recover a utility function from consumption and investment rules"};
    app.require_subcommand(1);
    CommandOptions opt;
    struct Entry {
        const char* name;
        const char* help;
        int (*fn)(const CommandOptions&);
    };
    const Entry entries[] = {
        {"det-recover", "deterministic marginal utility and risk verdict", cmd_det_recover},
        {"black-check", "Black consistency report", cmd_black_check},
        {"recover", "recover u_c, H, rho and plot data", cmd_recover},
        {"simulate", "simulate wealth and state-price paths", cmd_simulate},
        {"budget", "Monte Carlo budget identity", cmd_budget},
        {"examples", "write the fixture configs", cmd_examples},
    };
    std::string out = ".";
    std::string config;
    for (const auto& e : entries) {
        auto* sub = app.add_subcommand(e.name, e.help);
        sub->add_option("--config", config, "job config (JSON)");
        sub->add_flag("--force", opt.force, "recover even when the Black check fails");
        sub->add_option("--out", out, "output directory");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Success : ConfigError;
    }
    opt.config = config;
    opt.out = out;
    for (const auto& e : entries) {
        if (!app.got_subcommand(e.name)) continue;
        try {
            return e.fn(opt);
        } catch (const std::exception& ex) {
            std::cerr << e.name << ": " << ex.what() << '\n';
            return exit_code_for(ex);
        }
    }
    return ConfigError;
}

}  // namespace invmerton::cli
