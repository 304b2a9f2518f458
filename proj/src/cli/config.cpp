#include "invmerton/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "invmerton/blackpde/timehom.hpp"
#include "invmerton/error.hpp"
#include "invmerton/market/tabulated.hpp"

namespace invmerton::cli {
namespace {

[[noreturn]] void bad(const std::string& msg) { fail(ErrorKind::Config, msg); }

// Object view that remembers which keys were read, so leftovers can be rejected.
class Obj {
public:
    Obj(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) bad(where_ + " must be an object");
    }

    bool has(const std::string& k) const { return j_.contains(k); }

    const json& at(const std::string& k) {
        if (!j_.contains(k)) bad(where_ + ": missing key '" + k + "'");
        seen_.insert(k);
        return j_.at(k);
    }

    double num(const std::string& k) {
        const json& v = at(k);
        if (!v.is_number()) bad(path(k) + " must be a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) bad(path(k) + " must be finite");
        return d;
    }
    double num(const std::string& k, double def) { return has(k) ? num(k) : def; }

    double positive(const std::string& k, double def) {
        const double v = num(k, def);
        if (!(v > 0.0)) bad(path(k) + " must be > 0");
        return v;
    }

    std::size_t count(const std::string& k, std::size_t def) {
        if (!has(k)) return def;
        const json& v = at(k);
        if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) bad(path(k) + " must be a positive integer");
        return v.get<std::size_t>();
    }

    std::uint64_t seed(const std::string& k, std::uint64_t def) {
        if (!has(k)) return def;
        const json& v = at(k);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
            bad(path(k) + " must be a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    bool flag(const std::string& k, bool def) {
        if (!has(k)) return def;
        const json& v = at(k);
        if (!v.is_boolean()) bad(path(k) + " must be true or false");
        return v.get<bool>();
    }

    std::string str(const std::string& k) {
        const json& v = at(k);
        if (!v.is_string()) bad(path(k) + " must be a string");
        return v.get<std::string>();
    }
    std::string str(const std::string& k, const std::string& def) { return has(k) ? str(k) : def; }

    std::vector<double> nums(const std::string& k, std::vector<double> def) {
        if (!has(k)) return def;
        const json& v = at(k);
        if (!v.is_array()) bad(path(k) + " must be an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number() || !std::isfinite(e.get<double>())) bad(path(k) + " must be an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    Obj obj(const std::string& k) { return Obj(at(k), path(k)); }

    void done() const {
        for (const auto& item : j_.items()) {
            if (!seen_.count(item.key())) bad(where_ + ": unknown key '" + item.key() + "'");
        }
    }

    std::string path(const std::string& k) const { return where_ + "." + k; }

private:
    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

const std::map<std::string, std::vector<std::string>>& family_params() {
    static const std::map<std::string, std::vector<std::string>> table{
        {"linear", {"coef", "offset"}},
        {"power", {"phi", "alpha"}},
        {"power_shift", {"phi", "psi", "p"}},
        {"logistic_bounded", {}},
        {"exp_bounded", {}},
        {"cubic_bounded", {"r", "sigma", "beta"}},
        {"exp_bounded_consumption", {"r", "sigma", "beta"}},
        {"sqrt_convex", {"sigma", "r", "kappa", "alpha", "a"}},
        {"exp_convex", {"kappa", "alpha", "a"}},
        {"g_family", {}},
    };
    return table;
}

SurfaceSpec parse_surface(Obj o, bool consumption) {
    SurfaceSpec s;
    const int kinds = int(o.has("family")) + int(o.has("csv")) + int(o.has("timehom"));
    if (kinds != 1) bad(o.path("") + " needs exactly one of family, csv, timehom");
    if (o.has("csv")) {
        s.kind = SurfaceSpec::Kind::Csv;
        s.csv = o.str("csv");
    } else if (o.has("timehom")) {
        if (!consumption) bad(o.path("timehom") + " only applies to consumption");
        s.kind = SurfaceSpec::Kind::TimeHom;
        Obj th = o.obj("timehom");
        s.beta = th.num("beta");
        th.done();
    } else {
        s.family = o.str("family");
        const auto it = family_params().find(s.family);
        if (it == family_params().end()) bad(o.path("family") + ": unknown family '" + s.family + "'");
        if (s.family == "g_family") {
            s.choice = o.str("choice");
            if (s.choice != "log1p" && s.choice != "one_minus_exp") {
                bad(o.path("choice") + " must be log1p or one_minus_exp");
            }
        }
        if (o.has("params")) {
            Obj p = o.obj("params");
            for (const auto& name : it->second) {
                if (p.has(name)) s.params[name] = p.num(name);
            }
            p.done();
        }
        for (const auto& name : it->second) {
            if (name != "offset" && !s.params.count(name)) bad(o.path("params") + ": missing '" + name + "'");
        }
    }
    o.done();
    return s;
}

json surface_json(const SurfaceSpec& s) {
    switch (s.kind) {
    case SurfaceSpec::Kind::Csv:
        return {{"csv", s.csv}};
    case SurfaceSpec::Kind::TimeHom:
        return {{"timehom", {{"beta", s.beta}}}};
    case SurfaceSpec::Kind::Family:
        break;
    }
    json j{{"family", s.family}, {"params", json::object()}};
    for (const auto& [k, v] : s.params) j["params"][k] = v;
    if (!s.choice.empty()) j["choice"] = s.choice;
    return j;
}

void require_sorted_nonneg(const std::vector<double>& v, const std::string& what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < 0.0 || (i > 0 && !(v[i] > v[i - 1]))) bad(what + " must be increasing and >= 0");
    }
}

void require_positive(const std::vector<double>& v, const std::string& what) {
    for (double x : v) {
        if (!(x > 0.0)) bad(what + " entries must be > 0");
    }
}

}  // namespace

JobConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
    JobConfig cfg;
    cfg.base_dir = base_dir;
    Obj root(j, "config");
    cfg.name = root.str("name", cfg.name);

    if (root.has("market")) {
        Obj m = root.obj("market");
        MarketParams mp{m.num("r"), m.num("sigma"), m.num("theta")};
        m.done();
        try {
            mp.validate_for_simulation();
        } catch (const Error& e) {
            bad(std::string("config.market: ") + e.what());
        }
        cfg.market = mp;
    }

    if (root.has("pair")) {
        Obj p = root.obj("pair");
        if (p.has("consumption")) cfg.consumption = parse_surface(p.obj("consumption"), true);
        if (p.has("investment")) cfg.investment = parse_surface(p.obj("investment"), false);
        if (p.has("wealth_bound")) cfg.wealth_bound = p.positive("wealth_bound", 1.0);
        p.done();
        if (cfg.consumption && cfg.consumption->kind == SurfaceSpec::Kind::TimeHom && !cfg.investment) {
            bad("config.pair: timehom consumption needs an investment surface");
        }
    }

    if (root.has("weight")) {
        Obj w = root.obj("weight");
        WeightSpec ws{w.str("kind"), w.positive("param", 1.0)};
        w.done();
        if (ws.kind != "power_tail" && ws.kind != "gaussian" && ws.kind != "exponential") {
            bad("config.weight.kind must be power_tail, gaussian or exponential");
        }
        cfg.weight = ws;
    }

    if (root.has("deterministic")) {
        Obj d = root.obj("deterministic");
        auto& s = cfg.det;
        s.t_grid = d.nums("t_grid", s.t_grid);
        s.c_grid = d.nums("c_grid", s.c_grid);
        s.probe_t = d.nums("probe_t", s.probe_t);
        s.probe_x = d.nums("probe_x", s.probe_x);
        s.n_paths = d.count("n_paths", s.n_paths);
        s.x_min = d.positive("x_min", s.x_min);
        s.x_max = d.positive("x_max", s.x_max);
        s.dt = d.positive("dt", s.dt);
        d.done();
        require_sorted_nonneg(s.t_grid, "config.deterministic.t_grid");
        require_positive(s.c_grid, "config.deterministic.c_grid");
        require_positive(s.probe_x, "config.deterministic.probe_x");
        if (!(s.x_max > s.x_min)) bad("config.deterministic: x_max must exceed x_min");
    }

    if (root.has("consistency")) {
        Obj c = root.obj("consistency");
        auto& s = cfg.consistency;
        s.t_probes = c.nums("t_probes", s.t_probes);
        s.w_probes = c.nums("w_probes", s.w_probes);
        s.ref = c.positive("ref", s.ref);
        s.tol_res_rel = c.positive("tol_res_rel", s.tol_res_rel);
        s.tol_flat_rel = c.positive("tol_flat_rel", s.tol_flat_rel);
        c.done();
        require_positive(s.w_probes, "config.consistency.w_probes");
    }

    if (root.has("recover")) {
        Obj r = root.obj("recover");
        auto& s = cfg.recover;
        s.t_grid = r.nums("t_grid", s.t_grid);
        s.c_grid = r.nums("c_grid", s.c_grid);
        s.n_c = r.count("n_c", s.n_c);
        s.base_wealth = r.positive("base_wealth", s.base_wealth);
        s.assume_integrable = r.flag("assume_integrable", s.assume_integrable);
        if (r.has("theta_hat")) s.theta_hat = r.positive("theta_hat", 1.0);
        if (r.has("h")) {
            Obj h = r.obj("h");
            HSection hs;
            hs.x0 = h.positive("x0", hs.x0);
            hs.t_grid = h.nums("t_grid", hs.t_grid);
            hs.n_paths = h.count("n_paths", hs.n_paths);
            hs.seed = h.seed("seed", hs.seed);
            h.done();
            require_sorted_nonneg(hs.t_grid, "config.recover.h.t_grid");
            if (hs.n_paths < 2) bad("config.recover.h.n_paths must be >= 2");
            s.h = hs;
        }
        if (r.has("plot")) {
            Obj p = r.obj("plot");
            s.plot.t = p.num("t", s.plot.t);
            if (p.has("w_max")) s.plot.w_max = p.positive("w_max", 1.0);
            s.plot.n = p.count("n", s.plot.n);
            p.done();
            if (s.plot.t < 0.0) bad("config.recover.plot.t must be >= 0");
            if (s.plot.n < 2) bad("config.recover.plot.n must be >= 2");
        }
        r.done();
        require_sorted_nonneg(s.t_grid, "config.recover.t_grid");
        require_positive(s.c_grid, "config.recover.c_grid");
    }

    if (root.has("simulation")) {
        Obj m = root.obj("simulation");
        auto& s = cfg.simulation;
        s.x = m.positive("x", s.x);
        s.n_paths = m.count("n_paths", s.n_paths);
        s.dt = m.positive("dt", s.dt);
        s.horizon = m.positive("horizon", s.horizon);
        s.seed = m.seed("seed", s.seed);
        s.record_every = m.count("record_every", s.record_every);
        s.dump_paths = m.count("dump_paths", s.dump_paths);
        m.done();
        if (s.horizon < s.dt) bad("config.simulation.horizon must be >= dt");
    }

    root.done();
    return cfg;
}

JobConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        bad("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(j, path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

json to_json(const JobConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    if (cfg.market) j["market"] = {{"r", cfg.market->r}, {"sigma", cfg.market->sigma}, {"theta", cfg.market->theta}};
    if (cfg.consumption || cfg.investment || cfg.wealth_bound) {
        json p = json::object();
        if (cfg.consumption) p["consumption"] = surface_json(*cfg.consumption);
        if (cfg.investment) p["investment"] = surface_json(*cfg.investment);
        if (cfg.wealth_bound) p["wealth_bound"] = *cfg.wealth_bound;
        j["pair"] = p;
    }
    if (cfg.weight) j["weight"] = {{"kind", cfg.weight->kind}, {"param", cfg.weight->param}};
    const auto& d = cfg.det;
    j["deterministic"] = {{"t_grid", d.t_grid}, {"c_grid", d.c_grid},   {"probe_t", d.probe_t},
                          {"probe_x", d.probe_x}, {"n_paths", d.n_paths}, {"x_min", d.x_min},
                          {"x_max", d.x_max},   {"dt", d.dt}};
    const auto& c = cfg.consistency;
    j["consistency"] = {{"t_probes", c.t_probes},
                        {"w_probes", c.w_probes},
                        {"ref", c.ref},
                        {"tol_res_rel", c.tol_res_rel},
                        {"tol_flat_rel", c.tol_flat_rel}};
    const auto& r = cfg.recover;
    json rec{{"t_grid", r.t_grid},
             {"c_grid", r.c_grid},
             {"n_c", r.n_c},
             {"base_wealth", r.base_wealth},
             {"assume_integrable", r.assume_integrable}};
    if (r.theta_hat) rec["theta_hat"] = *r.theta_hat;
    if (r.h) rec["h"] = {{"x0", r.h->x0}, {"t_grid", r.h->t_grid}, {"n_paths", r.h->n_paths}, {"seed", r.h->seed}};
    rec["plot"] = {{"t", r.plot.t}, {"n", r.plot.n}};
    if (r.plot.w_max) rec["plot"]["w_max"] = *r.plot.w_max;
    j["recover"] = rec;
    const auto& s = cfg.simulation;
    j["simulation"] = {{"x", s.x},           {"n_paths", s.n_paths}, {"dt", s.dt},
                       {"horizon", s.horizon}, {"seed", s.seed},       {"record_every", s.record_every},
                       {"dump_paths", s.dump_paths}};
    return j;
}

MarketParams require_market(const JobConfig& cfg) {
    if (!cfg.market) bad("config: this command needs a market block");
    return *cfg.market;
}

StrategySurface build_surface(const SurfaceSpec& spec, const JobConfig& cfg) {
    if (spec.kind == SurfaceSpec::Kind::Csv) {
        const std::filesystem::path raw(spec.csv);
        const std::filesystem::path p = raw.is_absolute() ? raw : cfg.base_dir / raw;
        return make_tabulated(read_tabulated_csv(p), spec.csv);
    }
    if (spec.kind == SurfaceSpec::Kind::TimeHom) {
        auto pi = build_surface(*cfg.investment, cfg);
        return timehom_consumption(pi, spec.beta, require_market(cfg)).consumption;
    }
    auto p = [&](const char* k) { return spec.params.at(k); };
    const std::string& f = spec.family;
    if (f == "linear") return families::linear(p("coef"), spec.params.count("offset") ? p("offset") : 0.0);
    if (f == "power") return families::power(p("phi"), p("alpha"));
    if (f == "power_shift") return families::power_shift(p("phi"), p("psi"), p("p"));
    if (f == "logistic_bounded") return families::logistic_bounded();
    if (f == "exp_bounded") return families::exp_bounded();
    if (f == "cubic_bounded") return families::cubic_bounded(p("r"), p("sigma"), p("beta"));
    if (f == "exp_bounded_consumption") return families::exp_bounded_consumption(p("r"), p("sigma"), p("beta"));
    if (f == "sqrt_convex") return families::sqrt_convex(p("sigma"), p("r"), p("kappa"), p("alpha"), p("a"));
    if (f == "exp_convex") return families::exp_convex(p("kappa"), p("alpha"), p("a"));
    if (f == "g_family") return families::g_family(spec.choice == "log1p" ? GChoice::Log1p : GChoice::OneMinusExp);
    bad("unknown family '" + f + "'");
}

StrategyPair build_pair(const JobConfig& cfg) {
    if (!cfg.consumption || !cfg.investment) bad("config.pair needs consumption and investment");
    StrategyPair pair{build_surface(*cfg.consumption, cfg), build_surface(*cfg.investment, cfg), {}};
    if (cfg.wealth_bound) {
        const double b = *cfg.wealth_bound;
        pair.wealth_bound = [b](double) { return b; };
    }
    return pair;
}

WeightFunction build_weight(const JobConfig& cfg) {
    if (!cfg.weight) bad("config: det-recover needs a weight block (the D-weight)");
    const auto& w = *cfg.weight;
    if (w.kind == "power_tail") return WeightFunction::power_tail(w.param);
    if (w.kind == "gaussian") return WeightFunction::gaussian(w.param);
    return WeightFunction::exponential(w.param);
}

SimConfig build_sim_config(const JobConfig& cfg) {
    SimConfig s;
    s.n_paths = cfg.simulation.n_paths;
    s.dt = cfg.simulation.dt;
    s.horizon = cfg.simulation.horizon;
    s.master_seed = cfg.simulation.seed;
    s.record_every = cfg.simulation.record_every;
    return s;
}

std::vector<std::pair<std::string, json>> example_configs() {
    auto family = [](const char* name, json params = json::object()) {
        return json{{"family", name}, {"params", std::move(params)}};
    };
    auto market = [](double r, double sigma, double theta) { return json{{"r", r}, {"sigma", sigma}, {"theta", theta}}; };
    std::vector<std::pair<std::string, json>> out;

    out.emplace_back("crra_det", json{{"name", "crra_det"},
                                      {"pair", {{"consumption", family("linear", {{"coef", 0.1}})}}},
                                      {"weight", {{"kind", "power_tail"}, {"param", 2.0}}}});
    out.emplace_back("g_log1p", json{{"name", "g_log1p"},
                                     {"pair", {{"consumption", {{"family", "g_family"}, {"choice", "log1p"}}}}},
                                     {"weight", {{"kind", "power_tail"}, {"param", 2.0}}}});
    out.emplace_back("g_one_minus_exp",
                     json{{"name", "g_one_minus_exp"},
                          {"pair", {{"consumption", {{"family", "g_family"}, {"choice", "one_minus_exp"}}}}},
                          {"weight", {{"kind", "power_tail"}, {"param", 2.0}}}});

    out.emplace_back("crra_stoch",
                     json{{"name", "crra_stoch"},
                          {"market", market(0.03, 0.2, 0.08)},
                          {"pair",
                           {{"consumption", family("linear", {{"coef", 0.1}})},
                            {"investment", family("linear", {{"coef", 0.5}})}}},
                          {"recover", {{"t_grid", {0.0, 1.0, 5.0}}, {"h", {{"x0", 1.0}, {"t_grid", {0.5, 1.0, 2.0}}}}}},
                          {"simulation", {{"x", 1.0}, {"n_paths", 100000}, {"dt", 0.01}, {"horizon", 60.0}, {"record_every", 100}}}});
    out.emplace_back("convexconvex",
                     json{{"name", "convexconvex"},
                          {"market", market(0.3, 0.25, 0.026)},
                          {"pair",
                           {{"consumption", {{"timehom", {{"beta", 10.0}}}}},
                            {"investment", family("power_shift", {{"phi", 2.1}, {"psi", -60.0}, {"p", 1.0 / 30.0}})}}},
                          {"recover", {{"plot", {{"w_max", 10.0}}}}}});
    out.emplace_back("concaveconcave",
                     json{{"name", "concaveconcave"},
                          {"market", market(0.05, 0.25, 0.13)},
                          {"pair",
                           {{"consumption", {{"timehom", {{"beta", 10.0}}}}},
                            {"investment", family("power_shift", {{"phi", 0.5}, {"psi", 60.0}, {"p", 0.2}})}}},
                          {"recover", {{"plot", {{"w_max", 10.0}}}}}});
    out.emplace_back("convex_c",
                     json{{"name", "convex_c"},
                          {"market", market(0.6, 0.25, 0.95)},
                          {"pair",
                           {{"consumption", family("exp_convex", {{"kappa", 0.4}, {"alpha", 0.1}, {"a", 1.25}})},
                            {"investment", family("sqrt_convex", {{"sigma", 0.25},
                                                                 {"r", 0.6},
                                                                 {"kappa", 0.4},
                                                                 {"alpha", 0.1},
                                                                 {"a", 1.25}})}}},
                          {"recover", {{"plot", {{"w_max", 10.0}}}}}});
    out.emplace_back("bounded_wealth",
                     json{{"name", "bounded_wealth"},
                          {"market", market(0.5, 0.25, 0.7)},
                          {"pair",
                           {{"consumption", family("cubic_bounded", {{"r", 0.5}, {"sigma", 0.25}, {"beta", 0.1}})},
                            {"investment", family("logistic_bounded")},
                            {"wealth_bound", 1.0}}},
                          {"consistency", {{"w_probes", {0.1, 0.3, 0.5, 0.7, 0.9}}, {"ref", 0.5}}},
                          {"recover", {{"base_wealth", 0.5}, {"assume_integrable", true}}},
                          {"simulation", {{"x", 0.5}, {"n_paths", 1000}, {"dt", 0.001}, {"horizon", 10.0}, {"record_every", 100}}}});
    out.emplace_back("bounded_cons",
                     json{{"name", "bounded_cons"},
                          {"market", market(0.0, 0.5, 0.25)},
                          {"pair",
                           {{"consumption",
                             family("exp_bounded_consumption", {{"r", 0.0}, {"sigma", 0.5}, {"beta", 0.3}})},
                            {"investment", family("exp_bounded")}}},
                          {"recover", {{"base_wealth", std::log(2.0)}, {"assume_integrable", true}}},
                          {"simulation", {{"x", 1.0}, {"n_paths", 100000}, {"dt", 0.01}, {"horizon", 60.0}, {"record_every", 100}}}});
    return out;
}

}  // namespace invmerton::cli
