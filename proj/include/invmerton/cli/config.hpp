#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "invmerton/blackpde/consistency.hpp"
#include "invmerton/deterministic/weight.hpp"
#include "invmerton/market/market.hpp"
#include "invmerton/market/strategy_pair.hpp"
#include "invmerton/montecarlo/montecarlo.hpp"

namespace invmerton::cli {

using json = nlohmann::json;

/// One strategy surface: a named family, a `t,w,value` CSV, or (consumption
/// only) the time-homogeneous construction from the investment surface.
struct SurfaceSpec {
    enum class Kind { Family, Csv, TimeHom };
    Kind kind = Kind::Family;
    std::string family;
    std::map<std::string, double> params;
    std::string choice;  ///< g_family: "log1p" or "one_minus_exp"
    std::string csv;     ///< as written; resolved against the config directory
    double beta = 0.0;   ///< TimeHom
};

struct WeightSpec {
    std::string kind;  ///< power_tail, gaussian, exponential
    double param = 0.0;
};

struct DetSection {
    std::vector<double> t_grid{0.0, 1.0, 5.0};
    std::vector<double> c_grid;  ///< empty: c*(t, x) on 20 log-spaced x in [0.1, 10]
    std::vector<double> probe_t{0.5, 1.0, 5.0};
    std::vector<double> probe_x{0.5, 1.0, 2.0};
    std::size_t n_paths = 201;
    double x_min = 1e-2;
    double x_max = 1e2;
    double dt = 1e-3;
};

struct HSection {
    double x0 = 1.0;
    std::vector<double> t_grid{0.5, 1.0, 2.0};
    std::size_t n_paths = 20000;
    std::uint64_t seed = 20240601;
};

struct PlotSection {
    double t = 0.0;
    std::optional<double> w_max;  ///< default 10 w0, or just below w-bar
    std::size_t n = 200;
};

struct RecoverSection {
    std::vector<double> t_grid{0.0, 1.0};
    std::vector<double> c_grid;
    std::size_t n_c = 20;
    double base_wealth = 1.0;
    bool assume_integrable = false;
    std::optional<double> theta_hat;
    std::optional<HSection> h;
    PlotSection plot;
};

struct SimSection {
    double x = 1.0;
    std::size_t n_paths = 1000;
    double dt = 1e-2;
    double horizon = 10.0;
    std::uint64_t seed = 20240601;
    std::size_t record_every = 1;
    std::size_t dump_paths = 100;  ///< paths written to ensemble.csv
};

struct JobConfig {
    std::string name = "job";
    std::optional<MarketParams> market;
    std::optional<SurfaceSpec> consumption;
    std::optional<SurfaceSpec> investment;
    std::optional<double> wealth_bound;
    std::optional<WeightSpec> weight;
    DetSection det;
    ConsistencyConfig consistency;
    RecoverSection recover;
    SimSection simulation;
    /// Directory that relative CSV paths are resolved against.
    std::filesystem::path base_dir = ".";
};

/// Strict: unknown keys, wrong types and non-positive tolerances raise Config errors.
JobConfig parse_config(const json& j, const std::filesystem::path& base_dir = ".");
JobConfig load_config(const std::filesystem::path& path);
/// Every field, defaults included; parse_config(to_json(c)) reproduces c.
json to_json(const JobConfig& cfg);

MarketParams require_market(const JobConfig& cfg);
StrategySurface build_surface(const SurfaceSpec& spec, const JobConfig& cfg);
StrategyPair build_pair(const JobConfig& cfg);
WeightFunction build_weight(const JobConfig& cfg);
SimConfig build_sim_config(const JobConfig& cfg);

/// The built-in fixture gallery, as (file stem, config) pairs.
std::vector<std::pair<std::string, json>> example_configs();

}  // namespace invmerton::cli
