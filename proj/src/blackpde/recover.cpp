#include "invmerton/blackpde/recover.hpp"

#include <cmath>

#include "invmerton/error.hpp"
#include "invmerton/io/csv.hpp"
#include "invmerton/numerics/grid.hpp"
#include "invmerton/numerics/parallel.hpp"

namespace invmerton {

RecoveryResult recover_utility(const StrategyPair& pair, const MarketParams& market, const RecoverRequest& request) {
    ConsistencyReport consistency = check_consistency(pair, market, request.consistency);
    if (!consistency.consistent && !request.force) {
        fail(ErrorKind::InconsistentPair, "pair fails the Black check: max |residual| = " +
                                              std::to_string(consistency.max_abs_residual) +
                                              ", max flatness = " + std::to_string(consistency.max_flatness));
    }
    RegularityReport regularity = check_regularity(pair, market, request.regularity);

    RecoveryResult out{RecoveredUtility(pair, market, request.options), std::move(consistency),
                       std::move(regularity), {}, false, false, false};
    out.forced = !out.consistency.consistent;
    out.integrability_verified = out.regularity.lemma_applies || request.assume_integrable;
    out.verified = out.consistency.consistent && out.integrability_verified;
    for (double t : request.t_grid) {
        const auto grid = request.c_grid.empty() ? default_consumption_grid(out.utility, t) : request.c_grid;
        out.tables.push_back(tabulate_utility(out.utility, t, grid));
    }
    return out;
}

std::vector<double> default_consumption_grid(const RecoveredUtility& u, double t, std::size_t n) {
    const double cbar = u.cbar(t);
    if (std::isfinite(cbar)) return log_space(0.05 * cbar, 0.95 * cbar, n);
    const double w0 = u.w0(t);
    return log_space(u.pair().c(t, w0 / 20.0), u.pair().c(t, 20.0 * w0), n);
}

RecoveryTable tabulate_utility(const RecoveredUtility& u, double t, std::span<const double> c_grid) {
    RecoveryTable tab;
    tab.t = t;
    tab.c.assign(c_grid.begin(), c_grid.end());
    tab.uc.resize(c_grid.size());
    parallel_for(c_grid.size(), [&](std::size_t i) { tab.uc[i] = u.uc(t, c_grid[i]); });
    std::vector<double> w(c_grid.size());
    for (std::size_t i = 0; i < c_grid.size(); ++i) w[i] = u.Y(t, c_grid[i]);
    tab.H = u.H_along_wealth(t, w);
    return tab;
}

void write_utility_csv(std::span<const RecoveryTable> tables, const std::filesystem::path& path) {
    CsvWriter out(path, {"t", "c", "u_c", "H"});
    for (const auto& tab : tables) {
        for (std::size_t i = 0; i < tab.c.size(); ++i) out.row({tab.t, tab.c[i], tab.uc[i], tab.H[i]});
    }
}

}  // namespace invmerton
