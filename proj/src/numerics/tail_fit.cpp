#include "invmerton/numerics/tail_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "invmerton/error.hpp"

namespace invmerton {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_series(std::span<const double> t, std::span<const double> v) {
    if (t.size() != v.size() || t.size() < 3) {
        fail(ErrorKind::InvalidArgument, "tail fit needs >= 3 matching samples");
    }
}

std::size_t index_at_or_after(std::span<const double> t, double when) {
    const auto it = std::lower_bound(t.begin(), t.end(), when);
    return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - t.begin(), static_cast<std::ptrdiff_t>(t.size()) - 1));
}

}  // namespace

std::string_view to_string(TailModel model) noexcept {
    switch (model) {
        case TailModel::Zero: return "zero";
        case TailModel::Exponential: return "exponential";
        case TailModel::PowerLaw: return "power_law";
        case TailModel::Divergent: return "divergent";
    }
    return "unknown";
}

TailEstimate fit_exponential_tail(std::span<const double> t, std::span<const double> v, double fraction) {
    check_series(t, v);
    const double t_last = t.back();
    const std::size_t first = index_at_or_after(t, t_last - fraction * (t_last - t.front()));

    double n = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = first; i < t.size(); ++i) {
        if (!(v[i] > 0.0)) continue;
        const double y = std::log(v[i]);
        n += 1.0;
        sx += t[i];
        sy += y;
        sxx += t[i] * t[i];
        sxy += t[i] * y;
    }
    if (n < 2.0) {
        if (v.back() == 0.0) return {};
        return {TailModel::Divergent, 0.0, kInf};
    }
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    const double k = -slope;
    if (!(k > 0.0)) return {TailModel::Divergent, k, kInf};
    const double v_last = std::exp(intercept + slope * t_last);
    return {TailModel::Exponential, k, v_last / k};
}

TailEstimate fit_local_tail(std::span<const double> t, std::span<const double> v) {
    check_series(t, v);
    const double t_last = t.back();
    const double span = t_last - t.front();
    const std::size_t i0 = index_at_or_after(t, t_last - 0.2 * span);
    const std::size_t i1 = index_at_or_after(t, t_last - 0.1 * span);
    const std::size_t i2 = t.size() - 1;
    if (v[i2] == 0.0) return {};
    if (!(v[i0] > 0.0 && v[i1] > 0.0) || i0 == i1 || i1 == i2) return {TailModel::Divergent, 0.0, kInf};

    const double l0 = std::log(v[i0]), l1 = std::log(v[i1]), l2 = std::log(v[i2]);
    const double k_early = -(l1 - l0) / (t[i1] - t[i0]);
    const double k_late = -(l2 - l1) / (t[i2] - t[i1]);

    const bool power_possible = t[i0] > 0.0;
    double q_early = 0.0, q_late = 0.0;
    if (power_possible) {
        q_early = -(l1 - l0) / (std::log(t[i1]) - std::log(t[i0]));
        q_late = -(l2 - l1) / (std::log(t[i2]) - std::log(t[i1]));
    }
    auto drift = [](double a, double b) { return std::abs(b - a) / std::max(std::abs(b), 1e-300); };
    const bool use_power = power_possible && drift(q_early, q_late) < drift(k_early, k_late);

    if (use_power) {
        if (!(q_late > 1.0)) return {TailModel::Divergent, q_late, kInf};
        return {TailModel::PowerLaw, q_late, v[i2] * t_last / (q_late - 1.0)};
    }
    if (!(k_late > 0.0)) return {TailModel::Divergent, k_late, kInf};
    return {TailModel::Exponential, k_late, v[i2] / k_late};
}

}  // namespace invmerton
