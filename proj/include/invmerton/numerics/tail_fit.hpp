#pragma once

#include <span>
#include <string_view>

namespace invmerton {

enum class TailModel { Zero, Exponential, PowerLaw, Divergent };

std::string_view to_string(TailModel model) noexcept;

/// Extrapolated integral of a decaying positive series beyond its last sample.
struct TailEstimate {
    TailModel model = TailModel::Zero;
    double rate = 0.0;  ///< decay rate k (exponential) or exponent q (power law)
    double tail = 0.0;  ///< estimated integral over [t_last, inf); +inf when divergent
};

/// Least-squares fit of log v = a - k t over samples with t >= t_last -
/// fraction * (t_last - t_first); tail = v_fit(t_last) / k.
TailEstimate fit_exponential_tail(std::span<const double> t, std::span<const double> v, double fraction = 0.25);

/// Chooses between an exponential and a power-law tail from the last fifth
/// of the samples: whichever local decay parameter (d log v / dt or
/// d log v / d log t) is more stable between the two final tenths wins.
TailEstimate fit_local_tail(std::span<const double> t, std::span<const double> v);

}  // namespace invmerton
