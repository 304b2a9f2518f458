#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace invmerton {

/// Absolute verdicts (DARA/CARA/IARA) come from the sign of d rho / dc,
/// relative ones (DRRA/CRRA/IRRA) from the sign of d(c rho)/dc.
enum class RiskVerdict { DARA, CARA, IARA, DRRA, CRRA, IRRA, MIXED };

std::string_view to_string(RiskVerdict v) noexcept;
std::optional<RiskVerdict> risk_verdict_from_string(std::string_view s) noexcept;

enum class RiskScale { Absolute, Relative };

/// Verdict from signed margins where margin <= 0 means "decreasing".
/// |margin| <= tol[i] counts as equality.
RiskVerdict verdict_from_decreasing_margins(std::span<const double> margins, std::span<const double> tol,
                                            RiskScale scale);

}  // namespace invmerton
