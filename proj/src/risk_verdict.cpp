#include "invmerton/risk_verdict.hpp"

#include <cmath>

#include "invmerton/error.hpp"

namespace invmerton {

std::string_view to_string(RiskVerdict v) noexcept {
    switch (v) {
        case RiskVerdict::DARA: return "DARA";
        case RiskVerdict::CARA: return "CARA";
        case RiskVerdict::IARA: return "IARA";
        case RiskVerdict::DRRA: return "DRRA";
        case RiskVerdict::CRRA: return "CRRA";
        case RiskVerdict::IRRA: return "IRRA";
        case RiskVerdict::MIXED: return "MIXED";
    }
    return "MIXED";
}

std::optional<RiskVerdict> risk_verdict_from_string(std::string_view s) noexcept {
    for (auto v : {RiskVerdict::DARA, RiskVerdict::CARA, RiskVerdict::IARA, RiskVerdict::DRRA, RiskVerdict::CRRA,
                   RiskVerdict::IRRA, RiskVerdict::MIXED}) {
        if (to_string(v) == s) return v;
    }
    return std::nullopt;
}

RiskVerdict verdict_from_decreasing_margins(std::span<const double> margins, std::span<const double> tol,
                                            RiskScale scale) {
    if (margins.size() != tol.size() || margins.empty()) {
        fail(ErrorKind::InvalidArgument, "verdict needs one tolerance per margin");
    }
    bool any_neg = false, any_pos = false;
    for (std::size_t i = 0; i < margins.size(); ++i) {
        if (!std::isfinite(margins[i])) return RiskVerdict::MIXED;
        if (margins[i] < -tol[i]) any_neg = true;
        if (margins[i] > tol[i]) any_pos = true;
    }
    const bool absolute = scale == RiskScale::Absolute;
    if (any_neg && any_pos) return RiskVerdict::MIXED;
    if (any_neg) return absolute ? RiskVerdict::DARA : RiskVerdict::DRRA;
    if (any_pos) return absolute ? RiskVerdict::IARA : RiskVerdict::IRRA;
    return absolute ? RiskVerdict::CARA : RiskVerdict::CRRA;
}

}  // namespace invmerton
