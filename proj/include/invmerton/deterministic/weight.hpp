#pragma once

#include <functional>
#include <string>

namespace invmerton {

/// Weighting D(x) > 0 of initial wealths with a finite tail integral.
class WeightFunction {
public:
    /// D = R x^{-R-1}, tail x^{-R}.
    static WeightFunction power_tail(double R);
    /// D = x e^{-eta x^2}, tail e^{-eta x^2} / (2 eta).
    static WeightFunction gaussian(double eta);
    /// D = e^{-zeta x}, tail e^{-zeta x} / zeta.
    static WeightFunction exponential(double zeta);
    /// A missing tail is integrated numerically; a missing dD is differenced.
    static WeightFunction custom(std::string name, std::function<double(double)> density,
                                 std::function<double(double)> tail = {}, std::function<double(double)> dD = {});

    [[nodiscard]] double density(double x) const;
    [[nodiscard]] double tail(double x) const;
    /// D_x / D.
    [[nodiscard]] double log_slope(double x) const;

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] double parameter() const { return param_; }

private:
    WeightFunction() = default;

    std::string name_;
    double param_ = 0.0;
    std::function<double(double)> density_;
    std::function<double(double)> tail_;
    std::function<double(double)> dD_;
};

}  // namespace invmerton
