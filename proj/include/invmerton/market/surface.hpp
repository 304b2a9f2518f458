#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "invmerton/numerics/finite_difference.hpp"

namespace invmerton {

enum class Derivative { t, w, ww, www };

std::string to_string(Derivative d);

/// One strategy family: the value and whichever partials it knows in closed form.
class SurfaceModel {
public:
    virtual ~SurfaceModel() = default;

    virtual double value(double t, double w) const = 0;
    virtual bool provides(Derivative) const { return false; }
    /// Only called when provides(d) is true.
    virtual double derivative(double t, double w, Derivative d) const;
    virtual bool time_homogeneous() const { return false; }
    virtual std::string name() const = 0;
    /// Region the finite-difference fallback must stay in.
    virtual FdDomain domain() const { return {}; }
};

/// Immutable handle to a strategy surface c(t,w) or pi(t,w).
class StrategySurface {
public:
    explicit StrategySurface(std::shared_ptr<const SurfaceModel> model);

    double value(double t, double w) const;
    [[nodiscard]] double operator()(double t, double w) const { return value(t, w); }

    /// Analytic partial when the family has one, finite differences otherwise.
    double partial(double t, double w, Derivative d) const;
    [[nodiscard]] double fd(double t, double w, Derivative d) const;
    [[nodiscard]] bool has_analytic(Derivative d) const { return model_->provides(d); }

    [[nodiscard]] bool time_homogeneous() const { return model_->time_homogeneous(); }
    [[nodiscard]] std::string name() const { return model_->name(); }
    [[nodiscard]] const SurfaceModel& model() const { return *model_; }

private:
    std::shared_ptr<const SurfaceModel> model_;
};

enum class GChoice { Log1p, OneMinusExp };

namespace families {

/// coef * w + offset; the offset exists to build deliberately inconsistent pairs.
StrategySurface linear(double coef, double offset = 0.0);
/// phi * w^alpha.
StrategySurface power(double phi, double alpha);
/// phi w + psi ((1 + w)^p - 1).
StrategySurface power_shift(double phi, double psi, double p);
/// max(w (1 - w), 0).
StrategySurface logistic_bounded();
/// 1 - e^{-w}.
StrategySurface exp_bounded();
/// Consumption paired with logistic_bounded: cubic on [0,1), constant r beyond.
StrategySurface cubic_bounded(double r, double sigma, double beta);
/// Consumption paired with exp_bounded: r w + (beta - sigma^2/2 e^{-w})(1 - e^{-w}).
StrategySurface exp_bounded_consumption(double r, double sigma, double beta);
/// (2/sigma) sqrt(g), g = (r-kappa)/2 w^2 + alpha w + (alpha/a)(e^{-a w} - 1).
StrategySurface sqrt_convex(double sigma, double r, double kappa, double alpha, double a);
/// kappa w + alpha (e^{-a w} - 1).
StrategySurface exp_convex(double kappa, double alpha, double a);
/// Deterministic consumption whose wealth paths are w(t,x) = G(x t) / t.
StrategySurface g_family(GChoice choice);

struct CustomSpec {
    std::string name = "custom";
    std::function<double(double, double)> value;
    std::function<double(double, double)> dt, dw, dww, dwww;  ///< optional analytic partials
    bool time_homogeneous = false;
    FdDomain domain{};
};
StrategySurface custom(CustomSpec spec);

}  // namespace families

/// Closed forms for the G families, used by tests and path brackets.
namespace gfamily {
double wealth(GChoice choice, double t, double x);
/// w-bar(t) = sup_x w(t,x); +inf for Log1p.
double frontier(GChoice choice, double t);
}  // namespace gfamily

/// e^x - 1 - x without cancellation near 0.
double expm1_minus_x(double x);

}  // namespace invmerton
