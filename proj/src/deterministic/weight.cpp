#include "invmerton/deterministic/weight.hpp"

#include <cmath>

#include "invmerton/error.hpp"
#include "invmerton/numerics/finite_difference.hpp"
#include "invmerton/numerics/quadrature.hpp"

namespace invmerton {
namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorKind::InvalidArgument, std::string(what) + " must be positive");
}

void require_domain(double x) {
    if (!(x > 0.0)) fail(ErrorKind::OutOfDomain, "weight function evaluated at x=" + std::to_string(x));
}

}  // namespace

WeightFunction WeightFunction::power_tail(double R) {
    require_positive(R, "PowerTail R");
    WeightFunction d;
    d.name_ = "power_tail";
    d.param_ = R;
    d.density_ = [R](double x) { return R * std::pow(x, -R - 1.0); };
    d.tail_ = [R](double x) { return std::pow(x, -R); };
    d.dD_ = [R](double x) { return -R * (R + 1.0) * std::pow(x, -R - 2.0); };
    return d;
}

WeightFunction WeightFunction::gaussian(double eta) {
    require_positive(eta, "Gaussian eta");
    WeightFunction d;
    d.name_ = "gaussian";
    d.param_ = eta;
    d.density_ = [eta](double x) { return x * std::exp(-eta * x * x); };
    d.tail_ = [eta](double x) { return std::exp(-eta * x * x) / (2.0 * eta); };
    d.dD_ = [eta](double x) { return (1.0 - 2.0 * eta * x * x) * std::exp(-eta * x * x); };
    return d;
}

WeightFunction WeightFunction::exponential(double zeta) {
    require_positive(zeta, "Exp zeta");
    WeightFunction d;
    d.name_ = "exponential";
    d.param_ = zeta;
    d.density_ = [zeta](double x) { return std::exp(-zeta * x); };
    d.tail_ = [zeta](double x) { return std::exp(-zeta * x) / zeta; };
    d.dD_ = [zeta](double x) { return -zeta * std::exp(-zeta * x); };
    return d;
}

WeightFunction WeightFunction::custom(std::string name, std::function<double(double)> density,
                                      std::function<double(double)> tail, std::function<double(double)> dD) {
    if (!density) fail(ErrorKind::InvalidArgument, "custom weight needs a density");
    WeightFunction d;
    d.name_ = std::move(name);
    d.density_ = std::move(density);
    d.tail_ = std::move(tail);
    d.dD_ = std::move(dD);
    return d;
}

double WeightFunction::density(double x) const {
    require_domain(x);
    return density_(x);
}

double WeightFunction::tail(double x) const {
    require_domain(x);
    if (tail_) return tail_(x);
    return quad_tail(density_, x, 1e-12);
}

double WeightFunction::log_slope(double x) const {
    require_domain(x);
    const double d = density_(x);
    if (dD_) return dD_(x) / d;
    auto f = [this](double, double y) { return density_(y); };
    return fd_partial(f, 0.0, x, Partial::w, 0.0, FdDomain{0.0, 0.0, 0.5 * x}) / d;
}

}  // namespace invmerton
