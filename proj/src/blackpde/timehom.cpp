#include "invmerton/blackpde/timehom.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "invmerton/error.hpp"
#include "invmerton/numerics/grid.hpp"

namespace invmerton {
namespace {

class TimeHomModel final : public SurfaceModel {
public:
    TimeHomModel(StrategySurface pi, std::function<double(double)> beta, std::function<double(double)> beta_dt,
                 bool constant_beta, double r, double sigma)
        : pi_(std::move(pi)),
          beta_(std::move(beta)),
          beta_dt_(std::move(beta_dt)),
          constant_(constant_beta),
          r_(r),
          half_s2_(0.5 * sigma * sigma) {}

    double value(double t, double w) const override {
        const double p = pi_.value(t, w);
        return r_ * w - half_s2_ * p * pi_.partial(t, w, Derivative::w) + beta_(t) * p;
    }
    bool provides(Derivative d) const override {
        return d == Derivative::w || d == Derivative::ww || (d == Derivative::t && (constant_ || beta_dt_));
    }
    double derivative(double t, double w, Derivative d) const override {
        const double p = pi_.value(t, w);
        const double p1 = pi_.partial(t, w, Derivative::w);
        const double p2 = pi_.partial(t, w, Derivative::ww);
        switch (d) {
            case Derivative::t:
                return constant_ ? 0.0 : beta_dt_(t) * p;
            case Derivative::w:
                return r_ - half_s2_ * (p1 * p1 + p * p2) + beta_(t) * p1;
            case Derivative::ww:
                return -half_s2_ * (3.0 * p1 * p2 + p * pi_.partial(t, w, Derivative::www)) + beta_(t) * p2;
            default:
                return SurfaceModel::derivative(t, w, d);
        }
    }
    bool time_homogeneous() const override { return constant_; }
    std::string name() const override { return "timehom(" + pi_.name() + ")"; }
    FdDomain domain() const override { return pi_.model().domain(); }

private:
    StrategySurface pi_;
    std::function<double(double)> beta_;
    std::function<double(double)> beta_dt_;
    bool constant_;
    double r_;
    double half_s2_;
};

TimeHomConsumption build(const StrategySurface& pi, std::function<double(double)> beta,
                         std::function<double(double)> beta_dt, bool constant, const MarketParams& market,
                         const TimeHomProbes& probes) {
    const std::vector<double> w = probes.w.empty() ? log_space(1e-3, 1e3, 121) : probes.w;
    if (!pi.time_homogeneous()) {
        for (double t : probes.t) {
            for (double x : w) {
                const double pt = pi.partial(t, x, Derivative::t);
                if (std::abs(pt) > 1e-8 * std::max(1.0, std::abs(pi.value(t, x)))) {
                    fail(ErrorKind::NotTimeHomogeneous, "pi_t = " + std::to_string(pt) + " at t=" +
                                                            std::to_string(t) + ", w=" + std::to_string(x));
                }
            }
        }
    }

    TimeHomConsumption out{StrategySurface(std::make_shared<TimeHomModel>(pi, std::move(beta), std::move(beta_dt),
                                                                          constant, market.r, market.sigma)),
                           {}};
    std::size_t negative = 0, flat = 0, total = 0;
    double neg_t = 0.0, neg_w = 0.0, flat_t = 0.0, flat_w = 0.0;
    for (double t : probes.t) {
        for (double x : w) {
            ++total;
            if (out.consumption.value(t, x) < 0.0 && negative++ == 0) {
                neg_t = t;
                neg_w = x;
            }
            if (out.consumption.partial(t, x, Derivative::w) <= 0.0 && flat++ == 0) {
                flat_t = t;
                flat_w = x;
            }
        }
    }
    auto note = [&](const char* what, std::size_t n, double t, double x) {
        std::ostringstream s;
        s << what << " at " << n << " of " << total << " probes, first at t=" << t << ", w=" << x;
        out.warnings.push_back(s.str());
    };
    if (negative > 0) note("c < 0", negative, neg_t, neg_w);
    if (flat > 0) note("c_w <= 0", flat, flat_t, flat_w);
    return out;
}

}  // namespace

TimeHomConsumption timehom_consumption(const StrategySurface& pi, double beta, const MarketParams& market,
                                       const TimeHomProbes& probes) {
    if (!std::isfinite(beta)) fail(ErrorKind::InvalidArgument, "timehom_consumption: beta must be finite");
    return build(pi, [beta](double) { return beta; }, {}, true, market, probes);
}

TimeHomConsumption timehom_consumption(const StrategySurface& pi, std::function<double(double)> beta,
                                       std::function<double(double)> beta_dt, const MarketParams& market,
                                       const TimeHomProbes& probes) {
    if (!beta) fail(ErrorKind::InvalidArgument, "timehom_consumption: beta is empty");
    return build(pi, std::move(beta), std::move(beta_dt), false, market, probes);
}

}  // namespace invmerton
