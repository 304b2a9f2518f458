#include "invmerton/market/surface.hpp"

#include <cmath>
#include <limits>

#include "invmerton/error.hpp"

namespace invmerton {

std::string to_string(Derivative d) {
    switch (d) {
        case Derivative::t: return "t";
        case Derivative::w: return "w";
        case Derivative::ww: return "ww";
        case Derivative::www: return "www";
    }
    return "?";
}

double SurfaceModel::derivative(double, double, Derivative d) const {
    fail(ErrorKind::InvalidArgument, name() + " has no analytic partial " + to_string(d));
}

StrategySurface::StrategySurface(std::shared_ptr<const SurfaceModel> model) : model_(std::move(model)) {
    if (!model_) fail(ErrorKind::InvalidArgument, "StrategySurface: null model");
}

double StrategySurface::value(double t, double w) const {
    if (w < 0.0) fail(ErrorKind::OutOfDomain, name() + ": negative wealth " + std::to_string(w));
    return model_->value(t, w);
}

double StrategySurface::partial(double t, double w, Derivative d) const {
    if (w < 0.0) fail(ErrorKind::OutOfDomain, name() + ": negative wealth " + std::to_string(w));
    if (model_->provides(d)) return model_->derivative(t, w, d);
    return fd(t, w, d);
}

double StrategySurface::fd(double t, double w, Derivative d) const {
    const FdDomain dom = model_->domain();
    auto f = [this](double tt, double ww) { return model_->value(tt, ww); };
    switch (d) {
        case Derivative::t: return fd_partial(f, t, w, Partial::t, 0.0, dom);
        case Derivative::w: return fd_partial(f, t, w, Partial::w, 0.0, dom);
        case Derivative::ww: return fd_partial(f, t, w, Partial::ww, 0.0, dom);
        case Derivative::www: {
            auto second = [this](double tt, double ww) { return partial(tt, ww, Derivative::ww); };
            return fd_partial(second, t, w, Partial::w, default_fd_step(Partial::ww, w), dom);
        }
    }
    fail(ErrorKind::InvalidArgument, "unknown derivative");
}

double expm1_minus_x(double x) {
    if (std::abs(x) < 1e-2) {
        // Taylor terms through x^7; the remainder is below 1e-19 relative.
        double term = x * x / 2.0;
        double sum = term;
        for (int k = 3; k <= 8; ++k) {
            term *= x / k;
            sum += term;
        }
        return sum;
    }
    return std::expm1(x) - x;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Time-homogeneous families implement f, f', f'', f''' of w alone.
class HomogeneousModel : public SurfaceModel {
public:
    bool provides(Derivative) const override { return true; }
    bool time_homogeneous() const override { return true; }
    double derivative(double, double w, Derivative d) const override {
        switch (d) {
            case Derivative::t: return 0.0;
            case Derivative::w: return d1(w);
            case Derivative::ww: return d2(w);
            case Derivative::www: return d3(w);
        }
        return 0.0;
    }
    double value(double, double w) const override { return f(w); }

protected:
    virtual double f(double w) const = 0;
    virtual double d1(double w) const = 0;
    virtual double d2(double w) const = 0;
    virtual double d3(double w) const = 0;
};

class Linear final : public HomogeneousModel {
public:
    Linear(double coef, double offset) : coef_(coef), offset_(offset) {}
    std::string name() const override { return "linear"; }

protected:
    double f(double w) const override { return coef_ * w + offset_; }
    double d1(double) const override { return coef_; }
    double d2(double) const override { return 0.0; }
    double d3(double) const override { return 0.0; }

private:
    double coef_, offset_;
};

class Power final : public HomogeneousModel {
public:
    Power(double phi, double alpha) : phi_(phi), alpha_(alpha) {}
    std::string name() const override { return "power"; }

protected:
    double f(double w) const override { return phi_ * std::pow(w, alpha_); }
    double d1(double w) const override { return phi_ * alpha_ * std::pow(w, alpha_ - 1.0); }
    double d2(double w) const override { return phi_ * alpha_ * (alpha_ - 1.0) * std::pow(w, alpha_ - 2.0); }
    double d3(double w) const override {
        return phi_ * alpha_ * (alpha_ - 1.0) * (alpha_ - 2.0) * std::pow(w, alpha_ - 3.0);
    }

private:
    double phi_, alpha_;
};

class PowerShift final : public HomogeneousModel {
public:
    PowerShift(double phi, double psi, double p) : phi_(phi), psi_(psi), p_(p) {}
    std::string name() const override { return "power_shift"; }

protected:
    double f(double w) const override { return phi_ * w + psi_ * std::expm1(p_ * std::log1p(w)); }
    double d1(double w) const override { return phi_ + psi_ * p_ * std::pow(1.0 + w, p_ - 1.0); }
    double d2(double w) const override { return psi_ * p_ * (p_ - 1.0) * std::pow(1.0 + w, p_ - 2.0); }
    double d3(double w) const override {
        return psi_ * p_ * (p_ - 1.0) * (p_ - 2.0) * std::pow(1.0 + w, p_ - 3.0);
    }

private:
    double phi_, psi_, p_;
};

class LogisticBounded final : public HomogeneousModel {
public:
    std::string name() const override { return "logistic_bounded"; }
    FdDomain domain() const override { return {0.0, kInf, 0.0, 1.0}; }

protected:
    double f(double w) const override { return w < 1.0 ? w * (1.0 - w) : 0.0; }
    double d1(double w) const override { return w < 1.0 ? 1.0 - 2.0 * w : 0.0; }
    double d2(double w) const override { return w < 1.0 ? -2.0 : 0.0; }
    double d3(double) const override { return 0.0; }
};

class ExpBounded final : public HomogeneousModel {
public:
    std::string name() const override { return "exp_bounded"; }

protected:
    double f(double w) const override { return -std::expm1(-w); }
    double d1(double w) const override { return std::exp(-w); }
    double d2(double w) const override { return -std::exp(-w); }
    double d3(double w) const override { return std::exp(-w); }
};

class CubicBounded final : public HomogeneousModel {
public:
    CubicBounded(double r, double sigma, double beta)
        : r_(r), s2_(sigma * sigma), a1_(r - 0.5 * s2_ + beta), a2_(1.5 * s2_ - beta) {}
    std::string name() const override { return "cubic_bounded"; }
    FdDomain domain() const override { return {0.0, kInf, 0.0, 1.0}; }

protected:
    double f(double w) const override { return w < 1.0 ? w * (a1_ + w * (a2_ - s2_ * w)) : r_; }
    double d1(double w) const override { return w < 1.0 ? a1_ + w * (2.0 * a2_ - 3.0 * s2_ * w) : 0.0; }
    double d2(double w) const override { return w < 1.0 ? 2.0 * a2_ - 6.0 * s2_ * w : 0.0; }
    double d3(double w) const override { return w < 1.0 ? -6.0 * s2_ : 0.0; }

private:
    double r_, s2_, a1_, a2_;
};

class ExpBoundedConsumption final : public HomogeneousModel {
public:
    ExpBoundedConsumption(double r, double sigma, double beta) : r_(r), s2_(sigma * sigma), beta_(beta) {}
    std::string name() const override { return "exp_bounded_consumption"; }

protected:
    double f(double w) const override {
        const double e = std::exp(-w);
        return r_ * w + (beta_ - 0.5 * s2_ * e) * -std::expm1(-w);
    }
    double d1(double w) const override {
        const double e = std::exp(-w);
        return r_ + (beta_ + 0.5 * s2_) * e - s2_ * e * e;
    }
    double d2(double w) const override {
        const double e = std::exp(-w);
        return -(beta_ + 0.5 * s2_) * e + 2.0 * s2_ * e * e;
    }
    double d3(double w) const override {
        const double e = std::exp(-w);
        return (beta_ + 0.5 * s2_) * e - 4.0 * s2_ * e * e;
    }

private:
    double r_, s2_, beta_;
};

class SqrtConvex final : public HomogeneousModel {
public:
    SqrtConvex(double sigma, double r, double kappa, double alpha, double a)
        : sigma_(sigma), q_(r - kappa), alpha_(alpha), a_(a) {}
    std::string name() const override { return "sqrt_convex"; }

protected:
    double g(double w) const { return 0.5 * q_ * w * w + alpha_ / a_ * expm1_minus_x(-a_ * w); }
    double g1(double w) const { return q_ * w - alpha_ * std::expm1(-a_ * w); }
    double g2(double w) const { return q_ + alpha_ * a_ * std::exp(-a_ * w); }
    double g3(double w) const { return -alpha_ * a_ * a_ * std::exp(-a_ * w); }
    // Limits at w = 0 from g = (q0/2) w^2 (1 - k w + ...), q0 = g''(0), k = alpha a^2 / (3 q0).
    double q0() const { return g2(0.0); }

    double f(double w) const override { return 2.0 / sigma_ * std::sqrt(g(w)); }
    double d1(double w) const override {
        if (w == 0.0) return std::sqrt(2.0 * q0()) / sigma_;
        return g1(w) / (sigma_ * std::sqrt(g(w)));
    }
    double d2(double w) const override {
        if (w == 0.0) return -2.0 / sigma_ * std::sqrt(0.5 * q0()) * alpha_ * a_ * a_ / (3.0 * q0());
        const double gv = g(w), sg = std::sqrt(gv);
        return (g2(w) / sg - g1(w) * g1(w) / (2.0 * gv * sg)) / sigma_;
    }
    double d3(double w) const override {
        const double gv = std::max(g(w), std::numeric_limits<double>::min());
        const double sg = std::sqrt(gv);
        const double a1 = g1(w), a2 = g2(w);
        return (g3(w) / sg - 1.5 * a1 * a2 / (gv * sg) + 0.75 * a1 * a1 * a1 / (gv * gv * sg)) / sigma_;
    }

private:
    double sigma_, q_, alpha_, a_;
};

class ExpConvex final : public HomogeneousModel {
public:
    ExpConvex(double kappa, double alpha, double a) : kappa_(kappa), alpha_(alpha), a_(a) {}
    std::string name() const override { return "exp_convex"; }

protected:
    double f(double w) const override { return kappa_ * w + alpha_ * std::expm1(-a_ * w); }
    double d1(double w) const override { return kappa_ - alpha_ * a_ * std::exp(-a_ * w); }
    double d2(double w) const override { return alpha_ * a_ * a_ * std::exp(-a_ * w); }
    double d3(double w) const override { return -alpha_ * a_ * a_ * a_ * std::exp(-a_ * w); }

private:
    double kappa_, alpha_, a_;
};

// phi(s) = (s - 1 + e^{-s}) / s^2 and its derivative.
double log1p_phi(double s) { return s == 0.0 ? 0.5 : expm1_minus_x(-s) / (s * s); }
double log1p_dphi(double s) {
    if (s < 0.1) {
        double sum = 0.0, fact = 2.0, pw = 1.0;
        for (int k = 3; k <= 20; ++k) {
            fact *= k;
            sum += (k % 2 == 0 ? 1.0 : -1.0) * (k - 2) * pw / fact;
            pw *= s;
        }
        return sum;
    }
    return -std::expm1(-s) / (s * s) - 2.0 * log1p_phi(s) / s;
}

// psi(s) = (s + (1 - s) ln(1 - s)) / s^2 and its derivative, 0 <= s < 1.
double ome_psi(double s) {
    if (s < 0.1) {
        double sum = 0.0, pw = 1.0;
        for (int k = 2; k <= 30; ++k) {
            sum += pw / (k * (k - 1.0));
            pw *= s;
        }
        return sum;
    }
    return (s + (1.0 - s) * std::log1p(-s)) / (s * s);
}
double ome_dpsi(double s) {
    if (s < 0.1) {
        double sum = 0.0, pw = 1.0;
        for (int k = 3; k <= 30; ++k) {
            sum += (k - 2) * pw / (k * (k - 1.0));
            pw *= s;
        }
        return sum;
    }
    return (-(2.0 - s) * std::log1p(-s) - 2.0 * s) / (s * s * s);
}

class GFamily final : public SurfaceModel {
public:
    explicit GFamily(GChoice choice) : choice_(choice) {}
    std::string name() const override { return "g_family"; }
    bool provides(Derivative) const override { return true; }

    double value(double t, double w) const override {
        const double s = w * t;
        if (choice_ == GChoice::Log1p) return w * w * log1p_phi(s);
        if (s >= 1.0) return 1.0 / (t * t);
        return w * w * ome_psi(s);
    }

    double derivative(double t, double w, Derivative d) const override {
        const double s = w * t;
        if (choice_ == GChoice::Log1p) {
            switch (d) {
                case Derivative::t: return w * w * w * log1p_dphi(s);
                case Derivative::w: return s == 0.0 ? w : w * -std::expm1(-s) / s;
                case Derivative::ww: return std::exp(-s);
                case Derivative::www: return -t * std::exp(-s);
            }
        }
        if (s >= 1.0) return d == Derivative::t ? -2.0 / (t * t * t) : 0.0;
        switch (d) {
            case Derivative::t: return w * w * w * ome_dpsi(s);
            case Derivative::w: return s == 0.0 ? w : w * -std::log1p(-s) / s;
            case Derivative::ww: return 1.0 / (1.0 - s);
            case Derivative::www: return t / ((1.0 - s) * (1.0 - s));
        }
        return 0.0;
    }

private:
    GChoice choice_;
};

class Custom final : public SurfaceModel {
public:
    explicit Custom(families::CustomSpec spec) : spec_(std::move(spec)) {
        if (!spec_.value) fail(ErrorKind::InvalidArgument, "custom surface needs a value function");
    }
    double value(double t, double w) const override { return spec_.value(t, w); }
    bool provides(Derivative d) const override { return static_cast<bool>(pick(d)); }
    double derivative(double t, double w, Derivative d) const override { return pick(d)(t, w); }
    bool time_homogeneous() const override { return spec_.time_homogeneous; }
    std::string name() const override { return spec_.name; }
    FdDomain domain() const override { return spec_.domain; }

private:
    const std::function<double(double, double)>& pick(Derivative d) const {
        switch (d) {
            case Derivative::t: return spec_.dt;
            case Derivative::w: return spec_.dw;
            case Derivative::ww: return spec_.dww;
            case Derivative::www: return spec_.dwww;
        }
        return spec_.dt;
    }
    families::CustomSpec spec_;
};

}  // namespace

namespace families {

StrategySurface linear(double coef, double offset) { return StrategySurface(std::make_shared<Linear>(coef, offset)); }
StrategySurface power(double phi, double alpha) { return StrategySurface(std::make_shared<Power>(phi, alpha)); }
StrategySurface power_shift(double phi, double psi, double p) {
    return StrategySurface(std::make_shared<PowerShift>(phi, psi, p));
}
StrategySurface logistic_bounded() { return StrategySurface(std::make_shared<LogisticBounded>()); }
StrategySurface exp_bounded() { return StrategySurface(std::make_shared<ExpBounded>()); }
StrategySurface cubic_bounded(double r, double sigma, double beta) {
    return StrategySurface(std::make_shared<CubicBounded>(r, sigma, beta));
}
StrategySurface exp_bounded_consumption(double r, double sigma, double beta) {
    return StrategySurface(std::make_shared<ExpBoundedConsumption>(r, sigma, beta));
}
StrategySurface sqrt_convex(double sigma, double r, double kappa, double alpha, double a) {
    if (!(r > kappa)) fail(ErrorKind::InvalidArgument, "sqrt_convex needs r > kappa");
    return StrategySurface(std::make_shared<SqrtConvex>(sigma, r, kappa, alpha, a));
}
StrategySurface exp_convex(double kappa, double alpha, double a) {
    return StrategySurface(std::make_shared<ExpConvex>(kappa, alpha, a));
}
StrategySurface g_family(GChoice choice) { return StrategySurface(std::make_shared<GFamily>(choice)); }
StrategySurface custom(CustomSpec spec) { return StrategySurface(std::make_shared<Custom>(std::move(spec))); }

}  // namespace families

namespace gfamily {

double wealth(GChoice choice, double t, double x) {
    if (t == 0.0) return x;
    if (choice == GChoice::Log1p) return std::log1p(x * t) / t;
    return -std::expm1(-x * t) / t;
}

double frontier(GChoice choice, double t) {
    if (choice == GChoice::Log1p || t == 0.0) return kInf;
    return 1.0 / t;
}

}  // namespace gfamily

}  // namespace invmerton
