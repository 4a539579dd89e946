#include "rfic/disorder.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rfic {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be a positive real");
    }
}

double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x * (1.0 / std::numbers::sqrt2));
}

double std_normal_pdf(double x) {
    static const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

} // namespace

// Acklam's rational approximation, polished with one Halley step on
// erfc; relative error is at machine-precision level over (0,1).
double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("inverse_normal_cdf: p must be in (0,1)");
    }
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement.
    double e = std_normal_cdf(x) - p;
    double u = e / std_normal_pdf(x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

DisorderLaw DisorderLaw::gaussian(double sigma) {
    require_positive(sigma, "gaussian sigma");
    return DisorderLaw(LawKind::Gaussian, sigma);
}

DisorderLaw DisorderLaw::rademacher(double a) {
    require_positive(a, "rademacher a");
    return DisorderLaw(LawKind::Rademacher, a);
}

DisorderLaw DisorderLaw::laplace(double b) {
    require_positive(b, "laplace b");
    return DisorderLaw(LawKind::Laplace, b);
}

DisorderLaw DisorderLaw::uniform(double halfwidth) {
    require_positive(halfwidth, "uniform halfwidth");
    return DisorderLaw(LawKind::Uniform, halfwidth);
}

DisorderLaw DisorderLaw::logistic_sech() {
    return DisorderLaw(LawKind::LogisticSech, 0.0);
}

DisorderLaw DisorderLaw::parse(const std::string& spec) {
    auto colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    if (name == "logistic_sech") {
        if (colon != std::string::npos) {
            throw std::invalid_argument("logistic_sech takes no parameter");
        }
        return logistic_sech();
    }
    if (colon == std::string::npos) {
        throw std::invalid_argument("law spec '" + spec + "' is missing its parameter");
    }
    double v;
    try {
        std::size_t pos = 0;
        v = std::stod(spec.substr(colon + 1), &pos);
        if (pos != spec.size() - colon - 1) throw std::invalid_argument("trailing junk");
    } catch (const std::exception&) {
        throw std::invalid_argument("law spec '" + spec + "' has a malformed parameter");
    }
    if (name == "gaussian") return gaussian(v);
    if (name == "rademacher") return rademacher(v);
    if (name == "laplace") return laplace(v);
    if (name == "uniform") return uniform(v);
    throw std::invalid_argument("unknown law '" + name + "'");
}

std::string DisorderLaw::spec() const {
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", v);
        return std::string(buf);
    };
    switch (kind_) {
        case LawKind::Gaussian: return "gaussian:" + fmt(param_);
        case LawKind::Rademacher: return "rademacher:" + fmt(param_);
        case LawKind::Laplace: return "laplace:" + fmt(param_);
        case LawKind::Uniform: return "uniform:" + fmt(param_);
        case LawKind::LogisticSech: return "logistic_sech";
    }
    return "?";
}

double DisorderLaw::variance() const {
    switch (kind_) {
        case LawKind::Gaussian: return param_ * param_;
        case LawKind::Rademacher: return param_ * param_;
        case LawKind::Laplace: return 2.0 * param_ * param_;
        case LawKind::Uniform: return param_ * param_ / 3.0;
        case LawKind::LogisticSech: return std::numbers::pi * std::numbers::pi / 12.0;
    }
    return 0.0;
}

double DisorderLaw::sample(SplitMix64& g) const {
    switch (kind_) {
        case LawKind::Gaussian:
            return param_ * inverse_normal_cdf(g.next_double());
        case LawKind::Rademacher:
            return (g.next() & 1u) ? param_ : -param_;
        case LawKind::Laplace: {
            double u = g.next_double() - 0.5;
            double s = (u < 0.0) ? -1.0 : 1.0;
            return -param_ * s * std::log1p(-2.0 * std::fabs(u));
        }
        case LawKind::Uniform:
            return param_ * (2.0 * g.next_double() - 1.0);
        case LawKind::LogisticSech: {
            double u = g.next_double();
            return 0.5 * std::log(u / (1.0 - u));
        }
    }
    return 0.0;
}

std::vector<double> DisorderLaw::sample_increments(SplitMix64& g, std::size_t n) const {
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sample(g));
    return out;
}

double DisorderLaw::z_cdf(double z) const {
    // z = 2h, so the law of z is mu dilated by 2.
    switch (kind_) {
        case LawKind::Gaussian:
            return std_normal_cdf(z / (2.0 * param_));
        case LawKind::Rademacher: {
            double c = 2.0 * param_;
            if (z < -c) return 0.0;
            if (z < c) return 0.5;
            return 1.0;
        }
        case LawKind::Laplace: {
            double b = 2.0 * param_;
            return (z < 0.0) ? 0.5 * std::exp(z / b) : 1.0 - 0.5 * std::exp(-z / b);
        }
        case LawKind::Uniform: {
            double a = 2.0 * param_;
            if (z <= -a) return 0.0;
            if (z >= a) return 1.0;
            return (z + a) / (2.0 * a);
        }
        case LawKind::LogisticSech:
            // z = 2h is the standard logistic.
            return 1.0 / (1.0 + std::exp(-z));
    }
    return 0.0;
}

double DisorderLaw::z_mean_excess(double a) const {
    // E[(-z - a)^+]; all registry laws are symmetric so this is E[(z - a)^+].
    switch (kind_) {
        case LawKind::Gaussian: {
            double s = 2.0 * param_;
            return s * std_normal_pdf(a / s) - a * std_normal_cdf(-a / s);
        }
        case LawKind::Rademacher: {
            double c = 2.0 * param_;
            double up = std::max(0.0, c - a);
            double dn = std::max(0.0, -c - a);
            return 0.5 * (up + dn);
        }
        case LawKind::Laplace: {
            double b = 2.0 * param_;
            if (a >= 0.0) return 0.5 * b * std::exp(-a / b);
            return -a + 0.5 * b * std::exp(a / b);
        }
        case LawKind::Uniform: {
            double w = 2.0 * param_;
            if (a >= w) return 0.0;
            if (a <= -w) return -a;
            double d = w - a;
            return d * d / (4.0 * w);
        }
        case LawKind::LogisticSech:
            // Integrated standard-logistic tail.
            return std::log1p(std::exp(-a));
    }
    return 0.0;
}

std::vector<double> walk_from_increments(std::span<const double> h) {
    std::vector<double> s;
    s.reserve(h.size() + 1);
    s.push_back(0.0);
    double acc = 0.0;
    for (double x : h) {
        acc += x;
        s.push_back(acc);
    }
    return s;
}

} // namespace rfic
