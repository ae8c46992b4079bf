#include "confcal/deform.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace confcal {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Largest exponent exp() maps to a finite double.
constexpr double kMaxExpArg = 709.782712893384;

}  // namespace

DeformParam::DeformParam(double alpha) : alpha_(alpha) {
    // alpha = 0 is admitted so the dual-side operators (which never form
    // x^alpha/alpha) can reach it; everything that needs a positive order
    // checks locally.
    if (!std::isfinite(alpha) || alpha < 0.0) {
        throw DomainError("deformation order must be finite and non-negative, got " + num(alpha));
    }
}

bool DeformParam::is_classical() const {
    return std::abs(alpha_ - 1.0) <= kClassicalTol;
}

double csub(double y, double x, DeformParam p) {
    if (x <= 0.0) {
        throw DomainError("conformable subtraction needs x > 0, got x = " + num(x));
    }
    if (p.is_classical()) return y - x;
    const double r = (y - x) * std::pow(x, p.alpha() - 1.0);
    if (!std::isfinite(r)) {
        throw DomainError("conformable subtraction overflowed: y = " + num(y) + ", x = " + num(x));
    }
    return r;
}

double qexp(double q, double x, SupportPolicy policy) {
    if (!std::isfinite(q) || !std::isfinite(x)) {
        throw DomainError("qexp needs finite arguments");
    }
    const double u = 1.0 - q;
    if (std::abs(u) <= kClassicalTol) {
        const double r = std::exp(x);
        if (!std::isfinite(r)) throw OverflowError("qexp overflow at x = " + num(x));
        return r;
    }
    const double base = u * x;  // [1 + base]^{1/u}
    if (base <= -1.0) {
        if (policy == SupportPolicy::kCutoffZero) return 0.0;
        throw SupportError("qexp argument outside support: 1 + (1-q)x = " + num(1.0 + base) +
                           " with q = " + num(q) + ", x = " + num(x));
    }
    const double t = std::log1p(base) / u;
    if (t > kMaxExpArg) throw OverflowError("qexp overflow: exponent " + num(t));
    return std::exp(t);
}

double qln(double q, double y) {
    if (!(y > 0.0)) {
        throw DomainError("qln needs y > 0, got y = " + num(y));
    }
    const double u = 1.0 - q;
    if (std::abs(u) <= kClassicalTol) return std::log(y);
    return std::expm1(u * std::log(y)) / u;
}

double stretched_exp(DeformParam p, double x) {
    if (x < 0.0) {
        throw DomainError("stretched exponential needs x >= 0, got x = " + num(x));
    }
    if (p.alpha() == 0.0) {
        throw DomainError("stretched exponential needs alpha > 0");
    }
    if (p.is_classical()) {
        if (x > kMaxExpArg) throw OverflowError("stretched_exp overflow at x = " + num(x));
        return std::exp(x);
    }
    const double t = std::pow(x, p.alpha()) / p.alpha();
    if (t > kMaxExpArg) throw OverflowError("stretched_exp overflow: exponent " + num(t));
    return std::exp(t);
}

double dcd_eigenfunction(DeformParam p, double lambda, double x) {
    return qexp(p.q(), lambda * x);
}

}  // namespace confcal
