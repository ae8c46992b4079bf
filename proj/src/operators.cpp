#include "confcal/operators.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace confcal {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const double kFdStep = std::cbrt(std::numeric_limits<double>::epsilon());

bool is_integer(double v) {
    return std::isfinite(v) && v == std::rint(v) && std::abs(v) < 9.007199254740992e15;
}

// F^e for the dual-derivative weight: negative bases are allowed only for
// integer exponents, F = 0 only for positive ones.
double dual_weight(double value, double exponent) {
    if (exponent == 0.0) return 1.0;
    if (value > 0.0) return std::pow(value, exponent);
    if (is_integer(exponent)) {
        if (value == 0.0 && exponent < 0.0) {
            throw DomainError("dual derivative weight: f(x) = 0 with negative exponent");
        }
        return std::pow(value, exponent);
    }
    throw DomainError("dual derivative needs f(x) > 0 for non-integer alpha - 1, got f(x) = " +
                      num(value));
}

// Richardson (Neville) extrapolation of quotient(step) to step -> 0 along
// steps eps0 * shrink^k. The quotient expands in integer powers of the step,
// so polynomial extrapolation in the step applies.
double extrapolate_limit(const std::function<double(double)>& quotient, const LimitSchedule& s) {
    s.validate();
    const int n = s.levels;
    std::vector<double> row(n);
    double eps = s.eps0;
    for (int k = 0; k < n; ++k) {
        row[k] = quotient(eps);
        eps *= s.shrink;
    }
    const double ratio = 1.0 / s.shrink;
    double prev_diag = row[0];
    double diag = row[0];
    for (int j = 1; j < n; ++j) {
        double factor = std::pow(ratio, j) - 1.0;
        for (int k = n - 1; k >= j; --k) {
            row[k] = row[k] + (row[k] - row[k - 1]) / factor;
        }
        prev_diag = diag;
        diag = row[n - 1];
    }
    if (!std::isfinite(diag)) {
        throw ConvergenceError("limit-definition extrapolation produced a non-finite value");
    }
    const double err = std::abs(diag - prev_diag);
    if (err > 0.05 * std::max(std::abs(diag), 1.0) + 1e-4) {
        throw ConvergenceError("limit-definition extrapolation did not converge (last correction " +
                               num(err) + ")");
    }
    return diag;
}

// Recursive adaptive Simpson with the Richardson-corrected panel value.
struct SimpsonState {
    const RealFunction& f;
    std::int64_t intervals_left;
    double abs_tol;
    double rel_tol;
    double scale;  // running magnitude of the whole integral, for rel_tol

    double eval(double x) {
        const double v = f(x);
        if (!std::isfinite(v)) {
            throw NumericsError("integrand non-finite at x = " + num(x));
        }
        return v;
    }

    double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                   int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = eval(lm);
        const double frm = eval(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        intervals_left -= 2;
        if (intervals_left <= 0 || depth > 60) {
            throw QuadratureError("quadrature subdivision budget exhausted on [" + num(a) + ", " +
                                  num(b) + "]");
        }
        const double goal = std::max(tol, rel_tol * scale);
        if (depth > 0 && std::abs(delta) <= 15.0 * goal) {
            return left + right + delta / 15.0;
        }
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
};

double adaptive_simpson(const RealFunction& f, double a, double b, const QuadratureOptions& opts) {
    if (a == b) return 0.0;
    SimpsonState st{f, opts.max_intervals, opts.abs_tol, opts.rel_tol, 0.0};
    const double fa = st.eval(a);
    const double m = 0.5 * (a + b);
    const double fm = st.eval(m);
    const double fb = st.eval(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    st.scale = std::abs(whole);
    return st.recurse(a, b, fa, fm, fb, whole, opts.abs_tol, 0);
}

}  // namespace

double RealFunction::derivative(double x) const {
    if (df_) {
        const double d = df_(x);
        if (!std::isfinite(d)) {
            throw NumericsError("analytic derivative non-finite at x = " + num(x));
        }
        return d;
    }
    const double h = kFdStep * std::max(std::abs(x), 1.0);
    const double fp = f_(x + h);
    const double fm = f_(x - h);
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
        throw NumericsError("function non-finite near x = " + num(x));
    }
    return (fp - fm) / (2.0 * h);
}

void LimitSchedule::validate() const {
    if (!(eps0 > 0.0) || levels < 2 || !(shrink > 0.0 && shrink < 1.0)) {
        throw DomainError("invalid limit schedule: eps0 > 0, levels >= 2, shrink in (0,1) required");
    }
}

double cd(const RealFunction& f, DeformParam p, double x) {
    if (x <= 0.0) {
        throw DomainError("conformable derivative needs x > 0, got x = " + num(x));
    }
    return std::pow(x, 1.0 - p.alpha()) * f.derivative(x);
}

double cd_limit(const RealFunction& f, DeformParam p, double x, LimitSchedule s) {
    if (x <= 0.0) {
        throw DomainError("conformable derivative needs x > 0, got x = " + num(x));
    }
    const double w = std::pow(x, 1.0 - p.alpha());
    const double fx = f(x);
    if (!std::isfinite(fx)) throw NumericsError("function non-finite at x = " + num(x));
    auto quotient = [&](double eps) {
        const double fy = f(x + eps * w);
        if (!std::isfinite(fy)) throw NumericsError("function non-finite near x = " + num(x));
        return (fy - fx) / eps;
    };
    return extrapolate_limit(quotient, s);
}

double dcd(const RealFunction& f, DeformParam p, double x) {
    const double fx = f(x);
    if (!std::isfinite(fx)) throw NumericsError("function non-finite at x = " + num(x));
    return dual_weight(fx, p.alpha() - 1.0) * f.derivative(x);
}

double dcd_limit(const RealFunction& f, DeformParam p, double x, LimitSchedule s) {
    const double fx = f(x);
    if (!std::isfinite(fx)) throw NumericsError("function non-finite at x = " + num(x));
    const double w = dual_weight(fx, p.alpha() - 1.0);
    auto quotient = [&](double h) {
        const double fy = f(x + h);
        if (!std::isfinite(fy)) throw NumericsError("function non-finite near x = " + num(x));
        return (fy - fx) * w / h;
    };
    return extrapolate_limit(quotient, s);
}

double chen(const RealFunction& f, DeformParam p, double x) {
    if (p.alpha() == 0.0) throw DomainError("fractal derivative needs alpha != 0");
    return cd(f, p, x) / p.alpha();
}

double integrate(const RealFunction& f, double a, double b, QuadratureOptions opts) {
    if (!(a <= b)) {
        return -adaptive_simpson(f, b, a, opts);
    }
    return adaptive_simpson(f, a, b, opts);
}

double cd_integral(const RealFunction& f, DeformParam p, double a, double b,
                   QuadratureOptions opts) {
    if (a < 0.0) {
        throw DomainError("conformable integral needs a >= 0, got a = " + num(a));
    }
    if (!(a <= b)) {
        throw DomainError("conformable integral needs a <= b, got [" + num(a) + ", " + num(b) + "]");
    }
    if (a == b) return 0.0;
    const double alpha = p.alpha();
    if (a == 0.0) {
        if (alpha == 0.0) {
            throw DomainError("conformable integral from 0 needs alpha > 0 (weight 1/x)");
        }
        // u = x^alpha/alpha turns the weighted integral into the plain
        // integral of f(x(u)); the left node is nudged off 0 so x = 0 is
        // never evaluated, costing O(1e-15) relative.
        const double ub = std::pow(b, alpha) / alpha;
        const double ua = ub * 1e-15;
        RealFunction g([&f, alpha](double u) { return f(std::pow(alpha * u, 1.0 / alpha)); });
        return adaptive_simpson(g, ua, ub, opts);
    }
    RealFunction g([&f, alpha](double x) { return f(x) * std::pow(x, alpha - 1.0); });
    return adaptive_simpson(g, a, b, opts);
}

double dcd_integral_paper(const RealFunction& f, DeformParam p, double a, double b,
                          QuadratureOptions opts) {
    if (!(a <= b)) {
        throw DomainError("dual integral needs a <= b, got [" + num(a) + ", " + num(b) + "]");
    }
    if (a == b) return 0.0;
    const double e = 2.0 - p.alpha();
    RealFunction g([&f, e](double x) { return dual_weight(f(x), e); });
    return adaptive_simpson(g, a, b, opts);
}

double dcd_antiderivative_strict(const RealFunction& f, DeformParam p, double x0, double h0,
                                 double x, QuadratureOptions opts) {
    if (!(h0 > 0.0)) {
        throw DomainError("strict dual antiderivative needs H0 > 0, got " + num(h0));
    }
    const double alpha = p.alpha();
    const double bracket = alpha * integrate(f, x0, x, opts) + std::pow(h0, alpha);
    if (!(bracket > 0.0)) {
        throw DomainError("strict dual antiderivative left the positive branch at x = " + num(x) +
                          " (bracket = " + num(bracket) + ")");
    }
    return std::pow(bracket, 1.0 / alpha);
}

}  // namespace confcal
