#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "confcal/deform.hpp"
#include "confcal/errors.hpp"

namespace confcal {

/// A real function of one real variable, optionally carrying its analytic
/// derivative. Evaluation must be deterministic and side-effect free; the
/// numeric operators fall back to a central difference when no derivative
/// handle is supplied.
class RealFunction {
public:
    using Fn = std::function<double(double)>;

    RealFunction(Fn f) : f_(std::move(f)) {}                                   // NOLINT(google-explicit-constructor)
    RealFunction(Fn f, Fn df) : f_(std::move(f)), df_(std::move(df)) {}

    double operator()(double x) const { return f_(x); }

    bool has_derivative() const { return static_cast<bool>(df_); }

    /// Analytic derivative handle; call only if has_derivative().
    double analytic_derivative(double x) const { return df_(x); }

    /// f'(x): analytic handle when present, otherwise a central difference
    /// with step h = cbrt(machine epsilon) * max(|x|, 1).
    /// Throws NumericsError if the function is non-finite near x.
    double derivative(double x) const;

private:
    Fn f_;
    Fn df_;
};

/// Step schedule for the limit-definition evaluators. The difference
/// quotient is evaluated at eps0 * shrink^k for k = 0..levels-1 and
/// Richardson-extrapolated to 0.
struct LimitSchedule {
    double eps0 = 1e-2;
    int levels = 4;
    double shrink = 0.5;

    void validate() const;
};

/// Conformable derivative x^{1-alpha} f'(x). Requires x > 0.
double cd(const RealFunction& f, DeformParam p, double x);

/// Conformable derivative through its limit definition,
/// lim_{eps->0} [f(x + eps x^{1-alpha}) - f(x)] / eps, with Richardson
/// extrapolation over the schedule. Agrees with cd() to ~1e-4 relative on
/// smooth functions.
double cd_limit(const RealFunction& f, DeformParam p, double x, LimitSchedule s = {});

/// Dual conformable derivative f(x)^{alpha-1} f'(x). Requires f(x) > 0 when
/// alpha - 1 is not an integer.
double dcd(const RealFunction& f, DeformParam p, double x);

/// Dual conformable derivative through its limit definition,
/// lim_{y->x} (f(y) - f(x)) f(x)^{alpha-1} / (y - x), Richardson-extrapolated.
double dcd_limit(const RealFunction& f, DeformParam p, double x, LimitSchedule s = {});

/// Hausdorff (fractal) derivative df/d(x^alpha) = (x^{1-alpha}/alpha) f'(x).
/// Proportional to the conformable derivative: chen = cd / alpha.
double chen(const RealFunction& f, DeformParam p, double x);

/// Optional knobs of the adaptive Simpson quadrature used by the integrals.
struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    std::int64_t max_intervals = std::int64_t{1} << 20;
};

/// Conformable integral int_a^b f(x) x^{alpha-1} dx by adaptive Simpson.
/// Requires 0 <= a <= b. a = 0 is handled by substituting u = x^alpha/alpha,
/// under which the weight disappears and the node x = 0 is never evaluated.
double cd_integral(const RealFunction& f, DeformParam p, double a, double b,
                   QuadratureOptions opts = {});

/// The dual conformable integral taken literally: int_a^b f^{1-alpha} f dx
/// = int_a^b f^{2-alpha} dx. Pointwise, f^{alpha-1} (f^{1-alpha} f) = f
/// inverts exactly; as an operator the dual derivative of this integral is
/// generically not f. See dcd_antiderivative_strict for the operator-level
/// right inverse.
double dcd_integral_paper(const RealFunction& f, DeformParam p, double a, double b,
                          QuadratureOptions opts = {});

/// Strict right inverse of the dual conformable derivative: the unique
/// H with H^{alpha-1} H' = f and H(x0) = H0 > 0, namely
/// H(x) = (alpha int_{x0}^x f ds + H0^alpha)^{1/alpha}.
/// Throws DomainError when the bracket reaches 0 and H would leave the
/// positive branch.
double dcd_antiderivative_strict(const RealFunction& f, DeformParam p, double x0, double h0,
                                 double x, QuadratureOptions opts = {});

/// Plain definite integral int_a^b f dx with the same adaptive Simpson core.
/// Exposed because several callers need the unweighted integral alongside
/// the deformed ones.
double integrate(const RealFunction& f, double a, double b, QuadratureOptions opts = {});

}  // namespace confcal
