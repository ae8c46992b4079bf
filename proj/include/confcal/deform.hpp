#pragma once

#include "confcal/errors.hpp"

namespace confcal {

/// Threshold below which |alpha - 1| (or |q - 1|) counts as the classical,
/// undeformed case. The closed forms are 0/0 there and take an exp/log branch.
inline constexpr double kClassicalTol = 1e-12;

/// Deformation order alpha of the calculus, with its companion entropic
/// index q = 2 - alpha. alpha must be finite and positive; values in (0, 1]
/// are the usual convention, but any positive order is accepted since the
/// q-side of the reparametrization reaches alpha > 1.
class DeformParam {
public:
    explicit DeformParam(double alpha);

    double alpha() const { return alpha_; }

    /// Entropic index, q = 2 - alpha.
    double q() const { return 2.0 - alpha_; }

    /// True exactly when |alpha - 1| <= 1e-12.
    bool is_classical() const;

    /// Convenience: build from the entropic index (alpha = 2 - q).
    static DeformParam from_q(double q) { return DeformParam(2.0 - q); }

private:
    double alpha_;
};

/// Conformable subtraction: (y - x) / x^{1-alpha} = (y - x) * x^{alpha-1}.
/// Requires x > 0. Reduces exactly to y - x at alpha = 1.
double csub(double y, double x, DeformParam p);

/// What to do when the argument of a q-exponential leaves its support.
enum class SupportPolicy {
    kError,       ///< throw SupportError (default)
    kCutoffZero,  ///< return 0 (Tsallis cutoff convention)
};

/// q-exponential [1 + (1-q)x]^{1/(1-q)}; exp(x) in the classical limit.
/// Evaluated through log1p so the value stays continuous in q across q = 1.
/// Defined only where 1 + (1-q)x > 0; see SupportPolicy for the alternative.
double qexp(double q, double x, SupportPolicy policy = SupportPolicy::kError);

/// q-logarithm (y^{1-q} - 1)/(1-q), the functional inverse of qexp on its
/// support; ln(y) in the classical limit. Requires y > 0.
double qln(double q, double y);

/// Stretched exponential exp(x^alpha / alpha), with x >= 0.
double stretched_exp(DeformParam p, double x);

/// Eigenfunction of the dual conformable derivative with rate lambda:
/// [1 + (alpha-1) lambda x]^{1/(alpha-1)}, i.e. qexp(2 - alpha, lambda x).
/// Equals 1 at x = 0 and solves F^{alpha-1} F' = lambda F on its support.
double dcd_eigenfunction(DeformParam p, double lambda, double x);

}  // namespace confcal
