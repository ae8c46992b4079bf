#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "confcal/deform.hpp"
#include "confcal/operators.hpp"
#include "confcal/report.hpp"

namespace confcal {

/// Maximum residuals of the three fundamental-theorem readings for the dual
/// integral, sampled on interior points of [a, b]:
///   pointwise: f^{alpha-1} (f^{1-alpha} f) = f, exact to roundoff;
///   strict:    dual derivative of the strict antiderivative vs f;
///   paper form: dual derivative of the literal dual integral vs f,
///               generically nonzero for alpha != 1.
struct FtcDualComparison {
    double pointwise_residual = 0.0;
    double strict_residual = 0.0;
    double paper_form_residual = 0.0;
};

FtcDualComparison ftc_dual_comparison(const RealFunction& f, DeformParam p, double a, double b,
                                      int points = 9);

/// Run the full identity suite with the given PRNG seed. `samples` (>= 32)
/// controls the sampled checks; grid-based entries record their own counts.
/// Tolerances can be overridden per entry name; a non-empty filter keeps
/// only entries whose name contains it as a substring.
PropertyReport run_suite(std::uint64_t seed, int samples,
                         const std::map<std::string, double>& tol_overrides = {},
                         const std::string& filter = {});

}  // namespace confcal
