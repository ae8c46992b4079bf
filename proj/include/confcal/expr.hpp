#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "confcal/deform.hpp"
#include "confcal/errors.hpp"
#include "confcal/report.hpp"

namespace confcal {

enum class ConstSym { kPi, kE, kAlpha };
enum class FuncId { kExp, kLn, kSin, kCos, kSqrt, kQexp };

/// Immutable expression tree. Handles share structure; a default-constructed
/// Expr is invalid and only exists to make containers usable.
class Expr {
public:
    enum class Kind { kNumber, kVariable, kConstant, kAdd, kSub, kMul, kDiv, kPow, kApply };

    Expr() = default;

    static Expr number(double v);
    static Expr variable(std::string name);
    static Expr constant(ConstSym sym);
    static Expr add(Expr a, Expr b);
    static Expr sub(Expr a, Expr b);
    static Expr mul(Expr a, Expr b);
    static Expr div(Expr a, Expr b);
    static Expr pow(Expr base, Expr exponent);
    static Expr apply(FuncId fn, std::vector<Expr> args);

    bool valid() const { return node_ != nullptr; }
    Kind kind() const;
    double number_value() const;
    const std::string& variable_name() const;
    ConstSym constant_symbol() const;
    FuncId function() const;
    std::size_t child_count() const;
    const Expr& child(std::size_t i) const;

    bool is_number() const { return valid() && kind() == Kind::kNumber; }
    bool is_number(double v) const { return is_number() && number_value() == v; }

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Structural equality (numbers compared exactly).
bool operator==(const Expr& a, const Expr& b);
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

inline Expr operator+(const Expr& a, const Expr& b) { return Expr::add(a, b); }
inline Expr operator-(const Expr& a, const Expr& b) { return Expr::sub(a, b); }
inline Expr operator*(const Expr& a, const Expr& b) { return Expr::mul(a, b); }
inline Expr operator/(const Expr& a, const Expr& b) { return Expr::div(a, b); }

using Bindings = std::map<std::string, double>;

/// Parse the expression grammar:
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := unary ("^" factor)?          -- right-associative
///   unary  := "-" unary | primary
///   primary:= NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")"
/// Functions: exp, ln, sin, cos, sqrt, qexp(index, arg).
/// Constants: pi, e, alpha. Throws ParseError with the first bad offset.
Expr parse(std::string_view text);

/// Minimal-parentheses rendering; parse(to_string(e)) is structurally
/// equal to e.
std::string to_string(const Expr& e);

/// Evaluate with the given variable bindings (Const alpha reads the binding
/// named "alpha"). Domain violations throw; non-finite intermediate results
/// throw OverflowError.
double evaluate(const Expr& e, const Bindings& bindings);

bool contains_variable(const Expr& e, const std::string& var);
std::vector<std::string> free_variables(const Expr& e);
Expr substitute(const Expr& e, const std::string& var, const Expr& replacement);

/// Classical symbolic derivative with respect to `var`. The result is run
/// through simplify(). Differentiating through the index argument of qexp
/// is not supported.
Expr derivative(const Expr& e, const std::string& var);

/// Terminating rule set: constant folding, 0/1 identities, like-term
/// collection with numeric coefficients, and power merging. Base powers are
/// merged only when the base is `positive_var` or an exp/qexp application
/// (both positive wherever defined).
Expr simplify(const Expr& e, const std::string& positive_var = "");

/// Whether deformed symbolic results carry alpha as a number or as the
/// opaque constant `alpha`.
enum class AlphaMode { kNumeric, kSymbolic };

/// Symbolic conformable derivative: simplify(var^{1-alpha} * d/dvar e).
Expr cd_symbolic(const Expr& e, const std::string& var, DeformParam p,
                 AlphaMode mode = AlphaMode::kNumeric);

/// Symbolic dual conformable derivative: simplify(e^{alpha-1} * d/dvar e).
Expr dcd_symbolic(const Expr& e, const std::string& var, DeformParam p,
                  AlphaMode mode = AlphaMode::kNumeric);

/// Per-variable sampling intervals for check_identity.
struct SamplingBox {
    std::map<std::string, std::pair<double, double>> ranges;
};

/// Sample both sides at n points drawn uniformly from the box (plus fixed
/// bindings), skipping points where either side raises a domain error.
/// Passes iff the max relative residual is <= tol with at least n/2 valid
/// samples; fewer valid samples raise InsufficientSamplesError.
ReportEntry check_identity(const std::string& name, const Expr& lhs, const Expr& rhs,
                           const SamplingBox& box, int n, double tol, std::uint64_t seed = 0,
                           const Bindings& fixed = {});

}  // namespace confcal
