#include <cmath>
#include <optional>
#include <random>

#include "confcal/expr.hpp"

namespace confcal {

namespace {

using Kind = Expr::Kind;

Expr num(double v) { return Expr::number(v); }

bool exact_integer(double v) {
    return std::isfinite(v) && v == std::rint(v) && std::abs(v) < 9.007199254740992e15;
}

// --- linear-in-alpha folding -----------------------------------------------
// Subtrees built from numbers, Const(alpha), +, -, * and / with numeric
// denominators fold to a + b*alpha. pi and e stay symbolic on purpose.

struct LinAlpha {
    double a = 0.0;
    double b = 0.0;
};

std::optional<LinAlpha> fold_linear(const Expr& e) {
    switch (e.kind()) {
        case Kind::kNumber: return LinAlpha{e.number_value(), 0.0};
        case Kind::kConstant:
            if (e.constant_symbol() == ConstSym::kAlpha) return LinAlpha{0.0, 1.0};
            return std::nullopt;
        case Kind::kAdd: {
            auto l = fold_linear(e.child(0));
            auto r = fold_linear(e.child(1));
            if (!l || !r) return std::nullopt;
            return LinAlpha{l->a + r->a, l->b + r->b};
        }
        case Kind::kSub: {
            auto l = fold_linear(e.child(0));
            auto r = fold_linear(e.child(1));
            if (!l || !r) return std::nullopt;
            return LinAlpha{l->a - r->a, l->b - r->b};
        }
        case Kind::kMul: {
            auto l = fold_linear(e.child(0));
            auto r = fold_linear(e.child(1));
            if (!l || !r) return std::nullopt;
            if (l->b == 0.0) return LinAlpha{l->a * r->a, l->a * r->b};
            if (r->b == 0.0) return LinAlpha{l->a * r->a, l->b * r->a};
            return std::nullopt;
        }
        case Kind::kDiv: {
            auto l = fold_linear(e.child(0));
            auto r = fold_linear(e.child(1));
            if (!l || !r || r->b != 0.0 || r->a == 0.0) return std::nullopt;
            return LinAlpha{l->a / r->a, l->b / r->a};
        }
        default: return std::nullopt;
    }
}

Expr rebuild_linear(const LinAlpha& l) {
    const Expr alpha = Expr::constant(ConstSym::kAlpha);
    if (l.b == 0.0) return num(l.a);
    Expr alpha_part = (l.b == 1.0 || l.b == -1.0) ? alpha : Expr::mul(num(std::abs(l.b)), alpha);
    if (l.a == 0.0) {
        if (l.b == 1.0) return alpha;
        return Expr::mul(num(l.b), alpha);
    }
    if (l.b > 0.0) return Expr::add(num(l.a), alpha_part);
    return Expr::sub(num(l.a), alpha_part);
}

std::optional<Expr> try_fold_linear(const Expr& e) {
    auto lin = fold_linear(e);
    if (!lin || !std::isfinite(lin->a) || !std::isfinite(lin->b)) return std::nullopt;
    Expr rebuilt = rebuild_linear(*lin);
    if (rebuilt == e) return std::nullopt;
    return rebuilt;
}

// --- factor and term decomposition -----------------------------------------

bool mergeable_base(const Expr& base, const std::string& positive_var) {
    if (base.kind() == Kind::kVariable) {
        return !positive_var.empty() && base.variable_name() == positive_var;
    }
    if (base.kind() == Kind::kApply) {
        return base.function() == FuncId::kExp || base.function() == FuncId::kQexp;
    }
    return false;
}

void flatten_mul(const Expr& e, std::vector<Expr>& out) {
    if (e.kind() == Kind::kMul) {
        flatten_mul(e.child(0), out);
        flatten_mul(e.child(1), out);
    } else {
        out.push_back(e);
    }
}

struct Term {
    double coef;
    Expr core;  // invalid() for the pure-number term
};

void flatten_terms(const Expr& e, double sign, std::vector<Term>& out) {
    if (e.kind() == Kind::kAdd) {
        flatten_terms(e.child(0), sign, out);
        flatten_terms(e.child(1), sign, out);
        return;
    }
    if (e.kind() == Kind::kSub) {
        flatten_terms(e.child(0), sign, out);
        flatten_terms(e.child(1), -sign, out);
        return;
    }
    if (e.kind() == Kind::kNumber) {
        out.push_back({sign * e.number_value(), Expr()});
        return;
    }
    if (e.kind() == Kind::kMul) {
        std::vector<Expr> factors;
        flatten_mul(e, factors);
        double coef = sign;
        std::vector<Expr> rest;
        for (const Expr& f : factors) {
            if (f.is_number()) {
                coef *= f.number_value();
            } else {
                rest.push_back(f);
            }
        }
        if (rest.empty()) {
            out.push_back({coef, Expr()});
            return;
        }
        Expr core = rest[0];
        for (std::size_t i = 1; i < rest.size(); ++i) core = Expr::mul(core, rest[i]);
        out.push_back({coef, core});
        return;
    }
    out.push_back({sign, e});
}

std::pair<Expr, Expr> pow_split(const Expr& e) {
    if (e.kind() == Kind::kPow) return {e.child(0), e.child(1)};
    return {e, num(1.0)};
}

// --- local rewrite rules (children are already simplified) ------------------

Expr add_rules(const Expr& e) {
    if (auto folded = try_fold_linear(e)) return *folded;
    std::vector<Term> terms;
    flatten_terms(e, 1.0, terms);

    std::vector<Term> merged;
    bool have_const = false;
    std::size_t const_slot = 0;
    for (const Term& t : terms) {
        if (!t.core.valid()) {
            if (have_const) {
                merged[const_slot].coef += t.coef;
            } else {
                have_const = true;
                const_slot = merged.size();
                merged.push_back(t);
            }
            continue;
        }
        bool found = false;
        for (Term& m : merged) {
            if (m.core.valid() && m.core == t.core) {
                m.coef += t.coef;
                found = true;
                break;
            }
        }
        if (!found) merged.push_back(t);
    }

    Expr out;
    for (const Term& t : merged) {
        if (t.coef == 0.0 && (t.core.valid() || merged.size() > 1)) continue;  // drop zeros
        Expr piece;
        double c = t.coef;
        bool negative = c < 0.0;
        if (!t.core.valid()) {
            piece = num(negative && out.valid() ? -c : c);
        } else if (c == 1.0 || (negative && c == -1.0 && out.valid())) {
            piece = t.core;
        } else {
            piece = Expr::mul(num(negative && out.valid() ? -c : c), t.core);
        }
        if (!out.valid()) {
            out = piece;
        } else if (negative) {
            out = Expr::sub(out, piece);
        } else {
            out = Expr::add(out, piece);
        }
    }
    if (!out.valid()) return num(0.0);
    return out;
}

Expr rebuild_pow(const Expr& base, const Expr& exponent) {
    if (exponent.is_number(1.0)) return base;
    if (exponent.is_number(0.0)) return num(1.0);
    return Expr::pow(base, exponent);
}

Expr mul_rules(const Expr& e, const std::string& positive_var) {
    if (auto folded = try_fold_linear(e)) return *folded;
    std::vector<Expr> factors;
    flatten_mul(e, factors);

    double coef = 1.0;
    std::vector<Expr> exp_args;          // arguments of exp factors, to be summed
    std::vector<std::pair<Expr, Expr>> groups;  // (base, exponent); order preserved
    for (const Expr& f : factors) {
        if (f.is_number()) {
            coef *= f.number_value();
            continue;
        }
        if (f.kind() == Kind::kApply && f.function() == FuncId::kExp) {
            exp_args.push_back(f.child(0));
            continue;
        }
        auto [base, expo] = pow_split(f);
        bool merged = false;
        if (mergeable_base(base, positive_var)) {
            for (auto& g : groups) {
                if (g.first == base) {
                    g.second = Expr::add(g.second, expo);
                    merged = true;
                    break;
                }
            }
        }
        if (!merged) groups.emplace_back(base, expo);
    }
    if (coef == 0.0) return num(0.0);

    std::vector<Expr> rebuilt;
    if (!exp_args.empty()) {
        Expr arg = exp_args[0];
        for (std::size_t i = 1; i < exp_args.size(); ++i) arg = Expr::add(arg, exp_args[i]);
        rebuilt.push_back(Expr::apply(FuncId::kExp, {arg}));
    }
    for (const auto& g : groups) rebuilt.push_back(rebuild_pow(g.first, g.second));

    if (rebuilt.empty()) return num(coef);
    Expr out;
    if (coef != 1.0) out = num(coef);
    for (const Expr& f : rebuilt) out = out.valid() ? Expr::mul(out, f) : f;
    return out;
}

Expr div_rules(const Expr& e, const std::string& positive_var) {
    if (auto folded = try_fold_linear(e)) return *folded;
    const Expr& a = e.child(0);
    const Expr& b = e.child(1);
    if (a.is_number(0.0)) return num(0.0);
    if (b.is_number(1.0)) return a;
    if (b.is_number() && b.number_value() != 0.0 && std::isfinite(1.0 / b.number_value())) {
        return mul_rules(Expr::mul(num(1.0 / b.number_value()), a), positive_var);
    }
    if (a.kind() == Kind::kApply && a.function() == FuncId::kExp && b.kind() == Kind::kApply &&
        b.function() == FuncId::kExp) {
        return Expr::apply(FuncId::kExp, {Expr::sub(a.child(0), b.child(0))});
    }
    auto [ba, ea] = pow_split(a);
    auto [bb, eb] = pow_split(b);
    if (ba == bb && mergeable_base(ba, positive_var)) {
        return rebuild_pow(ba, Expr::sub(ea, eb));
    }
    return e;
}

Expr pow_rules(const Expr& e, const std::string& positive_var) {
    const Expr& base = e.child(0);
    const Expr& expo = e.child(1);
    if (expo.is_number(0.0)) return num(1.0);
    if (expo.is_number(1.0)) return base;
    if (base.is_number(1.0)) return num(1.0);
    if (base.is_number() && expo.is_number()) {
        const double u = base.number_value();
        const double w = expo.number_value();
        if (u > 0.0 || (u == 0.0 && w > 0.0) || (u < 0.0 && exact_integer(w))) {
            const double r = std::pow(u, w);
            if (std::isfinite(r)) return num(r);
        }
        return e;
    }
    if (base.kind() == Kind::kApply && base.function() == FuncId::kExp) {
        return Expr::apply(FuncId::kExp, {Expr::mul(expo, base.child(0))});
    }
    if (base.kind() == Kind::kPow && mergeable_base(base.child(0), positive_var)) {
        return rebuild_pow(base.child(0), Expr::mul(base.child(1), expo));
    }
    return e;
}

Expr apply_rules(const Expr& e) {
    for (std::size_t i = 0; i < e.child_count(); ++i) {
        if (!e.child(i).is_number()) return e;
    }
    try {
        return num(evaluate(e, {}));
    } catch (const Error&) {
        return e;
    }
}

Expr full_pass(const Expr& e, const std::string& positive_var) {
    switch (e.kind()) {
        case Kind::kNumber:
        case Kind::kVariable:
        case Kind::kConstant: return e;
        case Kind::kAdd:
        case Kind::kSub: {
            Expr a = full_pass(e.child(0), positive_var);
            Expr b = full_pass(e.child(1), positive_var);
            Expr node = e.kind() == Kind::kAdd ? Expr::add(a, b) : Expr::sub(a, b);
            return add_rules(node);
        }
        case Kind::kMul:
            return mul_rules(Expr::mul(full_pass(e.child(0), positive_var),
                                       full_pass(e.child(1), positive_var)),
                             positive_var);
        case Kind::kDiv:
            return div_rules(Expr::div(full_pass(e.child(0), positive_var),
                                       full_pass(e.child(1), positive_var)),
                             positive_var);
        case Kind::kPow:
            return pow_rules(Expr::pow(full_pass(e.child(0), positive_var),
                                       full_pass(e.child(1), positive_var)),
                             positive_var);
        case Kind::kApply: {
            std::vector<Expr> args;
            args.reserve(e.child_count());
            for (std::size_t i = 0; i < e.child_count(); ++i) {
                args.push_back(full_pass(e.child(i), positive_var));
            }
            return apply_rules(Expr::apply(e.function(), std::move(args)));
        }
    }
    return e;
}

}  // namespace

Expr simplify(const Expr& e, const std::string& positive_var) {
    Expr cur = e;
    for (int pass = 0; pass < 10; ++pass) {
        Expr next = full_pass(cur, positive_var);
        if (next == cur) break;
        cur = next;
    }
    return cur;
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

Expr d_raw(const Expr& e, const std::string& var);

Expr d_apply(const Expr& e, const std::string& var) {
    const Expr& u = e.child(e.function() == FuncId::kQexp ? 1 : 0);
    Expr du = d_raw(u, var);
    switch (e.function()) {
        case FuncId::kExp: return Expr::mul(e, du);
        case FuncId::kLn: return Expr::div(du, u);
        case FuncId::kSin: return Expr::mul(Expr::apply(FuncId::kCos, {u}), du);
        case FuncId::kCos:
            return Expr::mul(num(-1.0), Expr::mul(Expr::apply(FuncId::kSin, {u}), du));
        case FuncId::kSqrt: return Expr::div(du, Expr::mul(num(2.0), e));
        case FuncId::kQexp: {
            if (contains_variable(e.child(0), var)) {
                throw UnsupportedNodeError(
                    "cannot differentiate through the index argument of qexp");
            }
            // d/dx qexp(q, u) = u' * qexp(q, u)^q
            return Expr::mul(Expr::pow(e, e.child(0)), du);
        }
    }
    throw UnsupportedNodeError("unknown function");
}

Expr d_raw(const Expr& e, const std::string& var) {
    switch (e.kind()) {
        case Kind::kNumber:
        case Kind::kConstant: return num(0.0);
        case Kind::kVariable: return num(e.variable_name() == var ? 1.0 : 0.0);
        case Kind::kAdd: return Expr::add(d_raw(e.child(0), var), d_raw(e.child(1), var));
        case Kind::kSub: return Expr::sub(d_raw(e.child(0), var), d_raw(e.child(1), var));
        case Kind::kMul: {
            const Expr& u = e.child(0);
            const Expr& v = e.child(1);
            return Expr::add(Expr::mul(d_raw(u, var), v), Expr::mul(u, d_raw(v, var)));
        }
        case Kind::kDiv: {
            const Expr& u = e.child(0);
            const Expr& v = e.child(1);
            Expr numer = Expr::sub(Expr::mul(d_raw(u, var), v), Expr::mul(u, d_raw(v, var)));
            return Expr::div(numer, Expr::pow(v, num(2.0)));
        }
        case Kind::kPow: {
            const Expr& u = e.child(0);
            const Expr& w = e.child(1);
            const bool var_in_base = contains_variable(u, var);
            const bool var_in_exp = contains_variable(w, var);
            if (!var_in_exp) {
                if (!var_in_base) return num(0.0);
                // w * u^{w-1} * u'
                return Expr::mul(Expr::mul(w, Expr::pow(u, Expr::sub(w, num(1.0)))),
                                 d_raw(u, var));
            }
            if (!var_in_base) {
                // u^w * ln(u) * w'
                return Expr::mul(Expr::mul(e, Expr::apply(FuncId::kLn, {u})), d_raw(w, var));
            }
            // u^w * (w' ln u + w u'/u)
            Expr inner = Expr::add(Expr::mul(d_raw(w, var), Expr::apply(FuncId::kLn, {u})),
                                   Expr::div(Expr::mul(w, d_raw(u, var)), u));
            return Expr::mul(e, inner);
        }
        case Kind::kApply: return d_apply(e, var);
    }
    throw UnsupportedNodeError("malformed expression node");
}

}  // namespace

Expr derivative(const Expr& e, const std::string& var) {
    return simplify(d_raw(e, var));
}

namespace {
Expr alpha_term(DeformParam p, AlphaMode mode, bool one_minus) {
    if (mode == AlphaMode::kNumeric) {
        return num(one_minus ? 1.0 - p.alpha() : p.alpha() - 1.0);
    }
    const Expr alpha = Expr::constant(ConstSym::kAlpha);
    return one_minus ? Expr::sub(num(1.0), alpha) : Expr::sub(alpha, num(1.0));
}
}  // namespace

Expr cd_symbolic(const Expr& e, const std::string& var, DeformParam p, AlphaMode mode) {
    Expr weight = Expr::pow(Expr::variable(var), alpha_term(p, mode, /*one_minus=*/true));
    return simplify(Expr::mul(weight, d_raw(e, var)), var);
}

Expr dcd_symbolic(const Expr& e, const std::string& var, DeformParam p, AlphaMode mode) {
    Expr weight = Expr::pow(e, alpha_term(p, mode, /*one_minus=*/false));
    return simplify(Expr::mul(weight, d_raw(e, var)), var);
}

// ---------------------------------------------------------------------------
// Sampling-based identity checking

ReportEntry check_identity(const std::string& name, const Expr& lhs, const Expr& rhs,
                           const SamplingBox& box, int n, double tol, std::uint64_t seed,
                           const Bindings& fixed) {
    if (n <= 0) throw DomainError("check_identity needs a positive sample count");
    for (const Expr* side : {&lhs, &rhs}) {
        for (const std::string& v : free_variables(*side)) {
            if (box.ranges.count(v) == 0 && fixed.count(v) == 0) {
                throw UnboundVariableError(v);
            }
        }
    }
    for (const auto& [v, range] : box.ranges) {
        if (!(range.first <= range.second) || !std::isfinite(range.first) ||
            !std::isfinite(range.second)) {
            throw DomainError("invalid sampling range for '" + v + "'");
        }
    }

    std::mt19937_64 rng(seed);
    int valid = 0;
    double max_residual = 0.0;
    for (int i = 0; i < n; ++i) {
        Bindings b = fixed;
        for (const auto& [v, range] : box.ranges) {
            std::uniform_real_distribution<double> dist(range.first, range.second);
            b[v] = dist(rng);
        }
        double l = 0.0;
        double r = 0.0;
        try {
            l = evaluate(lhs, b);
            r = evaluate(rhs, b);
        } catch (const DomainError&) {
            continue;
        } catch (const OverflowError&) {
            continue;
        } catch (const NumericsError&) {
            continue;
        }
        ++valid;
        const double scale = std::max({std::abs(l), std::abs(r), 1.0});
        max_residual = std::max(max_residual, std::abs(l - r) / scale);
    }
    if (valid * 2 < n) {
        throw InsufficientSamplesError("only " + std::to_string(valid) + " of " +
                                       std::to_string(n) + " samples were in the domain");
    }
    ReportEntry entry;
    entry.name = name;
    entry.samples = valid;
    entry.max_residual = max_residual;
    entry.tolerance = tol;
    entry.passed = max_residual <= tol;
    return entry;
}

}  // namespace confcal
