#include "confcal/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

namespace confcal {

struct Expr::Node {
    Kind kind;
    double number = 0.0;
    std::string name;
    ConstSym sym = ConstSym::kPi;
    FuncId fn = FuncId::kExp;
    std::vector<Expr> children;
};

namespace {

const char* func_name(FuncId fn) {
    switch (fn) {
        case FuncId::kExp: return "exp";
        case FuncId::kLn: return "ln";
        case FuncId::kSin: return "sin";
        case FuncId::kCos: return "cos";
        case FuncId::kSqrt: return "sqrt";
        case FuncId::kQexp: return "qexp";
    }
    return "?";
}

const char* const_name(ConstSym sym) {
    switch (sym) {
        case ConstSym::kPi: return "pi";
        case ConstSym::kE: return "e";
        case ConstSym::kAlpha: return "alpha";
    }
    return "?";
}

}  // namespace

Expr Expr::number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kNumber;
    n->number = v;
    return Expr(std::move(n));
}

Expr Expr::variable(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kVariable;
    n->name = std::move(name);
    return Expr(std::move(n));
}

Expr Expr::constant(ConstSym sym) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kConstant;
    n->sym = sym;
    return Expr(std::move(n));
}

Expr Expr::add(Expr a, Expr b) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kAdd;
    n->children = {std::move(a), std::move(b)};
    return Expr(std::move(n));
}

Expr Expr::sub(Expr a, Expr b) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kSub;
    n->children = {std::move(a), std::move(b)};
    return Expr(std::move(n));
}

Expr Expr::mul(Expr a, Expr b) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kMul;
    n->children = {std::move(a), std::move(b)};
    return Expr(std::move(n));
}

Expr Expr::div(Expr a, Expr b) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kDiv;
    n->children = {std::move(a), std::move(b)};
    return Expr(std::move(n));
}

Expr Expr::pow(Expr base, Expr exponent) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kPow;
    n->children = {std::move(base), std::move(exponent)};
    return Expr(std::move(n));
}

Expr Expr::apply(FuncId fn, std::vector<Expr> args) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kApply;
    n->fn = fn;
    n->children = std::move(args);
    return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::number_value() const { return node_->number; }
const std::string& Expr::variable_name() const { return node_->name; }
ConstSym Expr::constant_symbol() const { return node_->sym; }
FuncId Expr::function() const { return node_->fn; }
std::size_t Expr::child_count() const { return node_->children.size(); }
const Expr& Expr::child(std::size_t i) const { return node_->children[i]; }

bool operator==(const Expr& a, const Expr& b) {
    if (!a.valid() || !b.valid()) return a.valid() == b.valid();
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case Expr::Kind::kNumber: return a.number_value() == b.number_value();
        case Expr::Kind::kVariable: return a.variable_name() == b.variable_name();
        case Expr::Kind::kConstant: return a.constant_symbol() == b.constant_symbol();
        case Expr::Kind::kApply:
            if (a.function() != b.function()) return false;
            [[fallthrough]];
        default: {
            if (a.child_count() != b.child_count()) return false;
            for (std::size_t i = 0; i < a.child_count(); ++i) {
                if (!(a.child(i) == b.child(i))) return false;
            }
            return true;
        }
    }
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Grammar levels: 1 add/sub, 2 mul/div, 3 pow, 4 atoms. A child is
// parenthesized when its level is below what its position requires.
int expr_level(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::kAdd:
        case Expr::Kind::kSub: return 1;
        case Expr::Kind::kMul:
        case Expr::Kind::kDiv: return 2;
        case Expr::Kind::kPow: return 3;
        default: return 4;
    }
}

std::string number_to_string(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void print_to(const Expr& e, int min_level, std::string& out) {
    const bool parens = expr_level(e) < min_level;
    if (parens) out += '(';
    switch (e.kind()) {
        case Expr::Kind::kNumber: out += number_to_string(e.number_value()); break;
        case Expr::Kind::kVariable: out += e.variable_name(); break;
        case Expr::Kind::kConstant: out += const_name(e.constant_symbol()); break;
        case Expr::Kind::kAdd:
            print_to(e.child(0), 1, out);
            out += " + ";
            print_to(e.child(1), 2, out);
            break;
        case Expr::Kind::kSub:
            print_to(e.child(0), 1, out);
            out += " - ";
            print_to(e.child(1), 2, out);
            break;
        case Expr::Kind::kMul:
            print_to(e.child(0), 2, out);
            out += '*';
            print_to(e.child(1), 3, out);
            break;
        case Expr::Kind::kDiv:
            print_to(e.child(0), 2, out);
            out += '/';
            print_to(e.child(1), 3, out);
            break;
        case Expr::Kind::kPow:
            print_to(e.child(0), 4, out);
            out += '^';
            print_to(e.child(1), 3, out);
            break;
        case Expr::Kind::kApply: {
            out += func_name(e.function());
            out += '(';
            for (std::size_t i = 0; i < e.child_count(); ++i) {
                if (i > 0) out += ", ";
                print_to(e.child(i), 0, out);
            }
            out += ')';
            break;
        }
    }
    if (parens) out += ')';
}

}  // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print_to(e, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

std::string num_str(double v) { return number_to_string(v); }

bool exact_integer(double v) {
    return std::isfinite(v) && v == std::rint(v) && std::abs(v) < 9.007199254740992e15;
}

double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw OverflowError(std::string(what) + " produced a non-finite value");
    return v;
}

double eval_pow(double base, double exponent) {
    if (base > 0.0) return checked(std::pow(base, exponent), "power");
    if (base == 0.0) {
        if (exponent > 0.0) return 0.0;
        if (exponent == 0.0) return 1.0;
        throw DomainError("0 raised to a negative power");
    }
    if (exact_integer(exponent)) return checked(std::pow(base, exponent), "power");
    throw DomainError("negative base " + num_str(base) + " with non-integer exponent " +
                      num_str(exponent));
}

}  // namespace

double evaluate(const Expr& e, const Bindings& bindings) {
    switch (e.kind()) {
        case Expr::Kind::kNumber: return e.number_value();
        case Expr::Kind::kVariable: {
            auto it = bindings.find(e.variable_name());
            if (it == bindings.end()) throw UnboundVariableError(e.variable_name());
            return it->second;
        }
        case Expr::Kind::kConstant:
            switch (e.constant_symbol()) {
                case ConstSym::kPi: return std::numbers::pi;
                case ConstSym::kE: return std::numbers::e;
                case ConstSym::kAlpha: {
                    auto it = bindings.find("alpha");
                    if (it == bindings.end()) throw UnboundVariableError("alpha");
                    return it->second;
                }
            }
            break;
        case Expr::Kind::kAdd:
            return checked(evaluate(e.child(0), bindings) + evaluate(e.child(1), bindings), "sum");
        case Expr::Kind::kSub:
            return checked(evaluate(e.child(0), bindings) - evaluate(e.child(1), bindings),
                           "difference");
        case Expr::Kind::kMul:
            return checked(evaluate(e.child(0), bindings) * evaluate(e.child(1), bindings),
                           "product");
        case Expr::Kind::kDiv: {
            const double d = evaluate(e.child(1), bindings);
            if (d == 0.0) throw DomainError("division by zero");
            return checked(evaluate(e.child(0), bindings) / d, "quotient");
        }
        case Expr::Kind::kPow:
            return eval_pow(evaluate(e.child(0), bindings), evaluate(e.child(1), bindings));
        case Expr::Kind::kApply: {
            if (e.function() == FuncId::kQexp) {
                const double q = evaluate(e.child(0), bindings);
                const double x = evaluate(e.child(1), bindings);
                return qexp(q, x);
            }
            const double a = evaluate(e.child(0), bindings);
            switch (e.function()) {
                case FuncId::kExp: return checked(std::exp(a), "exp");
                case FuncId::kLn:
                    if (a <= 0.0) throw DomainError("ln of non-positive value " + num_str(a));
                    return std::log(a);
                case FuncId::kSin: return std::sin(a);
                case FuncId::kCos: return std::cos(a);
                case FuncId::kSqrt:
                    if (a < 0.0) throw DomainError("sqrt of negative value " + num_str(a));
                    return std::sqrt(a);
                default: break;
            }
            break;
        }
    }
    throw Error("malformed expression node");
}

// ---------------------------------------------------------------------------
// Tree utilities

bool contains_variable(const Expr& e, const std::string& var) {
    switch (e.kind()) {
        case Expr::Kind::kVariable: return e.variable_name() == var;
        case Expr::Kind::kNumber:
        case Expr::Kind::kConstant: return false;
        default:
            for (std::size_t i = 0; i < e.child_count(); ++i) {
                if (contains_variable(e.child(i), var)) return true;
            }
            return false;
    }
}

namespace {
void collect_vars(const Expr& e, std::vector<std::string>& out) {
    if (e.kind() == Expr::Kind::kVariable) {
        if (std::find(out.begin(), out.end(), e.variable_name()) == out.end()) {
            out.push_back(e.variable_name());
        }
        return;
    }
    for (std::size_t i = 0; i < e.child_count(); ++i) collect_vars(e.child(i), out);
}
}  // namespace

std::vector<std::string> free_variables(const Expr& e) {
    std::vector<std::string> out;
    collect_vars(e, out);
    std::sort(out.begin(), out.end());
    return out;
}

Expr substitute(const Expr& e, const std::string& var, const Expr& replacement) {
    switch (e.kind()) {
        case Expr::Kind::kVariable:
            return e.variable_name() == var ? replacement : e;
        case Expr::Kind::kNumber:
        case Expr::Kind::kConstant: return e;
        case Expr::Kind::kAdd:
            return Expr::add(substitute(e.child(0), var, replacement),
                             substitute(e.child(1), var, replacement));
        case Expr::Kind::kSub:
            return Expr::sub(substitute(e.child(0), var, replacement),
                             substitute(e.child(1), var, replacement));
        case Expr::Kind::kMul:
            return Expr::mul(substitute(e.child(0), var, replacement),
                             substitute(e.child(1), var, replacement));
        case Expr::Kind::kDiv:
            return Expr::div(substitute(e.child(0), var, replacement),
                             substitute(e.child(1), var, replacement));
        case Expr::Kind::kPow:
            return Expr::pow(substitute(e.child(0), var, replacement),
                             substitute(e.child(1), var, replacement));
        case Expr::Kind::kApply: {
            std::vector<Expr> args;
            args.reserve(e.child_count());
            for (std::size_t i = 0; i < e.child_count(); ++i) {
                args.push_back(substitute(e.child(i), var, replacement));
            }
            return Expr::apply(e.function(), std::move(args));
        }
    }
    throw Error("malformed expression node");
}

}  // namespace confcal
