#include <cctype>
#include <charconv>
#include <string>

#include "confcal/expr.hpp"

namespace confcal {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

struct Parser {
    std::string_view s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\n' || s[pos] == '\r')) {
            ++pos;
        }
    }

    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    bool consume(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(std::size_t at, const std::string& msg) { throw ParseError(at, msg); }

    Expr parse_expr() {
        Expr e = parse_term();
        for (;;) {
            if (consume('+')) {
                e = Expr::add(std::move(e), parse_term());
            } else if (consume('-')) {
                e = Expr::sub(std::move(e), parse_term());
            } else {
                return e;
            }
        }
    }

    Expr parse_term() {
        Expr e = parse_factor();
        for (;;) {
            if (consume('*')) {
                e = Expr::mul(std::move(e), parse_factor());
            } else if (consume('/')) {
                e = Expr::div(std::move(e), parse_factor());
            } else {
                return e;
            }
        }
    }

    Expr parse_factor() {
        Expr base = parse_unary();
        if (consume('^')) {
            return Expr::pow(std::move(base), parse_factor());  // right-associative
        }
        return base;
    }

    Expr parse_unary() {
        if (consume('-')) {
            Expr inner = parse_unary();
            if (inner.is_number()) return Expr::number(-inner.number_value());
            return Expr::mul(Expr::number(-1.0), std::move(inner));
        }
        return parse_primary();
    }

    Expr parse_primary() {
        skip_ws();
        if (pos >= s.size()) fail(pos, "expected expression");
        const char c = s[pos];
        if (digit(c)) return parse_number();
        if (ident_start(c)) return parse_ident();
        if (c == '(') {
            ++pos;
            Expr e = parse_expr();
            if (!consume(')')) fail(pos, "expected ')'");
            return e;
        }
        fail(pos, "expected expression");
    }

    Expr parse_number() {
        const std::size_t start = pos;
        while (pos < s.size() && digit(s[pos])) ++pos;
        if (pos < s.size() && s[pos] == '.') {
            ++pos;
            while (pos < s.size() && digit(s[pos])) ++pos;
        }
        if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
            std::size_t mark = pos;
            ++pos;
            if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
            if (pos < s.size() && digit(s[pos])) {
                while (pos < s.size() && digit(s[pos])) ++pos;
            } else {
                pos = mark;  // not an exponent; leave 'e' for the next token
            }
        }
        double value = 0.0;
        auto res = std::from_chars(s.data() + start, s.data() + pos, value);
        if (res.ec != std::errc{} || res.ptr != s.data() + pos) {
            fail(start, "malformed number");
        }
        return Expr::number(value);
    }

    Expr parse_ident() {
        const std::size_t start = pos;
        while (pos < s.size() && ident_char(s[pos])) ++pos;
        const std::string name(s.substr(start, pos - start));
        if (peek() == '(') {
            consume('(');
            std::vector<Expr> args;
            args.push_back(parse_expr());
            while (consume(',')) args.push_back(parse_expr());
            if (!consume(')')) fail(pos, "expected ',' or ')'");
            return make_call(start, name, std::move(args));
        }
        if (name == "pi") return Expr::constant(ConstSym::kPi);
        if (name == "e") return Expr::constant(ConstSym::kE);
        if (name == "alpha") return Expr::constant(ConstSym::kAlpha);
        return Expr::variable(name);
    }

    Expr make_call(std::size_t at, const std::string& name, std::vector<Expr> args) {
        FuncId fn;
        std::size_t arity = 1;
        if (name == "exp") {
            fn = FuncId::kExp;
        } else if (name == "ln") {
            fn = FuncId::kLn;
        } else if (name == "sin") {
            fn = FuncId::kSin;
        } else if (name == "cos") {
            fn = FuncId::kCos;
        } else if (name == "sqrt") {
            fn = FuncId::kSqrt;
        } else if (name == "qexp") {
            fn = FuncId::kQexp;
            arity = 2;
        } else {
            fail(at, "unknown function '" + name + "'");
        }
        if (args.size() != arity) {
            fail(at, name + " expects " + std::to_string(arity) + " argument" +
                         (arity == 1 ? "" : "s") + ", got " + std::to_string(args.size()));
        }
        return Expr::apply(fn, std::move(args));
    }
};

}  // namespace

Expr parse(std::string_view text) {
    Parser p{text};
    Expr e = p.parse_expr();
    p.skip_ws();
    if (p.pos < text.size()) p.fail(p.pos, "unexpected trailing input");
    return e;
}

}  // namespace confcal
