// Random expression generators shared by the symbolic tests and the
// acceptance suite. Deterministic for a given PRNG state.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "confcal/expr.hpp"

namespace confcal::testgen {

inline int pick(std::mt19937_64& rng, int n) {
    return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

inline double pick_real(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    return dist(rng);
}

// Arbitrary grammar-covering tree for parse/print round trips.
inline Expr arbitrary_tree(std::mt19937_64& rng, int depth) {
    if (depth <= 0 || pick(rng, 4) == 0) {
        switch (pick(rng, 6)) {
            case 0: return Expr::number(static_cast<double>(pick(rng, 2000) - 1000));
            case 1: return Expr::number(pick_real(rng, -100.0, 100.0));
            case 2: return Expr::number(pick_real(rng, -1.0, 1.0) * 1e8);
            case 3: return Expr::variable(std::vector<std::string>{"x", "y", "z2", "_u"}[pick(rng, 4)]);
            case 4: return Expr::constant(std::vector<ConstSym>{ConstSym::kPi, ConstSym::kE,
                                                                ConstSym::kAlpha}[pick(rng, 3)]);
            default: return Expr::number(pick_real(rng, 0.0, 10.0));
        }
    }
    const int d = depth - 1;
    switch (pick(rng, 7)) {
        case 0: return Expr::add(arbitrary_tree(rng, d), arbitrary_tree(rng, d));
        case 1: return Expr::sub(arbitrary_tree(rng, d), arbitrary_tree(rng, d));
        case 2: return Expr::mul(arbitrary_tree(rng, d), arbitrary_tree(rng, d));
        case 3: return Expr::div(arbitrary_tree(rng, d), arbitrary_tree(rng, d));
        case 4: return Expr::pow(arbitrary_tree(rng, d), arbitrary_tree(rng, d));
        case 5: {
            const FuncId fn = std::vector<FuncId>{FuncId::kExp, FuncId::kLn, FuncId::kSin,
                                                  FuncId::kCos, FuncId::kSqrt}[pick(rng, 5)];
            return Expr::apply(fn, {arbitrary_tree(rng, d)});
        }
        default:
            return Expr::apply(FuncId::kQexp, {arbitrary_tree(rng, d), arbitrary_tree(rng, d)});
    }
}

// Tame tree in one variable x: bounded coefficients and exponents so finite
// differences stay well conditioned on x in [0.7, 1.8].
inline Expr tame_tree(std::mt19937_64& rng, int depth) {
    if (depth <= 0 || pick(rng, 3) == 0) {
        if (pick(rng, 2) == 0) return Expr::variable("x");
        return Expr::number(pick_real(rng, 0.5, 2.0));
    }
    const int d = depth - 1;
    switch (pick(rng, 8)) {
        case 0: return Expr::add(tame_tree(rng, d), tame_tree(rng, d));
        case 1: return Expr::sub(tame_tree(rng, d), tame_tree(rng, d));
        case 2: return Expr::mul(tame_tree(rng, d), tame_tree(rng, d));
        case 3: return Expr::div(tame_tree(rng, d), tame_tree(rng, d));
        case 4: {
            const double expo = std::vector<double>{0.5, 1.0, 2.0, 3.0, -1.0}[pick(rng, 5)];
            return Expr::pow(tame_tree(rng, d), Expr::number(expo));
        }
        case 5: {
            const FuncId fn = std::vector<FuncId>{FuncId::kExp, FuncId::kLn, FuncId::kSin,
                                                  FuncId::kCos, FuncId::kSqrt}[pick(rng, 5)];
            return Expr::apply(fn, {tame_tree(rng, d)});
        }
        case 6: {
            const double q = std::vector<double>{0.0, 0.5, 1.0, 1.5}[pick(rng, 4)];
            return Expr::apply(FuncId::kQexp, {Expr::number(q), tame_tree(rng, d)});
        }
        default: return Expr::mul(Expr::number(pick_real(rng, 0.5, 2.0)), tame_tree(rng, d));
    }
}

}  // namespace confcal::testgen
