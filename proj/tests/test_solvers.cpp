#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "confcal/solvers.hpp"

using namespace confcal;

namespace {

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace

TEST_CASE("grid function validates its invariants") {
    CHECK_THROWS_AS(GridFunction({0.0, 1.0}, {1.0}), DomainError);
    CHECK_THROWS_AS(GridFunction({0.0, 0.0}, {1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(GridFunction({1.0, 0.5}, {1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(GridFunction({0.0, 1.0}, {1.0, std::nan("")}), DomainError);
    CHECK_THROWS_AS(GridFunction({}, {}), DomainError);

    const GridFunction g({0.0, 1.0, 2.0}, {1.0, 2.0, 5.0});
    CHECK(g.size() == 3);
}

TEST_CASE("cubic interpolation reproduces smooth data") {
    std::vector<double> xs;
    std::vector<double> ys;
    for (int i = 0; i <= 64; ++i) {
        const double x = 3.0 * i / 64.0;
        xs.push_back(x);
        ys.push_back(std::sin(x));
    }
    const RealFunction interp = GridFunction(xs, ys).cubic_interpolant();
    for (double x = 0.05; x < 3.0; x += 0.17) {
        CHECK(std::abs(interp(x) - std::sin(x)) <= 1e-5);
    }
    // Exact at the nodes.
    CHECK(interp(xs[10]) == doctest::Approx(ys[10]).epsilon(1e-14));
}

TEST_CASE("conformable eigen solver matches the closed form") {
    // Classical: y = exp(x - 0.1).
    const GridFunction cls = solve_cd_eigen(DeformParam(1.0), 1.0, 0.1, 1.0, 2.0, 256);
    CHECK(cls.values().front() == 1.0);  // y(x0) = y0 exactly
    for (std::size_t i = 0; i < cls.size(); i += 16) {
        CHECK(rel_err(cls.values()[i], std::exp(cls.nodes()[i] - 0.1)) <= 1e-12);
    }

    // Deformed: y = y0 exp((x^a - x0^a) lambda / a).
    const double alpha = 0.5;
    const GridFunction def = solve_cd_eigen(DeformParam(alpha), 1.0, 0.1, 1.0, 1.0, 512);
    CHECK(def.nodes().back() == 1.0);
    const double want_at_1 = std::exp(2.0 * (1.0 - std::sqrt(0.1)));
    CHECK(rel_err(def.values().back(), want_at_1) <= 1e-12);

    CHECK_THROWS_AS(solve_cd_eigen(DeformParam(0.5), 1.0, 0.0, 1.0, 1.0, 64), DomainError);
    CHECK_THROWS_AS(solve_cd_eigen(DeformParam(0.5), 1.0, 1.0, 1.0, 0.5, 64), DomainError);
}

TEST_CASE("dual eigen solver") {
    // alpha = 2: F' = lambda, F = 1 + x exactly.
    const EigenSolution lin = solve_dcd_eigen(DeformParam(2.0), 1.0, 1.0, 1.0, 64);
    CHECK_FALSE(lin.event.has_value());
    CHECK(lin.grid.values().back() == doctest::Approx(2.0).epsilon(1e-13));

    // Classical: F = exp(2x).
    const EigenSolution cls = solve_dcd_eigen(DeformParam(1.0), 2.0, 1.0, 1.0, 512);
    for (std::size_t i = 0; i < cls.grid.size(); i += 32) {
        CHECK(rel_err(cls.grid.values()[i], std::exp(2.0 * cls.grid.nodes()[i])) <= 1e-6);
    }

    // alpha = 1/2: F = (1 - x/2)^{-2}, blow-up strictly before x = 2.
    const EigenSolution blow = solve_dcd_eigen(DeformParam(0.5), 1.0, 1.0, 3.0, 4096);
    REQUIRE(blow.event.has_value());
    CHECK(blow.event->kind == EventKind::kBlowUp);
    CHECK(blow.event->location < 2.0);
    CHECK(blow.grid.nodes().back() < 2.0);
    for (std::size_t i = 0; i < blow.grid.size(); ++i) {
        const double x = blow.grid.nodes()[i];
        if (x > 1.5) break;
        const double want = std::pow(1.0 - 0.5 * x, -2.0);
        CHECK(rel_err(blow.grid.values()[i], want) <= 1e-6);
    }

    CHECK_THROWS_AS(solve_dcd_eigen(DeformParam(0.5), 1.0, 0.0, 1.0, 64), DomainError);
    CHECK_THROWS_AS(solve_dcd_eigen(DeformParam(0.5), 1.0, 1.0, -1.0, 64), DomainError);
}

TEST_CASE("dual eigen solver agrees with the eigenfunction and satisfies the eigen relation") {
    for (double alpha : {0.5, 0.8, 1.25}) {
        for (double lambda : {0.5, 1.0}) {
            const DeformParam p(alpha);
            double x_end = 1.0;
            if (alpha < 1.0) x_end = std::min(1.0, 0.8 / ((1.0 - alpha) * lambda));
            const EigenSolution sol = solve_dcd_eigen(p, lambda, 1.0, x_end, 1024);
            REQUIRE_FALSE(sol.event.has_value());
            for (std::size_t i = 0; i < sol.grid.size(); i += 64) {
                CHECK(rel_err(sol.grid.values()[i],
                              dcd_eigenfunction(p, lambda, sol.grid.nodes()[i])) <= 1e-6);
            }
            // dcd of the interpolated solution reproduces lambda F.
            const RealFunction interp = sol.grid.cubic_interpolant();
            for (std::size_t i = 8; i + 8 < sol.grid.size(); i += 64) {
                const double x = sol.grid.nodes()[i];
                const double want = lambda * sol.grid.values()[i];
                CHECK(std::abs(dcd(interp, p, x) - want) / std::abs(want) <= 1e-4);
            }
        }
    }
}

TEST_CASE("dual eigen solver shows fourth-order convergence") {
    const DeformParam p(0.5);
    auto max_err = [&](int steps) {
        const EigenSolution sol = solve_dcd_eigen(p, 1.0, 1.0, 1.0, steps);
        double worst = 0.0;
        for (std::size_t i = 0; i < sol.grid.size(); ++i) {
            const double want = std::pow(1.0 - 0.5 * sol.grid.nodes()[i], -2.0);
            worst = std::max(worst, rel_err(sol.grid.values()[i], want));
        }
        return worst;
    };
    const double coarse = max_err(32);
    const double fine = max_err(64);
    CHECK(coarse > 1e-12);  // above roundoff, so the ratio is meaningful
    CHECK(coarse / fine >= 8.0);
}

TEST_CASE("classical oscillator matches cosine and conserves energy") {
    OscillatorConfig cfg{DeformParam(1.0), 2.0, 1.0, 0.0, 0.7, 1024};
    const Trajectory tr = solve_oscillator(cfg);
    CHECK_FALSE(tr.event.has_value());
    CHECK(tr.size() == 1025);
    for (std::size_t i = 0; i < tr.size(); i += 64) {
        CHECK(std::abs(tr.x[i] - std::cos(2.0 * tr.t[i])) <= 1e-6);
    }
    const double e0 = tr.energy.front();
    CHECK(e0 == doctest::Approx(2.0).epsilon(1e-12));  // (1/2) omega^2 x0^2
    for (double e : tr.energy) {
        CHECK(std::abs(e - e0) / e0 <= 1e-10);
    }
}

TEST_CASE("classical oscillator detects the zero crossing near pi/4") {
    OscillatorConfig cfg{DeformParam(1.0), 2.0, 1.0, 0.0, 2.0, 2048};
    const Trajectory tr = solve_oscillator(cfg);
    REQUIRE(tr.event.has_value());
    CHECK(tr.event->kind == EventKind::kZeroCrossing);
    const double quarter = 3.14159265358979324 / 4.0;
    CHECK(std::abs(tr.event->location - quarter) <= 5e-3);
    // All retained states are strictly positive.
    for (double x : tr.x) CHECK(x > 0.0);
}

TEST_CASE("deformed oscillator conserves the deformed energy") {
    for (double alpha : {0.8, 0.9, 1.1}) {
        OscillatorConfig cfg{DeformParam(alpha), 1.0, 1.0, 0.0, 1.2, 2048};
        const Trajectory tr = solve_oscillator(cfg);
        REQUIRE_FALSE(tr.event.has_value());
        const double e0 = tr.energy.front();
        for (double e : tr.energy) {
            CHECK(std::abs(e - e0) / e0 <= 1e-6);
        }
    }
}

TEST_CASE("oscillator step halving reduces the energy drift at fourth order") {
    auto drift = [](int steps) {
        OscillatorConfig cfg{DeformParam(0.9), 1.0, 1.0, 0.0, 1.0, steps};
        const Trajectory tr = solve_oscillator(cfg);
        double worst = 0.0;
        for (double e : tr.energy) {
            worst = std::max(worst, std::abs(e - tr.energy.front()) / tr.energy.front());
        }
        return worst;
    };
    const double coarse = drift(32);
    const double fine = drift(64);
    CHECK(coarse > 1e-12);
    CHECK(coarse / fine >= 8.0);
}

TEST_CASE("oscillator configuration validation") {
    CHECK_THROWS_AS(solve_oscillator({DeformParam(1.0), 0.0, 1.0, 0.0, 1.0, 64}), DomainError);
    CHECK_THROWS_AS(solve_oscillator({DeformParam(1.0), 1.0, 0.0, 0.0, 1.0, 64}), DomainError);
    CHECK_THROWS_AS(solve_oscillator({DeformParam(1.0), 1.0, 1.0, 0.0, -1.0, 64}), DomainError);
    CHECK_THROWS_AS(solve_oscillator({DeformParam(1.0), 1.0, 1.0, 0.0, 1.0, 8}), DomainError);
}

TEST_CASE("defining-equation residuals") {
    // Exact linear solution: residual at roundoff.
    const EigenSolution lin = solve_dcd_eigen(DeformParam(2.0), 1.0, 1.0, 1.0, 128);
    CHECK(residual(lin.grid, EigenEquation::kDcd, DeformParam(2.0), 1.0) <= 1e-6);

    // Classical exponential on a fine grid.
    const GridFunction cls = solve_cd_eigen(DeformParam(1.0), 1.0, 0.5, 1.0, 1.5, 8192);
    CHECK(residual(cls, EigenEquation::kCd, DeformParam(1.0), 1.0) <= 1e-8);

    // Equilibrium at omega = 0: identically zero residual.
    Trajectory still;
    still.t = {0.0, 0.5, 1.0, 1.5};
    still.x = {2.0, 2.0, 2.0, 2.0};
    still.v = {0.0, 0.0, 0.0, 0.0};
    still.energy = {0.0, 0.0, 0.0, 0.0};
    CHECK(residual(still, DeformParam(1.0), 0.0) == 0.0);

    // A real trajectory has a small but nonzero residual.
    OscillatorConfig cfg{DeformParam(0.9), 1.0, 1.0, 0.0, 1.0, 4096};
    const Trajectory tr = solve_oscillator(cfg);
    CHECK(residual(tr, DeformParam(0.9), 1.0) <= 1e-6);

    CHECK_THROWS_AS(residual(GridFunction({0.0, 1.0}, {1.0, 2.0}), EigenEquation::kCd,
                             DeformParam(1.0), 1.0),
                    DomainError);
}
