#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "confcal/deform.hpp"

using namespace confcal;

TEST_CASE("deformation parameter validates and reparametrizes") {
    CHECK_THROWS_AS(DeformParam(-0.5), DomainError);
    CHECK_THROWS_AS(DeformParam(std::numeric_limits<double>::infinity()), DomainError);
    CHECK_THROWS_AS(DeformParam(std::numeric_limits<double>::quiet_NaN()), DomainError);

    CHECK(DeformParam(0.5).q() == 1.5);
    CHECK(DeformParam(1.25).q() == 0.75);
    CHECK(DeformParam::from_q(0.5).alpha() == 1.5);
    CHECK(DeformParam(0.0).q() == 2.0);  // admitted for the dual-side operators
    CHECK_THROWS_AS(stretched_exp(DeformParam(0.0), 1.0), DomainError);

    CHECK(DeformParam(1.0).is_classical());
    CHECK(DeformParam(1.0 + 1e-13).is_classical());
    CHECK_FALSE(DeformParam(1.0 + 1e-11).is_classical());
    CHECK_FALSE(DeformParam(0.5).is_classical());
}

TEST_CASE("conformable subtraction") {
    CHECK(csub(5.0, 4.0, DeformParam(1.0)) == 1.0);
    CHECK(csub(5.0, 4.0, DeformParam(0.5)) == doctest::Approx(0.5).epsilon(1e-14));

    // x = 1 makes the weight 1 for any order.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ys(-10.0, 10.0);
    std::uniform_real_distribution<double> alphas(0.2, 2.0);
    for (int i = 0; i < 200; ++i) {
        const double y = ys(rng);
        CHECK(csub(y, 1.0, DeformParam(alphas(rng))) == doctest::Approx(y - 1.0).epsilon(1e-14));
        // alpha = 1 is exact subtraction, no roundoff allowed.
        const double x = std::abs(ys(rng)) + 0.1;
        CHECK(csub(y, x, DeformParam(1.0)) == y - x);
    }

    CHECK_THROWS_AS(csub(1.0, 0.0, DeformParam(0.5)), DomainError);
    CHECK_THROWS_AS(csub(1.0, -2.0, DeformParam(0.5)), DomainError);
    // Weight overflow is reported, not returned as inf.
    CHECK_THROWS_AS(csub(1e10, 1e-300, DeformParam(0.0)), DomainError);
}

TEST_CASE("q-exponential closed forms") {
    CHECK(qexp(1.0, 1.0) == std::exp(1.0));
    CHECK(qexp(0.0, 3.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(qexp(2.0, 0.5) == doctest::Approx(2.0).epsilon(1e-14));

    // qexp(q, 0) = 1 exactly.
    for (double q : {-1.0, 0.0, 0.5, 1.0, 1.0 + 1e-9, 2.0, 3.0}) {
        CHECK(qexp(q, 0.0) == 1.0);
    }
}

TEST_CASE("q-exponential support handling") {
    CHECK_THROWS_AS(qexp(2.0, 1.5), SupportError);
    CHECK_THROWS_AS(qexp(2.0, 1.0), SupportError);  // base exactly 0
    CHECK(qexp(2.0, 1.5, SupportPolicy::kCutoffZero) == 0.0);
    CHECK(qexp(2.0, 0.5, SupportPolicy::kCutoffZero) == doctest::Approx(2.0));
    // A support error is a domain error.
    CHECK_THROWS_AS(qexp(3.0, 1.0), DomainError);
}

TEST_CASE("q-exponential is continuous in q across the classical point") {
    for (double q : {1.0 - 1e-9, 1.0 + 1e-9}) {
        for (double x = -5.0; x <= 5.0; x += 0.25) {
            const double want = std::exp(x);
            CHECK(std::abs(qexp(q, x) - want) <= 1e-6 * want);
        }
    }
}

TEST_CASE("q-logarithm inverts the q-exponential") {
    CHECK(qln(1.0, std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(qln(0.0, 4.0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(qln(2.0, 2.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(qln(0.5, 0.0), DomainError);
    CHECK_THROWS_AS(qln(0.5, -1.0), DomainError);

    // Round trip over q in [-1, 3], x inside the support.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> qs(-1.0, 3.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double q = qs(rng);
        const double u = 1.0 - q;
        double lo = -5.0;
        double hi = 5.0;
        if (u > 1e-12) lo = std::max(lo, -0.95 / u);
        if (u < -1e-12) hi = std::min(hi, -0.95 / u);
        const double x = lo + (hi - lo) * unit(rng);
        const double back = qln(q, qexp(q, x));
        CHECK(std::abs(back - x) <= 1e-10 * std::max(std::abs(x), 1.0));
    }
}

TEST_CASE("stretched exponential") {
    CHECK(stretched_exp(DeformParam(1.0), 2.0) == doctest::Approx(7.389056098930650).epsilon(1e-15));
    CHECK(stretched_exp(DeformParam(0.5), 1.0) == doctest::Approx(7.389056098930650).epsilon(1e-14));
    for (double alpha : {0.3, 0.5, 1.0, 1.7}) {
        CHECK(stretched_exp(DeformParam(alpha), 0.0) == 1.0);
    }
    CHECK_THROWS_AS(stretched_exp(DeformParam(0.5), -0.1), DomainError);
    CHECK_THROWS_AS(stretched_exp(DeformParam(1.0), 1000.0), OverflowError);
    CHECK_THROWS_AS(stretched_exp(DeformParam(2.0), 40.0), OverflowError);
}

TEST_CASE("dual eigenfunction closed forms") {
    CHECK(dcd_eigenfunction(DeformParam(2.0), 1.0, 3.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(dcd_eigenfunction(DeformParam(1.0), 2.0, 1.0) ==
          doctest::Approx(7.389056098930650).epsilon(1e-15));
    CHECK(dcd_eigenfunction(DeformParam(0.5), 1.0, 1.0) == doctest::Approx(4.0).epsilon(1e-14));
    for (double alpha : {0.4, 0.9, 1.5, 2.5}) {
        CHECK(dcd_eigenfunction(DeformParam(alpha), 1.3, 0.0) == 1.0);
    }
    // Past the support boundary x* = -1/((alpha-1) lambda).
    CHECK_THROWS_AS(dcd_eigenfunction(DeformParam(0.5), 1.0, 2.0), SupportError);
    CHECK_THROWS_AS(dcd_eigenfunction(DeformParam(0.5), 1.0, 3.0), SupportError);
    CHECK_THROWS_AS(dcd_eigenfunction(DeformParam(1.5), -1.0, 2.5), SupportError);
}

TEST_CASE("dual eigenfunction equals the q-exponential under alpha = 2 - q") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> alphas(0.2, 2.5);
    std::uniform_real_distribution<double> lambdas(0.2, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int checked = 0;
    for (int i = 0; i < 500; ++i) {
        const double alpha = alphas(rng);
        if (std::abs(alpha - 1.0) < 1e-6) continue;
        const double lambda = lambdas(rng);
        double hi = 3.0;
        if (alpha < 1.0) hi = std::min(hi, 0.95 / ((1.0 - alpha) * lambda));
        const double x = hi * unit(rng);
        const DeformParam p(alpha);
        // Independent route straight from the power form.
        const double direct = std::pow(1.0 + (alpha - 1.0) * lambda * x, 1.0 / (alpha - 1.0));
        const double via_q = dcd_eigenfunction(p, lambda, x);
        CHECK(std::abs(via_q - direct) <= 1e-12 * std::max(std::abs(direct), 1.0));
        CHECK(via_q == qexp(2.0 - alpha, lambda * x));
        ++checked;
    }
    CHECK(checked > 400);
}
