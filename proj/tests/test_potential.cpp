#include <doctest.h>

#include <numbers>

#include "hqc/errors.hpp"
#include "hqc/operations.hpp"
#include "hqc/potential.hpp"
#include "support.hpp"

using namespace hqc;

namespace {

// I_s 1(x) in B^3 by the shell theorem: the sphere S(0, rho) contributes
// 2 pi rho / (a (s - 1)) [(a + rho)^(s-1) - |a - rho|^(s-1)] with a = |x|.
// The integrable singularity at rho = a is removed by rho = a -+ t^2.
double riesz_ball_oracle(double s, double a) {
    auto shell = [&](double rho) {
        return 2 * std::numbers::pi * rho / (a * (s - 1)) * (std::pow(a + rho, s - 1) - std::pow(std::abs(a - rho), s - 1));
    };
    const double inner = testing::integrate([&](double t) { return shell(a - t * t) * 2 * t; }, 0, std::sqrt(a), 256);
    const double outer =
        testing::integrate([&](double t) { return shell(a + t * t) * 2 * t; }, 0, std::sqrt(1 - a), 256);
    return inner + outer;
}

}  // namespace

TEST_CASE("Green function basics") {
    testing::Rng rng(71);
    for (std::size_t n : {2u, 3u, 4u}) {
        for (int i = 0; i < 200; ++i) {
            const Vec x = rng.in_ball(n, 0.95), y = rng.in_ball(n, 0.95);
            if (distance(x, y) < 0.05) continue;
            CHECK(green(x, y) == doctest::Approx(green(y, x)).epsilon(1e-12));
            CHECK(green(x, y) < 0.0);
            // Vanishes on the sphere.
            const Vec zeta = rng.on_sphere(n) * (1 - 1e-10);
            CHECK(std::abs(green(zeta, y)) < 1e-8);
        }
    }
    CHECK(green_constant(3) == doctest::Approx(1 / (4 * std::numbers::pi)));
    CHECK(green({0.0, 0.0}, {0.5, 0.0}) == doctest::Approx(std::log(0.5) / (2 * std::numbers::pi)));
    CHECK_THROWS_AS(green({0.1, 0.1}, {0.1, 0.1}), SingularityError);
    CHECK_THROWS_AS(green({1.1, 0.0}, {0.1, 0.1}), DomainError);
}

TEST_CASE("Green gradient matches finite differences and is harmonic off the pole") {
    testing::Rng rng(72);
    for (std::size_t n : {2u, 3u}) {
        for (int i = 0; i < 100; ++i) {
            const Vec x = rng.in_ball(n, 0.9), y = rng.in_ball(n, 0.9);
            if (distance(x, y) < 0.1) continue;
            const Vec g = green_gradient(x, y);
            Vec fd(n);
            const double h = 1e-6;
            for (std::size_t k = 0; k < n; ++k) {
                const Vec e = Vec::unit(n, k) * h;
                fd[k] = (green(x + e, y) - green(x - e, y)) / (2 * h);
            }
            CHECK(distance(g, fd) <= 1e-6 * g.norm());
            double lap = 0.0;
            const double hh = 1e-3;
            for (std::size_t k = 0; k < n; ++k) {
                const Vec e = Vec::unit(n, k) * hh;
                lap += (green(x + e, y) - 2 * green(x, y) + green(x - e, y)) / (hh * hh);
            }
            CHECK(std::abs(lap) < 1e-3 * (1 + g.norm() * g.norm()));
        }
    }
}

TEST_CASE("Green potentials of radial densities") {
    const Density one = [](const Vec&) { return 1.0; };
    const Density r2 = [](const Vec& y) { return y.norm2(); };
    // h = 1 gives w = (|x|^2 - 1) / (2n).
    CHECK(green_potential(one, {0, 0, 0}).value == doctest::Approx(-1.0 / 6).epsilon(1e-9));
    CHECK(green_potential(one, {0.5, 0, 0}).value == doctest::Approx(-0.125).epsilon(1e-9));
    CHECK(green_potential(one, {0.3, -0.2}).value == doctest::Approx((0.13 - 1) / 4).epsilon(1e-9));
    // Laplacian of r^4 is 20 r^2 in R^3 and 16 r^2 in R^2.
    const Vec x3{0.3, 0.1, -0.2};
    CHECK(green_potential(r2, x3).value == doctest::Approx((x3.norm2() * x3.norm2() - 1) / 20).epsilon(1e-9));
    const Vec x2{-0.6, 0.2};
    CHECK(green_potential(r2, x2).value == doctest::Approx((x2.norm2() * x2.norm2() - 1) / 16).epsilon(1e-9));
    // Gradients: x / n and |x|^2 x / 5.
    const PotentialGradient g1 = green_potential_gradient(one, x3);
    CHECK(distance(g1.value, x3 / 3.0) <= 1e-8);
    const PotentialGradient g2 = green_potential_gradient(r2, x3);
    CHECK(distance(g2.value, x3 * (x3.norm2() / 5)) <= 1e-8);
}

TEST_CASE("Riesz potentials of the constant density") {
    const Density one = [](const Vec&) { return 1.0; };
    // At the centre: |S^2| / s.
    CHECK(riesz_potential(2.0, one, {0, 0, 0}).value == doctest::Approx(2 * std::numbers::pi).epsilon(1e-10));
    CHECK(riesz_potential(0.5, one, {0, 0, 0}).value == doctest::Approx(8 * std::numbers::pi).epsilon(1e-9));
    for (double s : {0.5, 1.5, 2.5}) {
        for (double a : {0.3, 0.7}) {
            const double ref = riesz_ball_oracle(s, a);
            const PotentialValue v = riesz_potential(s, one, {0, a, 0});
            CHECK(v.value == doctest::Approx(ref).epsilon(1e-7));
        }
    }
    // h = |y|, s = 1 at the centre: int |y|^{-1} dy = 2 pi.
    CHECK(riesz_potential(1.0, [](const Vec& y) { return y.norm(); }, {0, 0, 0}).value ==
          doctest::Approx(2 * std::numbers::pi).epsilon(1e-9));
    CHECK_THROWS_AS(riesz_potential(3.0, one, {0, 0, 0}), PreconditionError);
}

TEST_CASE("exponent bootstrap") {
    const ExactBootstrapTrace e = sobolev_bootstrap_exact(3, Rational(33, 10));
    REQUIRE(e.sequence.size() == 4);
    CHECK(e.sequence[0] == Rational(33, 10));
    CHECK(e.sequence[1] == Rational(11, 3));
    CHECK(e.sequence[2] == Rational(33, 7));
    CHECK(e.sequence[3] == Rational(11));
    CHECK(e.terminated);
    CHECK_FALSE(e.restarted);
    CHECK(to_string(e.sequence[2]) == "33/7");

    const BootstrapTrace t = sobolev_bootstrap(3, 3.3);
    REQUIRE(t.sequence.size() == 4);
    CHECK(t.sequence[1] == doctest::Approx(11.0 / 3));
    CHECK(t.sequence[3] == doctest::Approx(11.0));
    CHECK(t.epsilon == doctest::Approx(0.1));

    // p0 = 4n/3 lands exactly on 2n and must restart.
    const ExactBootstrapTrace r = sobolev_bootstrap_exact(3, Rational(4));
    CHECK(r.restarted);
    CHECK(r.terminated);
    CHECK(r.start == Rational(4) * (1 - Rational(1, 1000000)));
    CHECK(sobolev_bootstrap(3, 4.0).restarted);

    CHECK_THROWS_AS(sobolev_bootstrap(3, 3.0), PreconditionError);
    CHECK_THROWS_AS(sobolev_bootstrap_exact(3, Rational(6)), PreconditionError);
}

TEST_CASE("every iterate exceeds n (1 + 2^l eps)") {
    for (int n : {2, 3, 4}) {
        for (const char* p0 : {"2.1", "3.3", "4.5", "5.9", "7.7"}) {
            const Rational q = parse_decimal(p0);
            if (!(q > n && q < 2 * n)) continue;
            const ExactBootstrapTrace e = sobolev_bootstrap_exact(n, q);
            const Rational eps = e.start / n - 1;
            Rational pow2 = 1;
            for (std::size_t l = 0; l < e.sequence.size(); ++l, pow2 *= 2) {
                if (l > 0) CHECK(e.sequence[l] > n * (1 + pow2 * eps));
            }
            CHECK(e.terminated);
            CHECK(e.sequence.back() > 2 * n);
        }
    }
}

TEST_CASE("exact decimal parsing") {
    CHECK(parse_decimal("3.3") == Rational(33, 10));
    CHECK(parse_decimal("-1.25e2") == Rational(-125));
    CHECK(parse_decimal("4") == Rational(4));
    CHECK(parse_decimal("0.1e-1") == Rational(1, 100));
    CHECK_THROWS_AS(parse_decimal("abc"), ParseError);
    CHECK_THROWS_AS(parse_decimal("3.3x"), ParseError);
}

TEST_CASE("coefficient estimate covers every sample") {
    std::vector<WSample> s{{0.5, 0.2, -1.0}, {0.3, 2.0, -5.0}, {0.1, 0.9, -2.0}};
    const CoefficientEstimate c = coefficient_estimate(s);
    CHECK(c.b_hat == doctest::Approx(2.0));
    for (const WSample& w : s) CHECK(std::abs(w.laplacian) <= c.a_hat * w.grad_norm * w.grad_norm + c.b_hat + 1e-12);
    CHECK_THROWS_AS(coefficient_estimate({}), PreconditionError);
}
