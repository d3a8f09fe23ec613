#include <doctest.h>

#include <Eigen/Dense>
#include <numbers>

#include "hqc/errors.hpp"
#include "hqc/fixtures.hpp"
#include "hqc/harmonic.hpp"
#include "hqc/mapspec.hpp"
#include "support.hpp"

using namespace hqc;

namespace {

Polynomial poly2(std::initializer_list<std::pair<MultiIndex, double>> t) { return Polynomial(2, t); }
Polynomial poly3(std::initializer_list<std::pair<MultiIndex, double>> t) { return Polynomial(3, t); }

HarmonicMap shear() {
    return HarmonicMap({HarmonicPolynomial(poly2({{{1, 0, 0}, 1.5}})), HarmonicPolynomial(poly2({{{0, 1, 0}, 0.5}}))});
}

double mat_dist(const Mat& a, const Mat& b) { return testing::frobenius(a - b); }

}  // namespace

TEST_CASE("evaluation examples") {
    CHECK(HarmonicMap::identity(3).evaluate({0.1, 0.2, 0.3}) == Vec{0.1, 0.2, 0.3});
    const Vec v = shear().evaluate({0.6, 0.2});
    CHECK(v[0] == doctest::Approx(0.9));
    CHECK(v[1] == doctest::Approx(0.1));
    CHECK(evaluate(shear(), {0.6, 0.2}) == v);
}

TEST_CASE("non-harmonic polynomials are rejected") {
    CHECK_THROWS_AS(HarmonicPolynomial(poly2({{{2, 0, 0}, 1.0}, {{0, 2, 0}, 1.0}})), HarmonicityError);
    CHECK_NOTHROW(HarmonicPolynomial(poly2({{{2, 0, 0}, 1.0}, {{0, 2, 0}, -1.0}})));
}

TEST_CASE("Poisson extension of cos 2t") {
    const Vec x{0.5, 0.0};
    const PoissonField trig = PoissonField::trigonometric({0, 0, 1}, {});
    CHECK(trig.value(x).value == doctest::Approx(0.25).epsilon(1e-14));
    const auto g = [](double t) { return std::cos(2 * t); };
    CHECK(PoissonField::spectral_lift(g, 64).value(x).value == doctest::Approx(0.25).epsilon(1e-13));
    const auto q = PoissonField::circle_quadrature(g).value(x);
    CHECK(q.value == doctest::Approx(0.25).epsilon(1e-11));
    CHECK(std::abs(q.value - 0.25) <= std::max(q.error, 1e-13));
    // Constant data and cos t.
    CHECK(PoissonField::circle_quadrature([](double) { return 1.0; }).value({0.3, -0.4}).value ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(PoissonField::trigonometric({0, 1}, {}).value({0.3, 0.4}).value == doctest::Approx(0.3));
}

TEST_CASE("trigonometric lift equals the polynomial lift") {
    const std::vector<double> c{0.2, -0.5, 0.3, 0.0, 0.1}, s{0.0, 0.7, -0.2, 0.4};
    const PoissonField f = PoissonField::trigonometric(c, s);
    const HarmonicPolynomial p = harmonic_from_fourier(c, s);
    testing::Rng rng(31);
    for (int i = 0; i < 200; ++i) {
        const Vec x = rng.in_ball(2, 0.999);
        double v;
        Vec g;
        Mat h;
        f.jet(x, v, g, &h);
        CHECK(v == doctest::Approx(p.value(x)).epsilon(1e-12));
        CHECK(distance(g, p.gradient(x)) <= 1e-12);
        CHECK(mat_dist(h, p.hessian(x)) <= 1e-11);
    }
}

TEST_CASE("spectral lift of the planar Poisson fixture matches direct Poisson integration") {
    const auto cosb = [](double t) { return std::cos(poisson_disk_angle(t)); };
    const auto sinb = [](double t) { return std::sin(poisson_disk_angle(t)); };
    const HarmonicMap f = build_map(find_fixture("poisson_disk2")->spec).map;
    testing::Rng rng(32);
    for (int i = 0; i < 30; ++i) {
        const Vec x = rng.in_ball(2, 0.95);
        const Vec v = f.evaluate(x);
        CHECK(v[0] == doctest::Approx(testing::poisson_disk(cosb, x)).epsilon(1e-10));
        CHECK(v[1] == doctest::Approx(testing::poisson_disk(sinb, x)).epsilon(1e-10));
    }
}

TEST_CASE("exact-lift Hessians agree with finite differences of the gradient") {
    const HarmonicMap f = build_map(find_fixture("poisson_disk2")->spec).map;
    testing::Rng rng(33);
    for (int i = 0; i < 50; ++i) {
        const Vec x = rng.in_ball(2, 0.9);
        const Jet j = f.jet(x, true);
        REQUIRE(j.hessians);
        for (std::size_t c = 0; c < 2; ++c) {
            const auto grad = [&](const Vec& y) { return f.derivative(y).row(c); };
            const Mat fd = testing::fd_jacobian(grad, x, 1e-5);
            CHECK(mat_dist((*j.hessians)[c], fd) <= 1e-7 * std::max(1.0, testing::frobenius(fd)));
        }
    }
}

TEST_CASE("analytic derivatives agree with finite differences on every fixture") {
    testing::Rng rng(34);
    for (const Fixture& fx : fixture_registry()) {
        const HarmonicMap f = build_map(fx.spec).map;
        const auto eval = [&](const Vec& y) { return f.evaluate(y); };
        for (int i = 0; i < 100; ++i) {
            const Vec x = rng.in_ball(f.dim(), 0.95);
            const Mat d = f.derivative(x);
            const Mat fd = testing::fd_jacobian(eval, x, 1e-5);
            CHECK_MESSAGE(mat_dist(d, fd) <= 1e-7 * std::max(1.0, testing::frobenius(d)), fx.spec.name);
        }
    }
}

TEST_CASE("gradient map of x^3 - 3xy^2") {
    const GradientMap g(HarmonicPolynomial(poly2({{{3, 0, 0}, 1.0}, {{1, 2, 0}, -3.0}})));
    const Vec x{0.1, 0.2};
    const Mat d = g.map().derivative(x);
    // H_u = [[6x, -6y], [-6y, -6x]].
    CHECK(mat_dist(d, Mat(2, {0.6, -1.2, -1.2, -0.6})) <= 1e-14);
    const auto eval = [&](const Vec& y) { return g.map().evaluate(y); };
    CHECK(mat_dist(d, testing::fd_jacobian(eval, x)) <= 1e-8);
}

TEST_CASE("gradient-map derivatives are symmetric") {
    testing::Rng rng(35);
    for (const Fixture& fx : fixture_registry()) {
        if (!fx.spec.potential) continue;
        const LoadedMap lm = build_map(fx.spec);
        REQUIRE(lm.gradient);
        for (int i = 0; i < 1000; ++i) {
            const Mat d = lm.map.derivative(rng.in_ball(3, 0.999));
            CHECK(mat_dist(d, d.transpose()) <= 1e-12 * std::max(1.0, testing::frobenius(d)));
        }
    }
}

TEST_CASE("jets carry consistent singular values") {
    testing::Rng rng(36);
    for (const Fixture& fx : fixture_registry()) {
        const HarmonicMap f = build_map(fx.spec).map;
        for (int i = 0; i < 100; ++i) {
            const Jet j = f.jet(rng.in_ball(f.dim(), 0.99));
            Eigen::MatrixXd m(f.dim(), f.dim());
            for (std::size_t a = 0; a < f.dim(); ++a)
                for (std::size_t b = 0; b < f.dim(); ++b) m(a, b) = j.derivative(a, b);
            const auto ref = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
            for (std::size_t a = 0; a < f.dim(); ++a)
                CHECK(j.singular_values[a] == doctest::Approx(ref(a)).epsilon(1e-11).scale(ref(0)));
            CHECK(j.jacobian == doctest::Approx(m.determinant()).epsilon(1e-12).scale(std::pow(ref(0), f.dim())));
        }
    }
}

TEST_CASE("solid harmonics") {
    const Vec x{0.3, -0.2, 0.5};
    CHECK(Polynomial(solid_harmonic(1, 1))(x) == doctest::Approx(0.3));
    CHECK(Polynomial(solid_harmonic(1, -1))(x) == doctest::Approx(-0.2));
    CHECK(Polynomial(solid_harmonic(1, 0))(x) == doctest::Approx(0.5));
    CHECK(solid_harmonic(2, 0)(x) == doctest::Approx((3 * 0.25 - x.norm2()) / 2));
    CHECK(solid_harmonic(2, 2)(x) == doctest::Approx(3 * (0.09 - 0.04)));
    for (int l = 0; l <= 6; ++l)
        for (int m = -l; m <= l; ++m) CHECK_NOTHROW(HarmonicPolynomial(solid_harmonic(l, m)));
}

TEST_CASE("spherical lift matches kernel quadrature of the same boundary data") {
    const std::vector<SphericalHarmonicTerm> terms{{0, 0, 0.5}, {1, 1, 1.0}, {2, -1, 0.3}, {3, 2, -0.1}};
    const HarmonicPolynomial p = harmonic_from_spherical(terms);
    const auto g = [&](const Vec& z) { return p.value(z); };
    const PoissonField q = PoissonField::sphere_quadrature(g);
    testing::Rng rng(37);
    for (int i = 0; i < 20; ++i) {
        const Vec x = rng.in_ball(3, 0.8);
        const auto v = q.value(x);
        CHECK(v.value == doctest::Approx(p.value(x)).epsilon(1e-9));
        CHECK(std::abs(v.value - p.value(x)) <= std::max(10 * v.error, 1e-12));
    }
}

TEST_CASE("kernel quadrature field is harmonic and has the mean-value property") {
    const auto g = [](const Vec& z) { return std::exp(z[0]) * std::cos(z[1]) + z[2] * z[2]; };
    const PoissonField q = PoissonField::sphere_quadrature(g);
    const Component c = q;
    CHECK(std::abs(laplacian_residual(c, {0.3, 0, 0})) < 1e-4);
    // Value at the centre equals the boundary mean (midpoint rule in theta and phi).
    double mean = 0.0;
    const std::size_t m = 400;
    for (std::size_t i = 0; i < m; ++i) {
        const double th = std::numbers::pi * (i + 0.5) / m;
        for (std::size_t j = 0; j < 2 * m; ++j) {
            const double ph = std::numbers::pi * j / m;
            const Vec z{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
            mean += g(z) * std::sin(th) * std::numbers::pi / (4.0 * m * m);
        }
    }
    CHECK(q.value({0, 0, 0}).value == doctest::Approx(mean).epsilon(1e-5));
    double v;
    Vec grad;
    Mat hess;
    CHECK_THROWS_AS(q.jet({0.1, 0, 0}, v, grad, &hess), CapabilityError);
}

TEST_CASE("points outside the open ball are rejected") {
    CHECK_THROWS_AS(shear().evaluate({1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(PoissonField::trigonometric({1}, {}).value({0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(shear().evaluate({0.1, 0.1, 0.1}), DimensionError);
}

TEST_CASE("mixed-dimension components are rejected") {
    CHECK_THROWS_AS(HarmonicMap({HarmonicPolynomial(poly2({{{1, 0, 0}, 1}})),
                                 HarmonicPolynomial(poly3({{{0, 1, 0}, 1}}))}),
                    DimensionError);
}
