#include <doctest.h>

#include "hqc/averaging.hpp"
#include "hqc/errors.hpp"
#include "hqc/fixtures.hpp"
#include "hqc/mapspec.hpp"
#include "support.hpp"

using namespace hqc;

namespace {

LoadedMap fixture(const std::string& name) { return build_map(find_fixture(name)->spec); }

const BallQuadrature kMc = BallQuadrature::monte_carlo(4096, 3);

}  // namespace

TEST_CASE("alpha of linear maps is the Jacobian root") {
    const Domain b2 = Domain::unit_ball(2), b3 = Domain::unit_ball(3);
    const AlphaResult s = alpha(fixture("shear_c05").map, {0.2, -0.3}, b2, kMc);
    CHECK(s.alpha == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));
    CHECK(s.radius == doctest::Approx(1 - std::hypot(0.2, 0.3)));
    const AlphaResult d = alpha(fixture("linear_diag3").map, {0.1, 0.1, 0.5}, b3, BallQuadrature::product_rule(8));
    CHECK(d.alpha == doctest::Approx(std::cbrt(2.0)).epsilon(1e-12));
}

TEST_CASE("alpha of a conformal map with harmonic log J") {
    // f(z) = 2z - z^2 has J = |f'|^2 = 4 |1 - z|^2 and log J harmonic, so the
    // ball mean of log J is its centre value and alpha(z) = 2 |1 - z|.
    const HarmonicMap f = fixture("cardioid2").map;
    const Domain ball = Domain::unit_ball(2);
    testing::Rng rng(51);
    for (int i = 0; i < 20; ++i) {
        const Vec z = rng.in_ball(2, 0.8);
        const double ref = 2 * std::hypot(1 - z[0], z[1]);
        const AlphaResult mc = alpha(f, z, ball, kMc);
        CHECK(std::abs(std::log(mc.alpha / ref)) * 2 <= 3 * mc.error);
        const AlphaResult pr = alpha(f, z, ball, BallQuadrature::product_rule(32));
        CHECK(std::abs(std::log(pr.alpha / ref)) * 2 <= 3 * pr.error);
        CHECK(pr.alpha == doctest::Approx(ref).epsilon(1e-4));
    }
}

TEST_CASE("Monte Carlo and product rules agree within their error estimates") {
    const HarmonicMap f = fixture("poisson_disk2").map;
    const Domain ball = Domain::unit_ball(2);
    for (const Vec& z : {Vec{0.0, 0.0}, Vec{0.5, 0.1}, Vec{-0.3, 0.6}}) {
        const AlphaResult mc = alpha(f, z, ball, BallQuadrature::monte_carlo(20000, 9));
        const AlphaResult pr = alpha(f, z, ball, BallQuadrature::product_rule(48));
        CHECK(std::abs(mc.log_mean - pr.log_mean) <= 3 * (mc.error + pr.error));
        CHECK(pr.error < mc.error);
    }
}

TEST_CASE("alpha is deterministic for a fixed seed") {
    const HarmonicMap f = fixture("cubic2").map;
    const Domain ball = Domain::unit_ball(2);
    const double a = alpha(f, {0.3, 0.2}, ball, BallQuadrature::monte_carlo(2048, 4)).alpha;
    CHECK(alpha(f, {0.3, 0.2}, ball, BallQuadrature::monte_carlo(2048, 4)).alpha == a);
    CHECK(alpha(f, {0.3, 0.2}, ball, BallQuadrature::monte_carlo(2048, 5)).alpha != a);
}

TEST_CASE("degenerate Jacobians abort averaging") {
    const LoadedMap g = fixture("xyz_gradient3");
    CHECK_THROWS_AS(alpha(g.map, {0.0, 0.0, 0.0}, Domain::unit_ball(3), kMc), DegeneracyError);
    CHECK_THROWS_AS(log_det_hessian(*g.gradient)(Vec{0.0, 0.2, 0.3}), DegeneracyError);
}

TEST_CASE("Koebe ratio of the identity") {
    const HarmonicMap f = fixture("identity2").map;
    const Domain ball = Domain::unit_ball(2);
    const KoebeResult k = koebe_ratio(f, {0.3, 0.4}, ball, ball, kMc);
    CHECK(k.ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(k.d_source == doctest::Approx(0.5));
}

TEST_CASE("superharmonicity of constant and harmonic scalars") {
    const Domain b2 = Domain::unit_ball(2), b3 = Domain::unit_ball(3);
    const SuperharmonicReport c =
        superharmonicity_check(log_jacobian(fixture("shear_c05").map), {0.1, 0.2}, {0.1, 0.3, 0.5}, b2);
    CHECK(std::abs(c.min_slack) <= 1e-9);
    CHECK(c.passed);

    // log J of the cardioid is harmonic: slack zero within the error both ways.
    const SuperharmonicReport h =
        superharmonicity_check(log_jacobian(fixture("cardioid2").map), {-0.2, 0.1}, {0.2, 0.4, 0.6}, b2);
    for (const SphereSlack& s : h.spheres) CHECK(std::abs(s.slack) <= 3 * s.error + 1e-12);

    // A strictly subharmonic scalar must fail.
    const SuperharmonicReport sub =
        superharmonicity_check([](const Vec& x) { return x.norm2(); }, Vec{0.0, 0.0, 0.0}, {0.5}, b3);
    CHECK_FALSE(sub.passed);
    // Exact spherical mean of |x|^2 over S(0, 0.5) is 0.25.
    CHECK(sub.spheres[0].slack == doctest::Approx(-0.25).epsilon(1e-12));

    CHECK_THROWS_AS(superharmonicity_check(log_jacobian(fixture("shear_c05").map), {0.5, 0.0}, {0.6}, b2),
                    PreconditionError);
}

TEST_CASE("superharmonicity of the planar Poisson fixture and the perturbed cubic") {
    const SuperharmonicReport p =
        superharmonicity_check(log_jacobian(fixture("poisson_disk2").map), {0.2, -0.1}, {0.1, 0.3, 0.5},
                               Domain::unit_ball(2));
    CHECK(p.passed);
    const LoadedMap g = fixture("cubic_gradient3");
    const SuperharmonicReport c = superharmonicity_check(log_det_hessian(*g.gradient), {0.1, 0.2, -0.1},
                                                         {0.1, 0.3, 0.5}, Domain::unit_ball(3), 32);
    CHECK(c.passed);
}

TEST_CASE("inequality chains") {
    const Domain b2 = Domain::unit_ball(2), b3 = Domain::unit_ball(3);
    const LoadedMap s = fixture("shear_c05");
    const Chain2dReport c2 = chain_check_2d(s.map, {0.1, 0.3}, b2, find_fixture("shear_c05")->spec.target->build(), kMc);
    CHECK(c2.sigma_max2 == doctest::Approx(2.25));
    CHECK(c2.jacobian == doctest::Approx(0.75));
    CHECK(c2.alpha2 == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(c2.passed);

    const LoadedMap g = fixture("gradient_quadratic3");
    const Chain3dReport c3 = chain_check_3d_gradient(*g.gradient, {0.1, 0.2, 0.3}, b3,
                                                     find_fixture("gradient_quadratic3")->spec.target->build(), kMc, 4.0);
    CHECK(c3.alpha3 == doctest::Approx(c3.jacobian).epsilon(1e-12));
    CHECK(c3.second_slack == doctest::Approx(16 * c3.sigma_min3 - c3.jacobian));
    CHECK(c3.passed);
}

TEST_CASE("A-infinity ratio") {
    const Domain b2 = Domain::unit_ball(2), b3 = Domain::unit_ball(3);
    CHECK(a_infinity_ratio(fixture("shear_c05").map, {0.2, 0.2}, 0.5, b2, kMc).ratio ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a_infinity_ratio(fixture("linear_diag3").map, {0.0, 0.2, 0.0}, 1.0, b3, kMc).ratio ==
          doctest::Approx(1.0).epsilon(1e-12));
    // Jensen: the ratio decreases as p grows.
    const HarmonicMap f = fixture("cubic2").map;
    const auto r25 = a_infinity_ratio(f, {0.3, 0.1}, 0.25, b2, kMc);
    const auto r100 = a_infinity_ratio(f, {0.3, 0.1}, 1.0, b2, kMc);
    CHECK(r100.ratio <= r25.ratio + 3 * (r25.error + r100.error));
    CHECK(r100.ratio <= 1 + 3 * r100.error);
    CHECK_THROWS_AS(a_infinity_ratio(f, {0.0, 0.0}, 1.5, b2, kMc), PreconditionError);
}
