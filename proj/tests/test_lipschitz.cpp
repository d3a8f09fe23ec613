#include <doctest.h>

#include <numeric>

#include "hqc/fixtures.hpp"
#include "hqc/lipschitz.hpp"
#include "hqc/mapspec.hpp"
#include "support.hpp"

using namespace hqc;

namespace {

LoadedMap fixture(const std::string& name) { return build_map(find_fixture(name)->spec); }

}  // namespace

TEST_CASE("linear maps attain their extreme singular values") {
    const SamplingPlan plan{Strategy::UniformBall, 500, 1, 0.999};
    const PairScanResult s = lipschitz_scan(fixture("shear_c05").map, plan);
    CHECK(s.l_hat == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(s.inv_hat == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.l_pair.infinitesimal);
    const PairScanResult d = lipschitz_scan(fixture("linear_diag3").map, plan);
    CHECK(d.l_hat == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(d.inv_hat == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("finite pair ratios stay between the infinitesimal extremes of a linear map") {
    const PairScanResult s = lipschitz_scan(fixture("shear_c05").map, {Strategy::UniformBall, 500, 2, 0.999}, 10);
    CHECK(s.pair_count == 500);
    CHECK(s.histogram.counts.size() == 10);
    CHECK(std::accumulate(s.histogram.counts.begin(), s.histogram.counts.end(), std::size_t{0}) == 500);
    CHECK(s.histogram.lo >= 0.5 - 1e-12);
    CHECK(s.histogram.hi <= 1.5 + 1e-12);
}

TEST_CASE("pair prefixes are nested and the near-boundary share is fixed") {
    const SamplingPlan plan{Strategy::UniformBall, 100, 4, 0.999};
    std::size_t near = 0;
    for (std::size_t i = 0; i < 100; ++i) {
        const auto [x, y] = lipschitz_pair(plan, 3, i);
        const auto [x2, y2] = lipschitz_pair({Strategy::UniformBall, 1000, 4, 0.999}, 3, i);
        CHECK(x == x2);
        CHECK(y == y2);
        CHECK(x.norm() < 1.0);
        CHECK(y.norm() < 1.0);
        if (x.norm() >= kNearBoundaryPairRadius && distance(x, y) <= kNearBoundaryPairSeparation + 1e-12) ++near;
    }
    CHECK(near == 30);
}

TEST_CASE("nonlinear maps: the scan bounds match the derivative scan") {
    const HarmonicMap f = fixture("cubic2").map;
    const PairScanResult s = lipschitz_scan(f, {Strategy::UniformBall, 2000, 5, 0.999});
    CHECK(s.inv_hat > 0.0);
    CHECK(s.inv_hat <= s.l_hat);
    // No finite pair may exceed the sup of sigma_max along its segment; check the pair itself.
    const double r = distance(s.l_pair.x, s.l_pair.y);
    if (!s.l_pair.infinitesimal)
        CHECK(s.l_hat == doctest::Approx(distance(f.evaluate(s.l_pair.x), f.evaluate(s.l_pair.y)) / r));
}

TEST_CASE("gradient-map positivity certificate") {
    const SamplingPlan plan{Strategy::UniformBall, 10000, 1, 0.999};
    const GradientCertificate ok = gradient_map_certificate(*fixture("cubic_gradient3").gradient, plan);
    CHECK(ok.passed);
    CHECK(ok.inf_jacobian >= 1.9);
    CHECK_FALSE(ok.failure_point);
    CHECK(ok.samples == 10000);

    const GradientCertificate bad = gradient_map_certificate(*fixture("xyz_gradient3").gradient, plan);
    CHECK_FALSE(bad.passed);
    REQUIRE(bad.failure_point);
    CHECK(fixture("xyz_gradient3").map.jacobian(*bad.failure_point) <= 0.0);
    // Lowest-index failure: no earlier sample fails.
    const auto pts = plan_points(plan, 3);
    for (const Vec& x : pts) {
        if (x == *bad.failure_point) break;
        CHECK(fixture("xyz_gradient3").map.jacobian(x) > 0.0);
    }
    // Deterministic.
    CHECK(*gradient_map_certificate(*fixture("xyz_gradient3").gradient, plan).failure_point == *bad.failure_point);
}
