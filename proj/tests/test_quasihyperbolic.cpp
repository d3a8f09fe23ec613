#include <doctest.h>

#include "hqc/errors.hpp"
#include "hqc/fixtures.hpp"
#include "hqc/mapspec.hpp"
#include "hqc/quasihyperbolic.hpp"
#include "support.hpp"

using namespace hqc;

namespace {

Box window2() { return {{-3, 0}, {3, 4}}; }

// j_D(x, y) = log(1 + |x - y| / min(d(x), d(y))) is a lower bound for k_D.
double j_metric(const Domain& d, const Vec& x, const Vec& y) {
    return std::log1p(distance(x, y) / std::min(d.boundary_distance(x), d.boundary_distance(y)));
}

}  // namespace

TEST_CASE("neighbour offsets") {
    CHECK(neighbor_offsets(2, Neighborhood::Radius1).size() == 8);
    CHECK(neighbor_offsets(2, Neighborhood::Radius2).size() == 16);
    CHECK(neighbor_offsets(3, Neighborhood::Radius1).size() == 26);
    CHECK(neighbor_offsets(3, Neighborhood::Radius2).size() == 98);
}

TEST_CASE("radial distance in the disk converges") {
    const Domain ball = Domain::unit_ball(2);
    const double exact = -std::log(0.1);
    double prev_err = 1e300;
    for (double h : {0.04, 0.02, 0.01}) {
        const QHGraph g = QHGraph::build(ball, h);
        const double k = g.distance({0, 0}, {0.9, 0});
        const double err = std::abs(k - exact) / exact;
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 0.02);
}

TEST_CASE("vertical distance in the half-plane") {
    const Domain hs = Domain::half_space({0, 1}, 0);
    const QHGraph coarse = QHGraph::build(hs, 0.04, Neighborhood::Radius2, window2());
    const QHGraph fine = QHGraph::build(hs, 0.02, Neighborhood::Radius2, window2());
    const Vec a{0.0, 0.2}, b{0.0, 2.0};
    const double exact = std::log(10.0);
    const double ec = std::abs(coarse.distance(a, b) - exact), ef = std::abs(fine.distance(a, b) - exact);
    CHECK(ef < ec);
    CHECK(ef / exact < 0.02);
    CHECK_THROWS_AS(QHGraph::build(hs, 0.04), PreconditionError);
}

TEST_CASE("graph distances are symmetric and dominate the j metric") {
    const Domain ball = Domain::unit_ball(2);
    const QHGraph g = QHGraph::build(ball, 0.02);
    testing::Rng rng(61);
    for (int i = 0; i < 40; ++i) {
        const Vec x = rng.in_ball(2, 0.9), y = rng.in_ball(2, 0.9);
        const double k = g.distance(x, y);
        CHECK(k == g.distance(y, x));
        CHECK(k >= j_metric(ball, x, y) * (1 - 0.02));
        // ... and is at most the length of the straight segment (polar-free upper bound).
        const double seg = testing::integrate(
            [&](double t) { return distance(x, y) / ball.boundary_distance(x + (y - x) * t); }, 0, 1, 32);
        CHECK(k <= seg * (1 + 0.02));
    }
    CHECK(g.distance({0.1, 0.1}, {0.1, 0.1}) == 0.0);
}

TEST_CASE("paths run between the query points") {
    const QHGraph g = QHGraph::build(Domain::unit_ball(2), 0.05);
    const QHPath p = g.path({-0.5, 0.0}, {0.5, 0.2});
    REQUIRE(p.points.size() >= 3);
    CHECK(p.points.front() == Vec{-0.5, 0.0});
    CHECK(p.points.back() == Vec{0.5, 0.2});
    CHECK(p.length == g.distance({-0.5, 0.0}, {0.5, 0.2}));
}

TEST_CASE("query and resolution errors") {
    const QHGraph g = QHGraph::build(Domain::unit_ball(2), 0.05);
    CHECK_THROWS_AS(g.distance({0.0, 0.0}, {0.99, 0.0}), DomainError);
    CHECK_THROWS_AS(QHGraph::build(Domain::unit_ball(2), 0.0), PreconditionError);
    CHECK_THROWS_AS(QHGraph::build(Domain::unit_ball(2), 1.2), ResolutionError);
}

TEST_CASE("3D ball graph") {
    const QHGraph g = QHGraph::build(Domain::unit_ball(3), 0.08);
    const double exact = -std::log(0.1);
    CHECK(std::abs(g.distance({0, 0, 0}, {0.9, 0, 0}) - exact) / exact < 0.06);
    CHECK(g.stats().directions == 98);
}

TEST_CASE("image boundary distance") {
    const HarmonicMap shear = build_map(find_fixture("shear_c05")->spec).map;
    const ImageBoundary ib(shear);
    testing::Rng rng(62);
    for (int i = 0; i < 50; ++i) {
        const Vec p = shear.evaluate(rng.in_ball(2, 0.95));
        CHECK(ib.distance(p) == doctest::Approx(ellipsoid_distance({1.5, 0.5}, p)).epsilon(1e-8));
    }
}

TEST_CASE("pulled-back identity graph reproduces the ball graph") {
    const HarmonicMap id = HarmonicMap::identity(2);
    const QHGraph ball = QHGraph::build(Domain::unit_ball(2), 0.04);
    const QHGraph pb = QHGraph::pulled_back(id, 0.04);
    CHECK(pb.is_pullback());
    CHECK(pb.stats().nodes == ball.stats().nodes);
    testing::Rng rng(63);
    for (int i = 0; i < 10; ++i) {
        const Vec x = rng.in_ball(2, 0.85), y = rng.in_ball(2, 0.85);
        CHECK(pb.distance(x, y) == doctest::Approx(ball.distance(x, y)).epsilon(1e-6));
    }
}

TEST_CASE("bi-Lipschitz scan of a linear map") {
    const HarmonicMap shear = build_map(find_fixture("shear_c05")->spec).map;
    const QHGraph src = QHGraph::build(Domain::unit_ball(2), 0.04);
    const QHGraph tgt = QHGraph::build(Domain::ellipsoid({1.5, 0.5}), 0.02);
    const BilipschitzStats s = qh_bilipschitz_scan(shear, src, tgt, {Strategy::UniformBall, 12, 1, 0.95});
    CHECK(s.pairs.size() == 12);
    CHECK(std::isfinite(s.m_hat));
    for (const PairRatio& p : s.pairs) {
        CHECK(p.ratio <= s.m_hat);
        CHECK(p.ratio >= 1 / s.m_hat);
    }
    // Same pairs for the same plan.
    const auto a = qh_pairs(shear, src, tgt, {Strategy::UniformBall, 12, 1, 0.95});
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].first == s.pairs[i].x);
}

TEST_CASE("Gehring-Osgood constant is finite") {
    const HarmonicMap f = build_map(find_fixture("shear_c05")->spec).map;
    const QHGraph src = QHGraph::build(Domain::unit_ball(2), 0.04);
    const QHGraph tgt = QHGraph::build(Domain::ellipsoid({1.5, 0.5}), 0.02);
    const GehringOsgoodResult r = gehring_osgood_check(f, src, tgt, {Strategy::UniformBall, 6, 2, 0.95}, 3.0);
    CHECK(std::isfinite(r.c_hat));
    CHECK(r.exponent == doctest::Approx(1.0 / 3.0));
    CHECK(r.pairs == 6);
}
