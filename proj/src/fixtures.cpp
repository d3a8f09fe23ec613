#include "hqc/fixtures.hpp"

#include <cmath>
#include <numbers>

namespace hqc {

namespace {

using Terms = std::vector<std::pair<MultiIndex, double>>;

DomainRecord unit_ball_record(std::size_t n) {
    DomainRecord d;
    d.kind = Domain::Kind::UnitBall;
    d.dim = n;
    return d;
}

DomainRecord ellipsoid_record(const Vec& axes) {
    DomainRecord d;
    d.kind = Domain::Kind::Ellipsoid;
    d.dim = axes.dim();
    d.semi_axes = axes;
    return d;
}

DomainRecord disk_record(double radius) {
    DomainRecord d;
    d.kind = Domain::Kind::Ball;
    d.dim = 2;
    d.center = Vec{0.0, 0.0};
    d.radius = radius;
    return d;
}

// Axis-aligned box as an intersection of half-spaces.
DomainRecord box_record(const Vec& half_widths) {
    DomainRecord d;
    d.kind = Domain::Kind::ConvexPolytope;
    d.dim = half_widths.dim();
    for (std::size_t i = 0; i < d.dim; ++i) {
        d.faces.push_back({Vec::unit(d.dim, i), -half_widths[i]});
        d.faces.push_back({-Vec::unit(d.dim, i), -half_widths[i]});
    }
    return d;
}

MapSpec polynomial_spec(std::string name, std::size_t n, const std::vector<Terms>& comps) {
    MapSpec s;
    s.name = std::move(name);
    s.dim = n;
    s.representation = Representation::Polynomial;
    for (const auto& t : comps) s.components.emplace_back(n, t);
    return s;
}

MapSpec gradient_spec(std::string name, const Terms& potential) {
    MapSpec s;
    s.name = std::move(name);
    s.dim = 3;
    s.representation = Representation::GradientPotential;
    s.potential = Polynomial(3, potential);
    return s;
}

std::vector<Fixture> make_registry() {
    std::vector<Fixture> out;

    {
        Fixture f;
        f.spec = polynomial_spec("identity2", 2, {{{{1, 0, 0}, 1.0}}, {{{0, 1, 0}, 1.0}}});
        f.spec.declared_k = 1.0;
        f.spec.target = unit_ball_record(2);
        f.spec.exact_image = true;
        f.description = "identity of the unit disk";
        f.constant_derivative = true;
        out.push_back(f);
    }
    {
        Fixture f;
        f.spec = polynomial_spec("identity3", 3,
                                 {{{{1, 0, 0}, 1.0}}, {{{0, 1, 0}, 1.0}}, {{{0, 0, 1}, 1.0}}});
        f.spec.declared_k = 1.0;
        f.spec.target = unit_ball_record(3);
        f.spec.exact_image = true;
        f.description = "identity of the unit ball";
        f.constant_derivative = true;
        out.push_back(f);
    }
    {
        Fixture f;
        f.spec = polynomial_spec("shear_c05", 2, {{{{1, 0, 0}, 1.5}}, {{{0, 1, 0}, 0.5}}});
        f.spec.declared_k = 3.0;
        f.spec.target = ellipsoid_record(Vec{1.5, 0.5});
        f.spec.exact_image = true;
        f.description = "shear z + 0.5 conj(z) = (1.5 x, 0.5 y)";
        f.constant_derivative = true;
        out.push_back(f);
    }
    {
        Fixture f;
        f.spec = polynomial_spec("linear_diag3", 3,
                                 {{{{1, 0, 0}, 2.0}}, {{{0, 1, 0}, -1.0}}, {{{0, 0, 1}, -1.0}}});
        f.spec.declared_k = 4.0;
        f.spec.target = ellipsoid_record(Vec{2.0, 1.0, 1.0});
        f.spec.exact_image = true;
        f.description = "linear map diag(2, -1, -1)";
        f.constant_derivative = true;
        out.push_back(f);
    }
    {
        Fixture f;
        f.spec = gradient_spec("gradient_quadratic3", {{{2, 0, 0}, 1.0}, {{0, 2, 0}, -0.5}, {{0, 0, 2}, -0.5}});
        f.spec.declared_k = 4.0;
        f.spec.target = ellipsoid_record(Vec{2.0, 1.0, 1.0});
        f.spec.exact_image = true;
        f.description = "gradient of u = x^2 - y^2/2 - z^2/2";
        f.constant_derivative = true;
        out.push_back(f);
    }
    {
        Fixture f;
        f.spec = gradient_spec("cubic_gradient3",
                               {{{2, 0, 0}, 1.0}, {{0, 2, 0}, -0.5}, {{0, 0, 2}, -0.5}, {{1, 1, 1}, 0.2}});
        f.spec.target = box_record(Vec{2.2, 1.2, 1.2});
        f.spec.exact_image = false;
        f.description = "gradient of u = x^2 - y^2/2 - z^2/2 + 0.2 xyz";
        out.push_back(f);
    }
    {
        Fixture f;
        MapSpec& s = f.spec;
        s.name = "poisson_disk2";
        s.dim = 2;
        s.representation = Representation::SphereSamples;
        s.evaluation = PoissonField::Mode::ExactLift;
        constexpr std::size_t kSamples = 128;
        BoundaryComponent c, d;
        for (std::size_t j = 0; j < kSamples; ++j) {
            const double t = poisson_disk_angle(2.0 * std::numbers::pi * static_cast<double>(j) / kSamples);
            c.samples.push_back(std::cos(t));
            d.samples.push_back(std::sin(t));
        }
        s.boundary = {c, d};
        s.target = unit_ball_record(2);
        s.exact_image = true;
        f.description = "harmonic extension of the circle map theta -> theta + 0.3 sin theta";
        out.push_back(f);
    }
    {
        Fixture f;
        // z + 0.2 conj(z)^3
        f.spec = polynomial_spec("cubic2", 2,
                                 {{{{1, 0, 0}, 1.0}, {{3, 0, 0}, 0.2}, {{1, 2, 0}, -0.6}},
                                  {{{0, 1, 0}, 1.0}, {{0, 3, 0}, 0.2}, {{2, 1, 0}, -0.6}}});
        f.spec.target = disk_record(1.2);
        f.spec.exact_image = false;
        f.description = "harmonic map z + 0.2 conj(z)^3";
        out.push_back(f);
    }
    {
        Fixture f;
        f.spec = gradient_spec("xyz_gradient3", {{{1, 1, 1}, 1.0}});
        f.description = "gradient of u = xyz; det of the Hessian changes sign";
        f.expect_degenerate = true;
        out.push_back(f);
    }
    {
        Fixture f;
        // 2z - z^2 onto a cardioid with a cusp at 1.
        f.spec = polynomial_spec("cardioid2", 2,
                                 {{{{1, 0, 0}, 2.0}, {{2, 0, 0}, -1.0}, {{0, 2, 0}, 1.0}},
                                  {{{0, 1, 0}, 2.0}, {{1, 1, 0}, -2.0}}});
        f.spec.declared_k = 1.0;
        f.description = "conformal map 2z - z^2 onto a cardioid";
        out.push_back(f);
    }
    return out;
}

}  // namespace

double poisson_disk_angle(double theta) { return theta + 0.3 * std::sin(theta); }

const std::vector<Fixture>& fixture_registry() {
    static const std::vector<Fixture> registry = make_registry();
    return registry;
}

const Fixture* find_fixture(const std::string& name) {
    for (const auto& f : fixture_registry())
        if (f.spec.name == name) return &f;
    return nullptr;
}

}  // namespace hqc
