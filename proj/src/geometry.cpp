#include "hqc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hqc/errors.hpp"

namespace hqc {

namespace {

// Relative slack that still counts a point as lying on the boundary.
constexpr double kBoundaryTol = 1e-12;

double robust_length(double a, double b, double c = 0.0) {
    double m = std::max({std::abs(a), std::abs(b), std::abs(c)});
    if (m == 0.0) return 0.0;
    a /= m;
    b /= m;
    c /= m;
    return m * std::sqrt(a * a + b * b + c * c);
}

// Bisection on the scaled Lagrange multiplier s (t = s * e_min^2). The
// bracket shrinks until the midpoint coincides with an endpoint, i.e. the
// root is resolved to the last bit.
double root_2(double r0, double z0, double z1, double g) {
    const double n0 = r0 * z0;
    double s0 = z1 - 1.0;
    double s1 = g < 0.0 ? 0.0 : robust_length(n0, z1) - 1.0;
    double s = 0.0;
    for (int i = 0; i < 2200; ++i) {
        s = 0.5 * (s0 + s1);
        if (s == s0 || s == s1) break;
        const double q0 = n0 / (s + r0);
        const double q1 = z1 / (s + 1.0);
        g = q0 * q0 + q1 * q1 - 1.0;
        if (g > 0.0)
            s0 = s;
        else if (g < 0.0)
            s1 = s;
        else
            break;
    }
    return s;
}

double root_3(double r0, double r1, double z0, double z1, double z2, double g) {
    const double n0 = r0 * z0;
    const double n1 = r1 * z1;
    double s0 = z2 - 1.0;
    double s1 = g < 0.0 ? 0.0 : robust_length(n0, n1, z2) - 1.0;
    double s = 0.0;
    for (int i = 0; i < 2200; ++i) {
        s = 0.5 * (s0 + s1);
        if (s == s0 || s == s1) break;
        const double q0 = n0 / (s + r0);
        const double q1 = n1 / (s + r1);
        const double q2 = z2 / (s + 1.0);
        g = q0 * q0 + q1 * q1 + q2 * q2 - 1.0;
        if (g > 0.0)
            s0 = s;
        else if (g < 0.0)
            s1 = s;
        else
            break;
    }
    return s;
}

// e0 >= e1 > 0, y0, y1 >= 0.
double ellipse_distance_sorted(double e0, double e1, double y0, double y1) {
    if (y1 > 0.0) {
        if (y0 > 0.0) {
            const double z0 = y0 / e0;
            const double z1 = y1 / e1;
            const double g = z0 * z0 + z1 * z1 - 1.0;
            if (g == 0.0) return 0.0;
            const double r0 = (e0 / e1) * (e0 / e1);
            const double s = root_2(r0, z0, z1, g);
            const double x0 = r0 * y0 / (s + r0);
            const double x1 = y1 / (s + 1.0);
            return robust_length(x0 - y0, x1 - y1);
        }
        return std::abs(y1 - e1);
    }
    const double numer0 = e0 * y0;
    const double denom0 = e0 * e0 - e1 * e1;
    if (numer0 < denom0) {
        const double xde0 = numer0 / denom0;
        const double x0 = e0 * xde0;
        const double x1 = e1 * std::sqrt(std::max(0.0, 1.0 - xde0 * xde0));
        return robust_length(x0 - y0, x1);
    }
    return std::abs(y0 - e0);
}

// e0 >= e1 >= e2 > 0, y >= 0 componentwise.
double ellipsoid_distance_sorted(double e0, double e1, double e2, double y0, double y1, double y2) {
    if (y2 > 0.0) {
        if (y1 > 0.0) {
            if (y0 > 0.0) {
                const double z0 = y0 / e0, z1 = y1 / e1, z2 = y2 / e2;
                const double g = z0 * z0 + z1 * z1 + z2 * z2 - 1.0;
                if (g == 0.0) return 0.0;
                const double r0 = (e0 / e2) * (e0 / e2);
                const double r1 = (e1 / e2) * (e1 / e2);
                const double s = root_3(r0, r1, z0, z1, z2, g);
                const double x0 = r0 * y0 / (s + r0);
                const double x1 = r1 * y1 / (s + r1);
                const double x2 = y2 / (s + 1.0);
                return robust_length(x0 - y0, x1 - y1, x2 - y2);
            }
            return ellipse_distance_sorted(e1, e2, y1, y2);
        }
        if (y0 > 0.0) return ellipse_distance_sorted(e0, e2, y0, y2);
        return std::abs(y2 - e2);
    }
    const double denom0 = e0 * e0 - e2 * e2;
    const double denom1 = e1 * e1 - e2 * e2;
    const double numer0 = e0 * y0;
    const double numer1 = e1 * y1;
    if (numer0 < denom0 && numer1 < denom1) {
        const double xde0 = numer0 / denom0;
        const double xde1 = numer1 / denom1;
        const double discr = 1.0 - xde0 * xde0 - xde1 * xde1;
        if (discr > 0.0) {
            const double x0 = e0 * xde0;
            const double x1 = e1 * xde1;
            const double x2 = e2 * std::sqrt(discr);
            return robust_length(x0 - y0, x1 - y1, x2);
        }
    }
    return ellipse_distance_sorted(e0, e1, y0, y1);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

double ellipsoid_distance(const Vec& semi_axes, const Vec& x) {
    const std::size_t n = semi_axes.dim();
    if (x.dim() != n) throw_dimension_mismatch(n, x.dim());
    if (n != 2 && n != 3) throw DimensionError("ellipsoid distance supports n = 2 or 3");
    std::array<std::size_t, 3> order{0, 1, 2};
    std::sort(order.begin(), order.begin() + n,
              [&](std::size_t a, std::size_t b) { return semi_axes[a] > semi_axes[b]; });
    if (n == 2) {
        return ellipse_distance_sorted(semi_axes[order[0]], semi_axes[order[1]], std::abs(x[order[0]]),
                                       std::abs(x[order[1]]));
    }
    return ellipsoid_distance_sorted(semi_axes[order[0]], semi_axes[order[1]], semi_axes[order[2]],
                                     std::abs(x[order[0]]), std::abs(x[order[1]]),
                                     std::abs(x[order[2]]));
}

Domain Domain::unit_ball(std::size_t n) {
    Domain d(Kind::UnitBall, n);
    d.center_ = Vec(n);
    d.radius_ = 1.0;
    return d;
}

Domain Domain::ball(const Vec& center, double radius) {
    if (!(radius > 0.0)) throw PreconditionError("ball radius must be positive");
    Domain d(Kind::Ball, center.dim());
    d.center_ = center;
    d.radius_ = radius;
    return d;
}

Domain Domain::half_space(const Vec& normal, double offset) {
    const double len = normal.norm();
    if (!(len > 0.0)) throw PreconditionError("half-space normal must be nonzero");
    Domain d(Kind::HalfSpace, normal.dim());
    d.faces_.push_back({normal / len, offset / len});
    return d;
}

Domain Domain::polytope(const std::vector<HalfSpace>& faces) {
    if (faces.empty()) throw PreconditionError("polytope needs at least one face");
    const std::size_t n = faces.front().normal.dim();
    Domain d(Kind::ConvexPolytope, n);
    for (const auto& f : faces) {
        if (f.normal.dim() != n) throw_dimension_mismatch(n, f.normal.dim());
        const double len = f.normal.norm();
        if (!(len > 0.0)) throw PreconditionError("polytope face normal must be nonzero");
        d.faces_.push_back({f.normal / len, f.offset / len});
    }
    return d;
}

Domain Domain::ellipsoid(const Vec& semi_axes) {
    if (semi_axes.dim() != 2 && semi_axes.dim() != 3)
        throw DimensionError("ellipsoid supports n = 2 or 3");
    for (double a : semi_axes)
        if (!(a > 0.0)) throw PreconditionError("ellipsoid semi-axes must be positive");
    Domain d(Kind::Ellipsoid, semi_axes.dim());
    d.axes_ = semi_axes;
    d.center_ = Vec(semi_axes.dim());
    return d;
}

void Domain::check_dim(const Vec& x) const {
    if (x.dim() != n_) throw_dimension_mismatch(n_, x.dim());
}

bool Domain::contains(const Vec& x) const {
    check_dim(x);
    switch (kind_) {
    case Kind::UnitBall:
    case Kind::Ball: return distance(x, center_) < radius_;
    case Kind::HalfSpace:
    case Kind::ConvexPolytope:
        return std::all_of(faces_.begin(), faces_.end(),
                           [&](const HalfSpace& f) { return f.normal.dot(x) > f.offset; });
    case Kind::Ellipsoid: {
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) s += (x[i] / axes_[i]) * (x[i] / axes_[i]);
        return s < 1.0;
    }
    }
    return false;
}

double Domain::boundary_distance(const Vec& x) const {
    check_dim(x);
    switch (kind_) {
    case Kind::UnitBall:
    case Kind::Ball: {
        const double d = radius_ - distance(x, center_);
        if (d < -kBoundaryTol * radius_)
            throw OutsideDomainError("|x - c| < " + fmt(radius_), x);
        return std::max(0.0, d);
    }
    case Kind::HalfSpace:
    case Kind::ConvexPolytope: {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < faces_.size(); ++k) {
            const auto& f = faces_[k];
            const double d = f.normal.dot(x) - f.offset;
            const double scale = 1.0 + std::abs(f.offset) + x.norm();
            if (d < -kBoundaryTol * scale)
                throw OutsideDomainError("face " + std::to_string(k) + ": n . x > " + fmt(f.offset), x);
            best = std::min(best, d);
        }
        return std::max(0.0, best);
    }
    case Kind::Ellipsoid: {
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) s += (x[i] / axes_[i]) * (x[i] / axes_[i]);
        if (s > 1.0 + kBoundaryTol) throw OutsideDomainError("sum (x_i / a_i)^2 < 1", x);
        if (s >= 1.0) return 0.0;
        return ellipsoid_distance(axes_, x);
    }
    }
    return 0.0;
}

std::optional<Box> Domain::bounding_box() const {
    Box b{Vec(n_), Vec(n_)};
    switch (kind_) {
    case Kind::UnitBall:
    case Kind::Ball:
        for (std::size_t i = 0; i < n_; ++i) {
            b.lo[i] = center_[i] - radius_;
            b.hi[i] = center_[i] + radius_;
        }
        return b;
    case Kind::Ellipsoid:
        for (std::size_t i = 0; i < n_; ++i) {
            b.lo[i] = -axes_[i];
            b.hi[i] = axes_[i];
        }
        return b;
    default: return std::nullopt;
    }
}

std::string Domain::describe() const {
    switch (kind_) {
    case Kind::UnitBall: return "unit-ball(n=" + std::to_string(n_) + ")";
    case Kind::Ball: return "ball(c=" + to_string(center_) + ", r=" + fmt(radius_) + ")";
    case Kind::HalfSpace:
        return "half-space(n=" + to_string(faces_[0].normal) + ", b=" + fmt(faces_[0].offset) + ")";
    case Kind::ConvexPolytope: return "polytope(" + std::to_string(faces_.size()) + " faces)";
    case Kind::Ellipsoid: return "ellipsoid(a=" + to_string(axes_) + ")";
    }
    return "?";
}

double hyperbolic_distance(const Vec& x, const Vec& y) {
    const double x2 = x.norm2();
    const double y2 = y.norm2();
    if (!(x2 < 1.0)) throw DomainError("hyperbolic distance: point not inside the unit ball", x);
    if (!(y2 < 1.0)) throw DomainError("hyperbolic distance: point not inside the unit ball", y);
    const double d = distance(x, y);
    return 2.0 * std::asinh(d / std::sqrt((1.0 - x2) * (1.0 - y2)));
}

MobiusTransform::MobiusTransform(const Vec& a) : a_(a), a2_(a.norm2()) {
    if (!(a2_ < 1.0)) throw DomainError("Mobius pole must satisfy |a| < 1", a);
}

Vec MobiusTransform::operator()(const Vec& x) const {
    const Vec d = x - a_;
    const double denom = 1.0 - 2.0 * x.dot(a_) + x.norm2() * a2_;
    return ((1.0 - a2_) * d - d.norm2() * a_) / denom;
}

MobiusTransform mobius_to_origin(const Vec& a) { return MobiusTransform(a); }

}  // namespace hqc
