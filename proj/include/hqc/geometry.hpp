#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hqc/vec.hpp"

namespace hqc {

/// Open half-space {x : normal . x > offset} with a unit normal.
struct HalfSpace {
    Vec normal;
    double offset = 0.0;
};

/// Axis-aligned box, used as the sampling window for unbounded domains.
struct Box {
    Vec lo;
    Vec hi;
};

/// Convex domain with an explicit dimension. Immutable after construction.
class Domain {
public:
    enum class Kind { UnitBall, Ball, HalfSpace, ConvexPolytope, Ellipsoid };

    static Domain unit_ball(std::size_t n);
    static Domain ball(const Vec& center, double radius);
    /// {x : normal . x > offset}; the normal is normalised (offset scaled along).
    static Domain half_space(const Vec& normal, double offset);
    /// Intersection of open half-spaces. Only interior points are meaningful.
    static Domain polytope(const std::vector<HalfSpace>& faces);
    /// Axis-aligned ellipsoid centred at the origin, n = 2 or 3.
    static Domain ellipsoid(const Vec& semi_axes);

    Kind kind() const { return kind_; }
    std::size_t dim() const { return n_; }
    /// Every supported kind is convex.
    bool convex() const { return true; }
    bool bounded() const { return kind_ != Kind::HalfSpace && kind_ != Kind::ConvexPolytope; }

    const Vec& center() const { return center_; }
    double radius() const { return radius_; }
    const Vec& semi_axes() const { return axes_; }
    const std::vector<HalfSpace>& faces() const { return faces_; }

    bool contains(const Vec& x) const;

    /// Euclidean distance from an interior point to the boundary.
    /// Points outside (beyond round-off) raise OutsideDomainError.
    double boundary_distance(const Vec& x) const;

    /// Bounding box of bounded kinds; nullopt for half-spaces and polytopes.
    std::optional<Box> bounding_box() const;

    std::string describe() const;

private:
    Domain(Kind k, std::size_t n) : kind_(k), n_(n) {}
    void check_dim(const Vec& x) const;

    Kind kind_;
    std::size_t n_;
    Vec center_;
    double radius_ = 1.0;
    Vec axes_;
    std::vector<HalfSpace> faces_;
};

/// Free-function form of Domain::boundary_distance.
inline double boundary_distance(const Domain& d, const Vec& x) { return d.boundary_distance(x); }

/// Distance from an interior point to the boundary of the ellipsoid
/// sum (x_i / a_i)^2 = 1, n = 2 or 3. Solves the Lagrange condition by
/// bisection on the multiplier to machine precision.
double ellipsoid_distance(const Vec& semi_axes, const Vec& x);

/// Poincare-ball distance (curvature -1). Both points must satisfy |x| < 1.
double hyperbolic_distance(const Vec& x, const Vec& y);

/// Mobius self-map of the unit ball, x -> ((1-|a|^2)(x-a) - |x-a|^2 a) / (1 - 2<x,a> + |x|^2|a|^2).
/// Sends a to 0 and preserves the unit sphere; its inverse is the map for -a.
class MobiusTransform {
public:
    explicit MobiusTransform(const Vec& a);

    const Vec& pole() const { return a_; }
    Vec operator()(const Vec& x) const;
    MobiusTransform inverse() const { return MobiusTransform(-a_); }

private:
    Vec a_;
    double a2_;
};

MobiusTransform mobius_to_origin(const Vec& a);

}  // namespace hqc
