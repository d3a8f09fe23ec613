#pragma once

#include <functional>
#include <vector>

#include "hqc/geometry.hpp"
#include "hqc/harmonic.hpp"

namespace hqc {

/// Rule for means over a ball B(z, R). Monte Carlo uses `nodes` uniform
/// points of the unit ball (shared by every z, then scaled); the product rule
/// uses `nodes` Gauss-Legendre radii times a sphere rule of the same order.
struct BallQuadrature {
    enum class Mode { MonteCarlo, ProductRule };
    Mode mode = Mode::MonteCarlo;
    std::size_t nodes = 32768;
    std::uint64_t seed = 1;

    static BallQuadrature monte_carlo(std::size_t nodes, std::uint64_t seed = 1) {
        return {Mode::MonteCarlo, nodes, seed};
    }
    static BallQuadrature product_rule(std::size_t order) { return {Mode::ProductRule, order, 0}; }
};

/// Jacobians at or below this value abort the averaging operations.
inline constexpr double kDegenerateJacobian = 1e-14;

struct AlphaResult {
    double alpha = 0.0;
    /// Mean of log J over B_z.
    double log_mean = 0.0;
    /// Error estimate of log_mean, i.e. the relative error of alpha^n.
    double error = 0.0;
    double radius = 0.0;
    std::size_t nodes = 0;
};

/// alpha_f(z) = exp((1/n) mean_{B_z} log J_f) with B_z = B(z, d(z, dD)).
AlphaResult alpha(const HarmonicMap& f, const Vec& z, const Domain& domain, const BallQuadrature& quad);

struct KoebeResult {
    double ratio = 0.0;
    AlphaResult alpha;
    double d_source = 0.0;
    double d_target = 0.0;
};

/// alpha_f(z) d(z, dD) / d(f(z), dD').
KoebeResult koebe_ratio(const HarmonicMap& f, const Vec& z, const Domain& source, const Domain& target,
                        const BallQuadrature& quad);

using ScalarField = std::function<double(const Vec&)>;

/// log J_f; DegeneracyError where J_f <= kDegenerateJacobian.
ScalarField log_jacobian(const HarmonicMap& f);
/// log det H_u of a gradient map's potential; DegeneracyError where det <= kDegenerateJacobian.
ScalarField log_det_hessian(const GradientMap& g);

struct SphereSlack {
    double radius = 0.0;
    double slack = 0.0;  // scalar(z) - spherical mean
    double error = 0.0;  // quadrature error estimate of the mean
};

struct SuperharmonicReport {
    std::vector<SphereSlack> spheres;
    double min_slack = 0.0;
    /// Largest error estimate over the radii.
    double error = 0.0;
    /// min over radii of slack + 3 error (>= 0 is the pass condition).
    double margin = 0.0;
    bool passed = false;
};

/// Default order of the sphere rule (n = 3: 64 x 128 nodes; n = 2: 128 nodes).
inline constexpr std::size_t kSphereOrder = 64;

/// Mean-value test of superharmonicity on spheres S(z, r) inside `domain`.
/// The error estimate of each mean is the change under halving the order
/// plus a rounding allowance.
SuperharmonicReport superharmonicity_check(const ScalarField& scalar, const Vec& z,
                                           const std::vector<double>& radii, const Domain& domain,
                                           std::size_t sphere_order = kSphereOrder);

struct Chain2dReport {
    double sigma_max2 = 0.0;
    double jacobian = 0.0;
    double alpha2 = 0.0;
    double alpha_error = 0.0;
    /// sigma_max^2 - J (exact link).
    double first_slack = 0.0;
    /// J - alpha^2 (1 - 3 err).
    double second_slack = 0.0;
    /// alpha / (H d(f(0), dT)): the constant in the last link of the chain.
    double c_empirical = 0.0;
    bool passed = false;
};

Chain2dReport chain_check_2d(const HarmonicMap& f, const Vec& z, const Domain& domain, const Domain& target,
                             const BallQuadrature& quad);

struct Chain3dReport {
    double alpha3 = 0.0;
    double alpha_error = 0.0;
    double jacobian = 0.0;
    double sigma_min3 = 0.0;
    double sup_k_outer = 0.0;
    /// J (1 + 3 err) - alpha^3.
    double first_slack = 0.0;
    /// K^2 sigma_min^3 - J.
    double second_slack = 0.0;
    double koebe = 0.0;
    bool passed = false;
};

/// alpha^3 <= J_f(z) and J_f(z) <= K^2 sigma_min(z)^3 with K the scan
/// supremum of the outer distortion.
Chain3dReport chain_check_3d_gradient(const GradientMap& g, const Vec& z, const Domain& domain,
                                      const Domain& target, const BallQuadrature& quad, double sup_k_outer);

struct AInfinityResult {
    double ratio = 0.0;
    double error = 0.0;
};

/// alpha_f(z)^n / (mean_{B_z} J_f^p)^{1/p}, p in (0, 1].
AInfinityResult a_infinity_ratio(const HarmonicMap& f, const Vec& z, double p, const Domain& domain,
                                 const BallQuadrature& quad);

}  // namespace hqc
