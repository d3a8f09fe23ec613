#pragma once

#include <functional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hqc/vec.hpp"

namespace hqc {

/// Normalisation of the ball kernels: 1 / |S^{n-1}| = Gamma(n/2) / (2 pi^{n/2}).
double green_constant(std::size_t n);

/// Fundamental solution with Laplacian = Dirac mass:
/// -|x|^{2-n} / ((n-2)|S^{n-1}|) for n >= 3, log|x| / (2 pi) for n = 2.
double fundamental_solution(std::size_t n, double r);

/// Green's function of the unit ball, G <= 0, G(., y) = 0 on the sphere and
/// Laplacian_x G(., y) = Dirac mass at y. Symmetric in (x, y).
double green(const Vec& x, const Vec& y);

/// Gradient in x: c1 [ (x-y)/|x-y|^n + |y|^n (y - |y|^2 x)/|y - |y|^2 x|^n ].
Vec green_gradient(const Vec& x, const Vec& y);

/// Quadrature control for the polar-coordinate ball integrals. Radial
/// Gauss-Legendre and sphere orders start at `order` and double until two
/// consecutive estimates agree to `tolerance` (relative to max(1, |value|)).
struct PotentialQuadrature {
    std::size_t order = 16;
    std::size_t max_order = 128;
    double tolerance = 1e-10;
    /// Largest acceptable error estimate at max_order before AccuracyError.
    double accept = 1e-6;
};

struct PotentialValue {
    double value = 0.0;
    double error = 0.0;
    std::size_t order = 0;
};

using Density = std::function<double(const Vec&)>;

/// w(x) = int_{B^n} G(x, y) h(y) dy, integrated in polar coordinates centred at x
/// (the rho^{n-1} Jacobian absorbs the kernel singularity).
PotentialValue green_potential(const Density& h, const Vec& x, const PotentialQuadrature& quad = {});

/// grad w(x) = int_{B^n} grad_x G(x, y) h(y) dy.
struct PotentialGradient {
    Vec value;
    double error = 0.0;
};
PotentialGradient green_potential_gradient(const Density& h, const Vec& x, const PotentialQuadrature& quad = {});

/// I_s h(x) = int_{B^n} h(y) |x - y|^{s-n} dy, 0 < s < n. The radial
/// substitution rho = R t^{1/s} makes the integrand regular.
PotentialValue riesz_potential(double s, const Density& h, const Vec& x, const PotentialQuadrature& quad = {});

struct BootstrapTrace {
    int n = 0;
    double p0 = 0.0;
    /// Starting exponent actually used (p0 or the perturbed restart value).
    double start = 0.0;
    double epsilon = 0.0;  // start / n - 1
    std::vector<double> sequence;
    bool terminated = false;
    bool restarted = false;
};

/// Iterates p -> p n / (2n - p) from p0 in (n, 2n) until p > 2n. An iterate
/// within 1e-9 of 2n restarts the whole trace from p0 (1 - 1e-6).
BootstrapTrace sobolev_bootstrap(int n, double p0);

using Rational = boost::multiprecision::cpp_rational;

struct ExactBootstrapTrace {
    int n = 0;
    Rational start;
    std::vector<Rational> sequence;
    bool terminated = false;
    bool restarted = false;
};

/// The same recurrence in exact rational arithmetic. An iterate equal to 2n
/// restarts from p0 (1 - 10^-6).
ExactBootstrapTrace sobolev_bootstrap_exact(int n, const Rational& p0);

std::string to_string(const Rational& q);

struct WSample {
    double w = 0.0;
    double grad_norm = 0.0;
    double laplacian = 0.0;
};

struct CoefficientEstimate {
    double a_hat = 0.0;
    double b_hat = 0.0;
    std::size_t a_index = 0;  // attaining sample for a_hat
    std::size_t b_index = 0;  // attaining sample for b_hat
};

/// Feasible (a, b) in |Laplacian w| <= a |grad w|^2 + b: b is the largest
/// |Laplacian w| over samples with |grad w| < 1, a the smallest value that
/// then covers every sample.
CoefficientEstimate coefficient_estimate(const std::vector<WSample>& samples);

}  // namespace hqc
