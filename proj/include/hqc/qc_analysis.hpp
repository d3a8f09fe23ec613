#pragma once

#include <limits>
#include <vector>

#include "hqc/geometry.hpp"
#include "hqc/harmonic.hpp"
#include "hqc/sampling.hpp"

namespace hqc {

struct DistortionRecord {
    Vec point;
    double k_outer = 1.0;  // sigma_max^n / J
    double k_inner = 1.0;  // J / sigma_min^n
    double linear_dilatation = 1.0;  // sigma_max / sigma_min
    double jacobian = 0.0;
};

/// Distortion quantities from a jet. Throws DegeneracyError if J <= 0.
DistortionRecord distortion_at(const Jet& j);

struct DistortionScan {
    std::vector<DistortionRecord> records;
    double sup_k_outer = 0.0;
    double sup_k_inner = 0.0;
    double sup_linear_dilatation = 0.0;
    double sup_jacobian = 0.0;
    double inf_jacobian = 0.0;
};

DistortionScan distortion_scan(const HarmonicMap& f, const SamplingPlan& plan);

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Monte Carlo estimate of (int_{B^n} sigma_max(Df)^p dm)^{1/p}. The plan's
/// samples must be volume-uniform (uniform-ball or radial-stratified); the
/// mean over B(0, max_radius) stands in for the mean over B^n.
Estimate lp_norm_Df(const HarmonicMap& f, double p, const SamplingPlan& plan);

struct PointValue {
    double value = 0.0;
    Vec point;
};

/// inf over the plan of 1 - |x| + |f(x)|. RangeError if some |f(x)| >= 1.
PointValue delta_bound(const HarmonicMap& f, const SamplingPlan& plan);

/// Radius at which the sup norm of f is sampled (boundary approach).
inline constexpr double kSupNormRadius = 1.0 - 1e-4;

/// Estimate of sup |f| over the ball: polynomial components are sampled at
/// radius kSupNormRadius, Poisson components at their boundary data.
double sup_norm_estimate(const HarmonicMap& f);

struct BlochResult {
    double ratio = 0.0;
    double sup_norm = 0.0;
    Vec point;
};

/// sup over the plan of (1 - |x|) sigma_max(x) / ||f||_inf.
BlochResult bloch_ratio(const HarmonicMap& f, const SamplingPlan& plan);

struct HarnackReport {
    double min_slack = 0.0;
    Vec worst_point;
    double d_f0 = 0.0;
    std::size_t samples = 0;
    bool passed = false;
};

inline constexpr double kHarnackTolerance = 1e-10;

/// Checks d(f(z), dT) >= (1 - |z|) / (1 + |z|)^{n-1} d(f(0), dT) on the plan.
HarnackReport harnack_chain_check(const HarmonicMap& f, const Domain& target, const SamplingPlan& plan);

struct WFieldPoint {
    Vec point;
    double w = 0.0;
    double grad_norm = 0.0;
    double laplacian = 0.0;          // -2 ||Df||_HS^2
    double laplacian_direct = 0.0;   // Laplacian of 1 - |f|^2 by an independent route
    double f_norm = 0.0;
    double sigma_max = 0.0;
    double sigma_min = 0.0;
};

struct WFieldReport {
    std::vector<WFieldPoint> points;
    /// max |laplacian - laplacian_direct| / |laplacian|.
    double identity_residual = 0.0;
    /// Tolerance the identity residual is held to for this representation.
    double identity_tolerance = 0.0;
    /// min over samples of (2|f| sigma_max - |grad w|) / (2|f| sigma_max).
    double upper_slack = 0.0;
    /// min over samples of |grad w| - 2|f| sigma_max / H, relative to the scale.
    double lower_slack = 0.0;
    /// min over samples of |grad w| / (2 |f| sigma_max): the empirical constant replacing 1/H.
    double best_lower_constant = 1.0;
    double delta = 0.0;
    double a_hat = 0.0;
    double b_hat = 0.0;
    bool identity_ok = false;
    bool upper_ok = false;
    bool lower_ok = false;
};

/// Relative evaluation-rounding allowance of the upper gradient bound.
inline constexpr double kWUpperRounding = 8.0 * std::numeric_limits<double>::epsilon();

/// Differential inequality for w = 1 - |f|^2: the exact Laplacian identity,
/// the two-sided gradient bound with H = linear dilatation, and the fitted
/// (a, b) with b fixed by the Bloch term 4 n^2 delta^-2 (1-|x|)^2 sigma_max^2.
WFieldReport w_field_inequality(const HarmonicMap& f, const SamplingPlan& plan);

}  // namespace hqc
