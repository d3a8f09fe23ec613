#pragma once

#include <vector>

#include "hqc/harmonic.hpp"
#include "hqc/sampling.hpp"

namespace hqc {

/// A pair realising an extreme ratio. `infinitesimal` marks the limit
/// y -> x along the extreme singular direction, where the ratio equals a
/// singular value of Df(x).
struct AttainingPair {
    Vec x;
    Vec y;
    double ratio = 0.0;
    bool infinitesimal = false;
};

struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::size_t> counts;
};

/// L_hat is a lower bound for the Lipschitz constant, inv_hat an upper bound
/// for the co-Lipschitz constant; neither is a certified global extreme.
struct PairScanResult {
    std::size_t pair_count = 0;
    double l_hat = 0.0;
    double inv_hat = 0.0;
    AttainingPair l_pair;
    AttainingPair inv_pair;
    Histogram histogram;  // of the finite-pair ratios
};

/// Fraction (out of 10) of pairs drawn in the near-boundary regime.
inline constexpr std::size_t kNearBoundaryPairsPerTen = 3;
inline constexpr double kNearBoundaryPairRadius = 0.95;
inline constexpr double kNearBoundaryPairSeparation = 0.05;

/// Pair i of a scan (independent of the others, so prefixes are nested).
std::pair<Vec, Vec> lipschitz_pair(const SamplingPlan& plan, std::size_t n, std::size_t i);

/// Ratios |f(x) - f(y)| / |x - y| over plan.count pairs plus, at each first
/// endpoint, the infinitesimal ratios sigma_max and sigma_min of Df.
PairScanResult lipschitz_scan(const HarmonicMap& f, const SamplingPlan& plan, std::size_t histogram_bins = 20);

struct GradientCertificate {
    bool passed = false;
    double inf_jacobian = 0.0;
    Vec inf_point;
    /// Lowest-index sample with det H_u <= 0, when the certificate fails.
    std::optional<Vec> failure_point;
    std::size_t samples = 0;
};

/// det H_u > 0 at every sample of the plan (n = 3).
GradientCertificate gradient_map_certificate(const GradientMap& g, const SamplingPlan& plan);

}  // namespace hqc
