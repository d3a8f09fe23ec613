#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hqc/averaging.hpp"
#include "hqc/fixtures.hpp"
#include "hqc/mapspec.hpp"
#include "hqc/potential.hpp"
#include "hqc/report.hpp"
#include "hqc/sampling.hpp"

namespace hqc {

/// Result of one command: the report plus optional per-point artifacts.
struct Output {
    Report report;
    std::optional<CsvTable> csv;
    std::optional<std::string> svg;
};

struct AnalyzeOptions {
    SamplingPlan plan{Strategy::UniformBall, 1024, 1, 0.999};
    std::size_t pairs = 2000;
};

/// Distortion, delta, Bloch and Lipschitz scans of one map.
Output analyze(const MapSpec& spec, const AnalyzeOptions& opts = {});

struct AlphaFieldOptions {
    std::size_t grid = 24;
    double max_radius = 0.95;
    BallQuadrature quad = BallQuadrature::monte_carlo(4096);
};

/// alpha_f over a grid of the plane x_3 = 0 intersected with B(0, max_radius).
Output alpha_field(const MapSpec& spec, const AlphaFieldOptions& opts = {});

enum class Quantity { LogJacobian, LogDetHessian };

struct SuperharmonicOptions {
    Quantity quantity = Quantity::LogJacobian;
    SamplingPlan centers{Strategy::UniformBall, 64, 1, 0.9};
    std::vector<double> radius_fractions{0.25, 0.5, 0.75};
    std::size_t sphere_order = kSphereOrder;
};

Output superharmonic(const MapSpec& spec, const SuperharmonicOptions& opts = {});

/// Named domains for qh-dist: ball2, ball3, halfspace2, halfspace3.
std::optional<DomainRecord> named_domain(const std::string& name);

struct QhDistOptions {
    double h = 0.02;
};

/// Graph distance at h and h/2 plus the difference between them.
Output qh_dist(const DomainRecord& domain, const Vec& x, const Vec& y, const QhDistOptions& opts = {});

struct QhBilipOptions {
    std::size_t pairs = 32;
    std::uint64_t seed = 1;
    /// Grid step; 0 selects 0.02 in the plane and 0.08 in space.
    double h = 0.0;
};

Output qh_bilip(const MapSpec& spec, const QhBilipOptions& opts = {});

/// Iterates the exponent recurrence in floating point and in exact rationals.
/// `p0` is parsed as an exact decimal.
Output bootstrap(int n, const std::string& p0);

struct GreenVerifyOptions {
    std::size_t fd_pairs = 100;
    std::size_t bound_pairs = 1000;
    std::size_t reflection_pairs = 1000000;
    std::uint64_t seed = 1;
};

/// Calibration of the Green kernel, its gradient and the ball potentials.
Output green_verify(const GreenVerifyOptions& opts = {});

struct SuiteOptions {
    std::size_t points = 256;
    std::uint64_t seed = 1;
};

/// Every asserted property of a fixture, as one report.
Report fixture_suite(const Fixture& fixture, const SuiteOptions& opts = {});

/// Exact rational value of a decimal literal such as "3.3" or "-1.25e2".
Rational parse_decimal(const std::string& text);

}  // namespace hqc
