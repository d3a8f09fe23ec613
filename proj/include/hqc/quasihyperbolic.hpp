#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "hqc/geometry.hpp"
#include "hqc/harmonic.hpp"
#include "hqc/sampling.hpp"

namespace hqc {

enum class Neighborhood { Radius1, Radius2 };

/// Lattice offsets in {-r..r}^n with coprime entries (one per direction).
std::vector<std::array<int, 3>> neighbor_offsets(std::size_t n, Neighborhood nb);

struct QHGraphStats {
    std::size_t nodes = 0;
    std::size_t edges = 0;  // undirected
    double h = 0.0;
    std::size_t directions = 0;
};

struct QHPath {
    double length = 0.0;
    /// Node positions from x to y (in the metric coordinates of the graph).
    std::vector<Vec> points;
};

/// Weighted lattice graph for the quasihyperbolic metric. Nodes sit at
/// integer multiples of h with boundary distance >= h; edges join lattice
/// offsets of the chosen neighborhood with weight
/// |a - b| (1/d(a) + 1/d(b)) / 2.
///
/// A pulled-back graph carries the metric of the image f(B^n) of a
/// homeomorphic map: nodes are the lattice of the unit ball, edge lengths
/// are |f(a) - f(b)| and distances are to f(S^{n-1}). Queries then take
/// preimage points.
class QHGraph {
public:
    /// Unbounded domains (half-spaces, polytopes) need a window box.
    static QHGraph build(const Domain& domain, double h, Neighborhood nb = Neighborhood::Radius2,
                         std::optional<Box> window = std::nullopt);
    static QHGraph pulled_back(const HarmonicMap& f, double h, Neighborhood nb = Neighborhood::Radius2);

    const Domain& domain() const;
    bool is_pullback() const;
    const QHGraphStats& stats() const;
    double h() const;

    /// Boundary distance in the graph's metric space at a query point
    /// (image distance to f(S^{n-1}) for pulled-back graphs).
    double query_distance_to_boundary(const Vec& x) const;

    /// Shortest-path quasihyperbolic distance between two query points.
    /// Points must have boundary distance >= h (DomainError otherwise);
    /// they are attached to every node within Chebyshev radius 2.
    /// Searches always start from the lexicographically smaller point, so
    /// distance(x, y) == distance(y, x) bit for bit.
    double distance(const Vec& x, const Vec& y) const;
    QHPath path(const Vec& x, const Vec& y) const;

private:
    struct Impl;
    explicit QHGraph(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// Distance from p to the image f(S^{n-1}) of the unit sphere: nearest of a
/// dense boundary sample, refined by Gauss-Newton on the sphere.
class ImageBoundary {
public:
    explicit ImageBoundary(const HarmonicMap& f, std::size_t order = 0);
    double distance(const Vec& p) const;

private:
    HarmonicMap f_;
    std::vector<Vec> zeta_;
    std::vector<Vec> image_;
};

inline double qh_distance(const QHGraph& g, const Vec& x, const Vec& y) { return g.distance(x, y); }

struct PairRatio {
    Vec x;
    Vec y;
    double k_source = 0.0;
    double k_target = 0.0;
    double ratio = 0.0;
};

struct BilipschitzStats {
    std::vector<PairRatio> pairs;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    double m_hat = 0.0;
    std::size_t rejected = 0;
};

/// Pairs are drawn from the plan in consecutive couples; couples closer than
/// 10 h (source or target step) or within h of either boundary are skipped.
/// `count` in the plan is the number of accepted pairs wanted.
std::vector<std::pair<Vec, Vec>> qh_pairs(const HarmonicMap& f, const QHGraph& source, const QHGraph& target,
                                          const SamplingPlan& plan, std::size_t* rejected = nullptr);

BilipschitzStats qh_bilipschitz_scan(const HarmonicMap& f, const QHGraph& source, const QHGraph& target,
                                     const SamplingPlan& pairs);

struct GehringOsgoodResult {
    double c_hat = 0.0;
    double exponent = 1.0;  // K^{1/(1-n)}
    std::size_t pairs = 0;
};

/// Smallest C with k'(f x, f y) <= C max(k, k^alpha) over the sampled pairs.
GehringOsgoodResult gehring_osgood_check(const HarmonicMap& f, const QHGraph& source, const QHGraph& target,
                                         const SamplingPlan& pairs, double k);

}  // namespace hqc
