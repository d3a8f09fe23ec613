#include "hqc/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hqc/errors.hpp"
#include "hqc/parallel.hpp"

namespace hqc {

std::pair<Vec, Vec> lipschitz_pair(const SamplingPlan& plan, std::size_t n, std::size_t i) {
    const CounterStream rng(plan.seed, stream_id::kPairs);
    const double R = plan.max_radius;
    const std::uint64_t base = static_cast<std::uint64_t>(i) * 64;
    if (i % 10 < kNearBoundaryPairsPerTen && R > kNearBoundaryPairRadius) {
        // Both endpoints in the shell kNearBoundaryPairRadius <= |x| <= R, close together.
        for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
            const std::uint64_t b = base + attempt * 0x100000ULL;
            const double r = kNearBoundaryPairRadius + (R - kNearBoundaryPairRadius) * rng.uniform(2 * b);
            const Vec x = rng.direction(n, b + 1) * r;
            const double sep = kNearBoundaryPairSeparation * rng.uniform(2 * (b + 20));
            const Vec y = x + rng.direction(n, b + 30) * sep;
            const double ry = y.norm();
            if (sep > 0.0 && ry >= kNearBoundaryPairRadius && ry <= R) return {x, y};
        }
    }
    for (std::uint64_t attempt = 0;; ++attempt) {
        const std::uint64_t b = base + attempt * 0x100000ULL;
        const Vec x = uniform_ball_point(rng, n, b) * R;
        const Vec y = uniform_ball_point(rng, n, b + 32) * R;
        if (!(x == y)) return {x, y};
    }
}

PairScanResult lipschitz_scan(const HarmonicMap& f, const SamplingPlan& plan, std::size_t histogram_bins) {
    if (plan.count < 1) throw PreconditionError("lipschitz_scan needs at least one pair");
    const std::size_t n = f.dim();
    struct Item {
        Vec x, y;
        double ratio;
        double smax, smin;
    };
    std::vector<Item> items(plan.count);
    parallel_for(plan.count, [&](std::size_t i) {
        auto [x, y] = lipschitz_pair(plan, n, i);
        const Jet j = f.jet(x);
        const Vec fy = f.evaluate(y);
        items[i] = {x, y, distance(j.value, fy) / distance(x, y), j.sigma_max(), j.sigma_min()};
    });

    PairScanResult r;
    r.pair_count = plan.count;
    r.l_hat = 0.0;
    r.inv_hat = std::numeric_limits<double>::infinity();
    double pmin = std::numeric_limits<double>::infinity(), pmax = 0.0;
    for (const auto& it : items) {
        if (it.ratio > r.l_hat) r.l_pair = {it.x, it.y, r.l_hat = it.ratio, false};
        if (it.ratio < r.inv_hat) r.inv_pair = {it.x, it.y, r.inv_hat = it.ratio, false};
        if (it.smax > r.l_hat) r.l_pair = {it.x, it.x, r.l_hat = it.smax, true};
        if (it.smin < r.inv_hat) r.inv_pair = {it.x, it.x, r.inv_hat = it.smin, true};
        pmin = std::min(pmin, it.ratio);
        pmax = std::max(pmax, it.ratio);
    }
    r.histogram.lo = pmin;
    r.histogram.hi = pmax;
    r.histogram.counts.assign(std::max<std::size_t>(1, histogram_bins), 0);
    const double width = (pmax - pmin) / static_cast<double>(r.histogram.counts.size());
    for (const auto& it : items) {
        std::size_t b = width > 0.0 ? static_cast<std::size_t>((it.ratio - pmin) / width) : 0;
        b = std::min(b, r.histogram.counts.size() - 1);
        ++r.histogram.counts[b];
    }
    return r;
}

GradientCertificate gradient_map_certificate(const GradientMap& g, const SamplingPlan& plan) {
    if (g.dim() != 3) throw DimensionError("gradient_map_certificate needs n = 3");
    const auto pts = plan_points(plan, 3);
    std::vector<double> det(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { det[i] = g.potential().hessian(pts[i]).det(); });
    GradientCertificate c;
    c.samples = pts.size();
    c.inf_jacobian = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (det[i] < c.inf_jacobian) {
            c.inf_jacobian = det[i];
            c.inf_point = pts[i];
        }
        if (!(det[i] > 0.0) && !c.failure_point) c.failure_point = pts[i];
    }
    c.passed = !c.failure_point;
    return c;
}

}  // namespace hqc
