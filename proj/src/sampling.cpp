#include "hqc/sampling.hpp"

#include <cmath>
#include <numbers>

#include "hqc/errors.hpp"

namespace hqc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(splitmix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL))) {}

std::uint64_t CounterStream::bits(std::uint64_t counter) const {
    return splitmix64(key_ ^ splitmix64(counter));
}

double CounterStream::uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

double CounterStream::normal(std::uint64_t counter) const {
    // 1 - u lies in (0, 1], so the logarithm is finite.
    const double u1 = 1.0 - uniform(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vec CounterStream::direction(std::size_t n, std::uint64_t base) const {
    for (std::uint64_t attempt = 0;; ++attempt) {
        Vec v(n);
        for (std::size_t j = 0; j < n; ++j) v[j] = normal(base + j + attempt * 0x10000ULL);
        const double r = v.norm();
        if (r > 1e-300) return v / r;
    }
}

Vec uniform_ball_point(const CounterStream& rng, std::size_t n, std::uint64_t base) {
    const Vec dir = rng.direction(n, base);
    const double r = std::pow(rng.uniform(2 * (base + n)), 1.0 / static_cast<double>(n));
    return dir * r;
}

std::string to_string(Strategy s) {
    switch (s) {
    case Strategy::UniformBall: return "uniform-ball";
    case Strategy::RadialStratified: return "radial-stratified";
    case Strategy::NearBoundary: return "near-boundary";
    }
    return "?";
}

Strategy parse_strategy(const std::string& s) {
    if (s == "uniform-ball") return Strategy::UniformBall;
    if (s == "radial-stratified") return Strategy::RadialStratified;
    if (s == "near-boundary") return Strategy::NearBoundary;
    throw PreconditionError("unknown sampling strategy '" + s + "'");
}

Vec plan_point(const SamplingPlan& plan, std::size_t n, std::size_t i) {
    if (!(plan.max_radius > 0.0 && plan.max_radius < 1.0))
        throw PreconditionError("sampling plan max_radius must lie in (0, 1)");
    const CounterStream rng(plan.seed, stream_id::kPlan);
    const std::uint64_t base = static_cast<std::uint64_t>(i) * 16;
    const Vec dir = rng.direction(n, base);
    const double u = rng.uniform(2 * (base + n));
    const double R = plan.max_radius;
    const double inv_n = 1.0 / static_cast<double>(n);
    double r = 0.0;
    switch (plan.strategy) {
    case Strategy::UniformBall: r = R * std::pow(u, inv_n); break;
    case Strategy::RadialStratified: {
        // Equal-volume radial shells, one sample per shell position.
        const double t = (static_cast<double>(i) + u) / static_cast<double>(plan.count);
        r = R * std::pow(t, inv_n);
        break;
    }
    case Strategy::NearBoundary: {
        const double lo = std::max(0.0, R - kNearBoundaryShell);
        r = lo + (R - lo) * u;
        break;
    }
    }
    return dir * r;
}

std::vector<Vec> plan_points(const SamplingPlan& plan, std::size_t n) {
    if (plan.count == 0) throw PreconditionError("sampling plan needs a positive count");
    std::vector<Vec> out;
    out.reserve(plan.count);
    for (std::size_t i = 0; i < plan.count; ++i) out.push_back(plan_point(plan, n, i));
    return out;
}

}  // namespace hqc
