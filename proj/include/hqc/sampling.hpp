#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hqc/vec.hpp"

namespace hqc {

/// Stateless random stream: draw k is a pure function of (seed, stream, k),
/// so any subset of draws can be computed in any order or in parallel.
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t bits(std::uint64_t counter) const;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform(std::uint64_t counter) const;
    /// Standard normal via Box-Muller on draws 2c and 2c + 1.
    double normal(std::uint64_t counter) const;
    /// Uniformly distributed unit vector in R^n; uses draws [base, base + n).
    Vec direction(std::size_t n, std::uint64_t base) const;

private:
    std::uint64_t key_;
};

/// Operation ids mixed into the seed so that different scans never share draws.
namespace stream_id {
inline constexpr std::uint64_t kPlan = 1;
inline constexpr std::uint64_t kPairs = 2;
inline constexpr std::uint64_t kBallNodes = 3;
inline constexpr std::uint64_t kRandomTest = 99;
}  // namespace stream_id

enum class Strategy { UniformBall, RadialStratified, NearBoundary };

std::string to_string(Strategy s);
Strategy parse_strategy(const std::string& s);

struct SamplingPlan {
    Strategy strategy = Strategy::UniformBall;
    std::size_t count = 1024;
    std::uint64_t seed = 1;
    double max_radius = 0.999;
};

/// Width of the shell sampled by the near-boundary strategy.
inline constexpr double kNearBoundaryShell = 0.05;

/// Sample i of a plan in B^n (independent of the other samples).
Vec plan_point(const SamplingPlan& plan, std::size_t n, std::size_t i);
/// All samples of a plan; identical plans give identical point sets.
std::vector<Vec> plan_points(const SamplingPlan& plan, std::size_t n);

/// Uniform point in the open unit ball from draws starting at `base`.
Vec uniform_ball_point(const CounterStream& rng, std::size_t n, std::uint64_t base);

}  // namespace hqc
