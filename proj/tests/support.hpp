#pragma once

// Helpers shared by the unit tests: an RNG independent of the library's
// counter streams, and small numerical oracles.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "hqc/harmonic.hpp"
#include "hqc/vec.hpp"

namespace testing {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}
    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(g_); }
    double normal() { return std::normal_distribution<double>()(g_); }

    /// Rejection sampling in the ball of radius r.
    hqc::Vec in_ball(std::size_t n, double r = 1.0) {
        for (;;) {
            hqc::Vec v(n);
            for (std::size_t i = 0; i < n; ++i) v[i] = uniform(-1.0, 1.0);
            if (v.norm2() < 1.0) return v * r;
        }
    }
    hqc::Vec on_sphere(std::size_t n) {
        hqc::Vec v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = normal();
        return v / v.norm();
    }
    hqc::Mat matrix(std::size_t n, double scale = 1.0) {
        hqc::Mat m(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = uniform(-scale, scale);
        return m;
    }

private:
    std::mt19937_64 g_;
};

/// Central-difference Jacobian of a vector field.
inline hqc::Mat fd_jacobian(const std::function<hqc::Vec(const hqc::Vec&)>& f, const hqc::Vec& x,
                            double step = 1e-5) {
    const std::size_t n = x.dim();
    hqc::Mat d(n);
    for (std::size_t j = 0; j < n; ++j) {
        const hqc::Vec e = hqc::Vec::unit(n, j) * step;
        const hqc::Vec df = (f(x + e) - f(x - e)) / (2.0 * step);
        for (std::size_t i = 0; i < n; ++i) d(i, j) = df[i];
    }
    return d;
}

inline double frobenius(const hqc::Mat& m) { return std::sqrt(m.frobenius2()); }

/// Composite Gauss-Legendre (8 points per panel) on [a, b].
inline double integrate(const std::function<double(double)>& g, double a, double b, int panels = 64) {
    static const double x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
    static const double w[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    const double h = (b - a) / panels;
    double s = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double m = a + (p + 0.5) * h, r = 0.5 * h;
        for (int k = 0; k < 4; ++k) s += w[k] * (g(m - r * x[k]) + g(m + r * x[k]));
    }
    return s * 0.5 * h;
}

/// Harmonic extension of planar boundary data by the trapezoid rule on the
/// Poisson kernel (spectrally accurate for smooth periodic data).
inline double poisson_disk(const std::function<double(double)>& g, const hqc::Vec& x, int nodes = 8192) {
    const double r2 = x.norm2();
    double s = 0.0;
    for (int k = 0; k < nodes; ++k) {
        const double t = 2.0 * std::numbers::pi * k / nodes;
        const double dx = x[0] - std::cos(t), dy = x[1] - std::sin(t);
        s += g(t) * (1.0 - r2) / (dx * dx + dy * dy);
    }
    return s / nodes;
}

}  // namespace testing
