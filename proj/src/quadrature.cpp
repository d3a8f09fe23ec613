#include "hqc/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "hqc/errors.hpp"

namespace hqc {

namespace {

GaussRule compute_gauss_legendre(std::size_t m) {
    GaussRule r;
    r.nodes.resize(m);
    r.weights.resize(m);
    for (std::size_t i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(m) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(m) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute derivative at the converged node for the weight.
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= m; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
            p0 = p1;
            p1 = p2;
        }
        dp = static_cast<double>(m) * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[m - 1 - i] = x;
        r.weights[i] = w;
        r.weights[m - 1 - i] = w;
    }
    if (m % 2 == 1) r.nodes[m / 2] = 0.0;
    return r;
}

}  // namespace

const GaussRule& gauss_legendre(std::size_t m) {
    if (m == 0) throw PreconditionError("Gauss-Legendre order must be positive");
    static std::mutex mu;
    static std::map<std::size_t, std::unique_ptr<GaussRule>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[m];
    if (!slot) slot = std::make_unique<GaussRule>(compute_gauss_legendre(m));
    return *slot;
}

SphereRule sphere_rule(std::size_t n, std::size_t m) {
    if (n < 2) throw DimensionError("sphere_rule needs n >= 2");
    if (m == 0) throw PreconditionError("sphere rule order must be positive");
    SphereRule out;
    if (n == 2) {
        const std::size_t k = 2 * m;
        for (std::size_t i = 0; i < k; ++i) {
            const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(k);
            out.nodes.push_back(Vec{std::cos(t), std::sin(t)});
            out.weights.push_back(1.0 / static_cast<double>(k));
        }
        return out;
    }
    const GaussRule& g = gauss_legendre(m);
    if (n == 3) {
        const std::size_t k = 2 * m;
        for (std::size_t i = 0; i < m; ++i) {
            const double ct = g.nodes[i];
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            for (std::size_t j = 0; j < k; ++j) {
                const double ph = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(k);
                out.nodes.push_back(Vec{st * std::cos(ph), st * std::sin(ph), ct});
                out.weights.push_back(g.weights[i] / (2.0 * static_cast<double>(k)));
            }
        }
        return out;
    }
    // S^{n-1} = {(cos t, sin t w) : w in S^{n-2}}, dsigma = sin^{n-2} t dt dsigma'.
    const SphereRule sub = sphere_rule(n - 1, m);
    std::vector<double> wt(m);
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double theta = 0.5 * std::numbers::pi * (g.nodes[i] + 1.0);
        wt[i] = g.weights[i] * std::pow(std::sin(theta), static_cast<double>(n - 2));
        total += wt[i];
    }
    for (std::size_t i = 0; i < m; ++i) {
        const double theta = 0.5 * std::numbers::pi * (g.nodes[i] + 1.0);
        for (std::size_t j = 0; j < sub.nodes.size(); ++j) {
            Vec v(n);
            v[0] = std::cos(theta);
            for (std::size_t d = 0; d + 1 < n; ++d) v[d + 1] = std::sin(theta) * sub.nodes[j][d];
            out.nodes.push_back(v);
            out.weights.push_back(wt[i] / total * sub.weights[j]);
        }
    }
    return out;
}

double sphere_area(std::size_t n) {
    const double h = 0.5 * static_cast<double>(n);
    return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double ball_volume(std::size_t n) { return sphere_area(n) / static_cast<double>(n); }

}  // namespace hqc
