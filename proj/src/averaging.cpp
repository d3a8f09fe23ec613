#include "hqc/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "hqc/errors.hpp"
#include "hqc/parallel.hpp"
#include "hqc/quadrature.hpp"
#include "hqc/sampling.hpp"

namespace hqc {

namespace {

/// Points of the unit ball with weights summing to one.
struct NodeSet {
    std::vector<Vec> u;
    std::vector<double> w;
};

NodeSet make_nodes(std::size_t n, BallQuadrature::Mode mode, std::size_t count, std::uint64_t seed) {
    NodeSet s;
    if (mode == BallQuadrature::Mode::MonteCarlo) {
        const CounterStream rng(seed, stream_id::kBallNodes);
        for (std::size_t i = 0; i < count; ++i) {
            s.u.push_back(uniform_ball_point(rng, n, static_cast<std::uint64_t>(i) * 16));
            s.w.push_back(1.0 / static_cast<double>(count));
        }
        return s;
    }
    const GaussRule& g = gauss_legendre(count);
    const SphereRule sph = sphere_rule(n, count);
    const double nn = static_cast<double>(n);
    for (std::size_t i = 0; i < count; ++i) {
        const double r = 0.5 * (g.nodes[i] + 1.0);
        const double wr = 0.5 * g.weights[i] * nn * std::pow(r, nn - 1.0);
        for (std::size_t j = 0; j < sph.nodes.size(); ++j) {
            s.u.push_back(sph.nodes[j] * r);
            s.w.push_back(wr * sph.weights[j]);
        }
    }
    return s;
}

const NodeSet& ball_nodes(std::size_t n, BallQuadrature::Mode mode, std::size_t count, std::uint64_t seed) {
    static std::mutex mu;
    static std::map<std::tuple<std::size_t, int, std::size_t, std::uint64_t>, std::unique_ptr<NodeSet>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{n, static_cast<int>(mode), count, seed}];
    if (!slot) slot = std::make_unique<NodeSet>(make_nodes(n, mode, count, seed));
    return *slot;
}

std::vector<double> jacobians_on(const HarmonicMap& f, const Vec& z, double radius, const NodeSet& s) {
    std::vector<double> j(s.u.size());
    parallel_for(s.u.size(), [&](std::size_t i) {
        const Vec y = z + s.u[i] * radius;
        const double v = f.jacobian(y);
        if (!(v > kDegenerateJacobian))
            throw DegeneracyError("Jacobian " + std::to_string(v) + " not positive at a quadrature node", y);
        j[i] = v;
    });
    return j;
}

struct Mean {
    double value = 0.0;
    double std_error = 0.0;
    /// Worst-case bound on the floating-point error of the summation,
    /// (N + 4) u sum |w_i x_i| plus a few ulps for evaluating each term.
    double rounding = 0.0;
};

template <class Fn>
Mean weighted_mean(const std::vector<double>& jac, const NodeSet& s, Fn&& fn) {
    constexpr double u = std::numeric_limits<double>::epsilon() / 2.0;
    double m = 0.0, abs_sum = 0.0;
    for (std::size_t i = 0; i < jac.size(); ++i) {
        const double t = s.w[i] * fn(jac[i]);
        m += t;
        abs_sum += std::abs(t);
    }
    double var = 0.0;
    for (std::size_t i = 0; i < jac.size(); ++i) {
        const double d = fn(jac[i]) - m;
        var += s.w[i] * d * d;
    }
    const double n = static_cast<double>(jac.size());
    return {m, n > 1 ? std::sqrt(var / (n - 1.0)) : 0.0, (n + 4.0) * u * abs_sum + 4.0 * u};
}

/// Jacobian samples on B(z, R) for the main rule and, for the product rule,
/// the half-order rule used for the error estimate.
struct BallSamples {
    const NodeSet* main = nullptr;
    const NodeSet* half = nullptr;
    std::vector<double> j_main;
    std::vector<double> j_half;
    double radius = 0.0;
    bool monte_carlo = true;
};

BallSamples sample_ball(const HarmonicMap& f, const Vec& z, const Domain& domain, const BallQuadrature& quad) {
    if (quad.nodes == 0) throw PreconditionError("ball quadrature needs a positive node count");
    if (domain.dim() != f.dim()) throw_dimension_mismatch(f.dim(), domain.dim());
    BallSamples b;
    b.radius = domain.boundary_distance(z);
    b.monte_carlo = quad.mode == BallQuadrature::Mode::MonteCarlo;
    b.main = &ball_nodes(f.dim(), quad.mode, quad.nodes, quad.seed);
    b.j_main = jacobians_on(f, z, b.radius, *b.main);
    if (!b.monte_carlo) {
        b.half = &ball_nodes(f.dim(), quad.mode, std::max<std::size_t>(1, quad.nodes / 2), 0);
        b.j_half = jacobians_on(f, z, b.radius, *b.half);
    }
    return b;
}

double log_of(double j) { return std::log(j); }

}  // namespace

AlphaResult alpha(const HarmonicMap& f, const Vec& z, const Domain& domain, const BallQuadrature& quad) {
    const BallSamples b = sample_ball(f, z, domain, quad);
    const Mean m = weighted_mean(b.j_main, *b.main, log_of);
    AlphaResult r;
    r.log_mean = m.value;
    r.radius = b.radius;
    r.nodes = b.j_main.size();
    if (b.monte_carlo) {
        r.error = m.std_error;
    } else {
        const Mean h = weighted_mean(b.j_half, *b.half, log_of);
        r.error = std::abs(m.value - h.value);
    }
    r.error += m.rounding;
    r.alpha = std::exp(r.log_mean / static_cast<double>(f.dim()));
    return r;
}

KoebeResult koebe_ratio(const HarmonicMap& f, const Vec& z, const Domain& source, const Domain& target,
                        const BallQuadrature& quad) {
    KoebeResult k;
    k.alpha = alpha(f, z, source, quad);
    k.d_source = k.alpha.radius;
    k.d_target = target.boundary_distance(f.evaluate(z));
    k.ratio = k.alpha.alpha * k.d_source / k.d_target;
    return k;
}

ScalarField log_jacobian(const HarmonicMap& f) {
    return [f](const Vec& x) {
        const double j = f.jacobian(x);
        if (!(j > kDegenerateJacobian))
            throw DegeneracyError("log J undefined: Jacobian " + std::to_string(j), x);
        return std::log(j);
    };
}

ScalarField log_det_hessian(const GradientMap& g) {
    return [u = g.potential()](const Vec& x) {
        const double d = u.hessian(x).det();
        if (!(d > kDegenerateJacobian))
            throw DegeneracyError("log det H undefined: determinant " + std::to_string(d), x);
        return std::log(d);
    };
}

SuperharmonicReport superharmonicity_check(const ScalarField& scalar, const Vec& z,
                                           const std::vector<double>& radii, const Domain& domain,
                                           std::size_t sphere_order) {
    if (radii.empty()) throw PreconditionError("superharmonicity check needs at least one radius");
    if (z.dim() != domain.dim()) throw_dimension_mismatch(domain.dim(), z.dim());
    const std::size_t n = z.dim();
    const double dz = domain.boundary_distance(z);
    const double center = scalar(z);
    const SphereRule fine = sphere_rule(n, sphere_order);
    const SphereRule coarse = sphere_rule(n, std::max<std::size_t>(1, sphere_order / 2));

    auto mean_on = [&](const SphereRule& rule, double r, double& abs_mean) {
        std::vector<double> v(rule.nodes.size());
        parallel_for(v.size(), [&](std::size_t i) { v[i] = scalar(z + rule.nodes[i] * r); });
        double m = 0.0;
        abs_mean = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            m += rule.weights[i] * v[i];
            abs_mean += rule.weights[i] * std::abs(v[i]);
        }
        return m;
    };

    SuperharmonicReport out;
    out.min_slack = std::numeric_limits<double>::infinity();
    out.margin = std::numeric_limits<double>::infinity();
    for (double r : radii) {
        if (!(r > 0.0 && r < dz))
            throw PreconditionError("sphere of radius " + std::to_string(r) + " leaves the domain", z);
        double abs_fine = 0.0, abs_coarse = 0.0;
        const double q = mean_on(fine, r, abs_fine);
        const double q_half = mean_on(coarse, r, abs_coarse);
        SphereSlack s;
        s.radius = r;
        s.slack = center - q;
        s.error = std::abs(q - q_half) + 1e-14 * (abs_fine + std::abs(center));
        out.min_slack = std::min(out.min_slack, s.slack);
        out.error = std::max(out.error, s.error);
        out.margin = std::min(out.margin, s.slack + 3.0 * s.error);
        out.spheres.push_back(s);
    }
    out.passed = out.margin >= 0.0;
    return out;
}

Chain2dReport chain_check_2d(const HarmonicMap& f, const Vec& z, const Domain& domain, const Domain& target,
                             const BallQuadrature& quad) {
    if (f.dim() != 2) throw DimensionError("chain_check_2d needs n = 2");
    const Jet j = f.jet(z);
    if (!(j.jacobian > 0.0)) throw DegeneracyError("non-positive Jacobian", z);
    const AlphaResult a = alpha(f, z, domain, quad);
    Chain2dReport r;
    r.sigma_max2 = j.sigma_max() * j.sigma_max();
    r.jacobian = j.jacobian;
    r.alpha2 = a.alpha * a.alpha;
    r.alpha_error = a.error;
    r.first_slack = r.sigma_max2 - r.jacobian;
    r.second_slack = r.jacobian - r.alpha2 * (1.0 - 3.0 * a.error);
    const double h = j.sigma_max() / j.sigma_min();
    const double d0 = target.boundary_distance(f.evaluate(Vec(2)));
    r.c_empirical = a.alpha / (h * d0);
    r.passed = r.first_slack >= -1e-12 * r.sigma_max2 && r.second_slack >= 0.0;
    return r;
}

Chain3dReport chain_check_3d_gradient(const GradientMap& g, const Vec& z, const Domain& domain,
                                      const Domain& target, const BallQuadrature& quad, double sup_k_outer) {
    if (g.dim() != 3) throw DimensionError("chain_check_3d_gradient needs n = 3");
    if (!(sup_k_outer >= 1.0)) throw PreconditionError("sup K_outer must be >= 1");
    const HarmonicMap& f = g.map();
    const Jet j = f.jet(z);
    if (!(j.jacobian > 0.0)) throw DegeneracyError("non-positive Jacobian", z);
    const AlphaResult a = alpha(f, z, domain, quad);
    Chain3dReport r;
    r.alpha3 = a.alpha * a.alpha * a.alpha;
    r.alpha_error = a.error;
    r.jacobian = j.jacobian;
    r.sigma_min3 = std::pow(j.sigma_min(), 3.0);
    r.sup_k_outer = sup_k_outer;
    r.first_slack = r.jacobian * (1.0 + 3.0 * a.error) - r.alpha3;
    r.second_slack = sup_k_outer * sup_k_outer * r.sigma_min3 - r.jacobian;
    r.koebe = a.alpha * a.radius / target.boundary_distance(j.value);
    r.passed = r.first_slack >= 0.0 && r.second_slack >= -1e-12 * r.jacobian;
    return r;
}

AInfinityResult a_infinity_ratio(const HarmonicMap& f, const Vec& z, double p, const Domain& domain,
                                 const BallQuadrature& quad) {
    if (!(p > 0.0 && p <= 1.0)) throw PreconditionError("a_infinity_ratio needs p in (0, 1]");
    const BallSamples b = sample_ball(f, z, domain, quad);
    auto power = [p](double j) { return std::pow(j, p); };
    auto ratio_of = [&](const std::vector<double>& jac, const NodeSet& s, Mean& lm, Mean& pm) {
        lm = weighted_mean(jac, s, log_of);
        pm = weighted_mean(jac, s, power);
        return std::exp(lm.value) / std::pow(pm.value, 1.0 / p);
    };
    Mean lm, pm;
    AInfinityResult r;
    r.ratio = ratio_of(b.j_main, *b.main, lm, pm);
    if (b.monte_carlo) {
        r.error = lm.std_error + pm.std_error / (p * pm.value);
    } else {
        Mean lh, ph;
        r.error = std::abs(r.ratio - ratio_of(b.j_half, *b.half, lh, ph)) / r.ratio;
    }
    // Relative rounding of exp(mean log J) and of the p-th root of the power mean.
    r.error += lm.rounding + pm.rounding / (p * pm.value);
    return r;
}

}  // namespace hqc
