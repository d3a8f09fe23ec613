#include "hqc/potential.hpp"

#include <cmath>
#include <numbers>

#include "hqc/errors.hpp"
#include "hqc/parallel.hpp"
#include "hqc/quadrature.hpp"

namespace hqc {

double green_constant(std::size_t n) { return 1.0 / sphere_area(n); }

double fundamental_solution(std::size_t n, double r) {
    if (n == 2) return std::log(r) / (2.0 * std::numbers::pi);
    const double nn = static_cast<double>(n);
    return -std::pow(r, 2.0 - nn) * green_constant(n) / (nn - 2.0);
}

namespace {

void check_pair(const Vec& x, const Vec& y) {
    if (x.dim() != y.dim()) throw_dimension_mismatch(x.dim(), y.dim());
    if (x.dim() < 2) throw DimensionError("Green's function needs n >= 2");
    if (!(x.norm2() < 1.0)) throw DomainError("Green's function needs |x| < 1", x);
    if (!(y.norm2() < 1.0)) throw DomainError("Green's function needs |y| < 1", y);
    if (distance(x, y) < 1e-12) throw SingularityError("Green's function is singular at x = y", x);
}

// |y| |x - y*| with y* the inversion of y in the sphere.
double reflected_distance(const Vec& x, const Vec& y) {
    return std::sqrt(std::max(0.0, x.norm2() * y.norm2() - 2.0 * x.dot(y) + 1.0));
}

}  // namespace

double green(const Vec& x, const Vec& y) {
    check_pair(x, y);
    const std::size_t n = x.dim();
    return fundamental_solution(n, distance(x, y)) - fundamental_solution(n, reflected_distance(x, y));
}

Vec green_gradient(const Vec& x, const Vec& y) {
    check_pair(x, y);
    const double nn = static_cast<double>(x.dim());
    const Vec d = x - y;
    Vec g = d / std::pow(d.norm(), nn);
    const double ry = y.norm();
    if (ry > 0.0) {
        // |y|^n (y - |y|^2 x) / |y - |y|^2 x|^n = |y| v / |v|^n with v = y/|y| - |y| x.
        const Vec v = y / ry - x * ry;
        g += v * (ry / std::pow(v.norm(), nn));
    }
    return g * green_constant(x.dim());
}

namespace {

// Distance from x to the unit sphere along the unit direction w.
double ray_length(const Vec& x, const Vec& w) {
    const double b = x.dot(w);
    return -b + std::sqrt(b * b + 1.0 - x.norm2());
}

/// int over the ball in polar coordinates about x of F(omega, rho-rule),
/// where `radial(w, R, rule)` returns the radial integral along direction w.
template <class Radial, class Value>
Value polar_integral(std::size_t n, std::size_t m, const Vec& x, Radial&& radial, Value zero) {
    const SphereRule sph = sphere_rule(n, m);
    const GaussRule& g = gauss_legendre(m);
    std::vector<Value> part(sph.nodes.size(), zero);
    parallel_for(sph.nodes.size(), [&](std::size_t i) {
        const Vec& w = sph.nodes[i];
        part[i] = radial(w, ray_length(x, w), g) * sph.weights[i];
    });
    Value total = zero;
    for (const auto& p : part) total += p;
    return total * sphere_area(n);
}

template <class Eval>
PotentialValue converge(const PotentialQuadrature& quad, Eval&& eval, const Vec& x) {
    if (quad.order == 0 || quad.max_order < quad.order) throw PreconditionError("invalid potential quadrature orders");
    double prev = eval(quad.order);
    PotentialValue out{prev, std::numeric_limits<double>::infinity(), quad.order};
    for (std::size_t m = 2 * quad.order; m <= quad.max_order; m *= 2) {
        const double cur = eval(m);
        out = {cur, std::abs(cur - prev), m};
        if (out.error <= quad.tolerance * std::max(1.0, std::abs(cur))) return out;
        prev = cur;
    }
    if (!(out.error <= quad.accept * std::max(1.0, std::abs(out.value))))
        throw AccuracyError("ball potential quadrature did not converge (estimate " + std::to_string(out.error) + ")",
                            x);
    return out;
}

}  // namespace

PotentialValue green_potential(const Density& h, const Vec& x, const PotentialQuadrature& quad) {
    if (!(x.norm2() < 1.0)) throw DomainError("green_potential needs |x| < 1", x);
    const std::size_t n = x.dim();
    const double nn = static_cast<double>(n);
    auto eval = [&](std::size_t m) {
        return polar_integral(
            n, m, x,
            [&](const Vec& w, double R, const GaussRule& g) {
                double s = 0.0;
                for (std::size_t k = 0; k < g.nodes.size(); ++k) {
                    const double rho = 0.5 * R * (g.nodes[k] + 1.0);
                    const Vec y = x + w * rho;
                    if (!(y.norm2() < 1.0)) continue;
                    s += g.weights[k] * green(x, y) * h(y) * std::pow(rho, nn - 1.0);
                }
                return 0.5 * R * s;
            },
            0.0);
    };
    return converge(quad, eval, x);
}

PotentialGradient green_potential_gradient(const Density& h, const Vec& x, const PotentialQuadrature& quad) {
    if (!(x.norm2() < 1.0)) throw DomainError("green_potential_gradient needs |x| < 1", x);
    const std::size_t n = x.dim();
    const double nn = static_cast<double>(n);
    auto eval_vec = [&](std::size_t m) {
        return polar_integral(
            n, m, x,
            [&](const Vec& w, double R, const GaussRule& g) {
                Vec s(n);
                for (std::size_t k = 0; k < g.nodes.size(); ++k) {
                    const double rho = 0.5 * R * (g.nodes[k] + 1.0);
                    const Vec y = x + w * rho;
                    if (!(y.norm2() < 1.0)) continue;
                    s += green_gradient(x, y) * (g.weights[k] * h(y) * std::pow(rho, nn - 1.0));
                }
                return s * (0.5 * R);
            },
            Vec(n));
    };
    if (quad.order == 0 || quad.max_order < quad.order) throw PreconditionError("invalid potential quadrature orders");
    Vec prev = eval_vec(quad.order);
    PotentialGradient out{prev, std::numeric_limits<double>::infinity()};
    for (std::size_t m = 2 * quad.order; m <= quad.max_order; m *= 2) {
        const Vec cur = eval_vec(m);
        out = {cur, (cur - prev).norm()};
        if (out.error <= quad.tolerance * std::max(1.0, cur.norm())) return out;
        prev = cur;
    }
    if (!(out.error <= quad.accept * std::max(1.0, out.value.norm())))
        throw AccuracyError("gradient potential quadrature did not converge", x);
    return out;
}

PotentialValue riesz_potential(double s, const Density& h, const Vec& x, const PotentialQuadrature& quad) {
    const std::size_t n = x.dim();
    if (!(s > 0.0 && s < static_cast<double>(n))) throw PreconditionError("Riesz potential needs 0 < s < n");
    if (!(x.norm2() < 1.0)) throw DomainError("riesz_potential needs |x| < 1", x);
    auto eval = [&](std::size_t m) {
        return polar_integral(
            n, m, x,
            [&](const Vec& w, double R, const GaussRule& g) {
                double acc = 0.0;
                for (std::size_t k = 0; k < g.nodes.size(); ++k) {
                    const double t = 0.5 * (g.nodes[k] + 1.0);
                    if (s < 1.0) {
                        // rho = R t^{1/s}: rho^{s-1} d rho = (R^s / s) dt.
                        acc += g.weights[k] * h(x + w * (R * std::pow(t, 1.0 / s)));
                    } else {
                        const double rho = R * t;
                        acc += g.weights[k] * h(x + w * rho) * std::pow(rho, s - 1.0);
                    }
                }
                return s < 1.0 ? 0.5 * acc * std::pow(R, s) / s : 0.5 * R * acc;
            },
            0.0);
    };
    return converge(quad, eval, x);
}

// ---------------------------------------------------------------------------

namespace {
constexpr int kMaxBootstrapSteps = 10000;
}

BootstrapTrace sobolev_bootstrap(int n, double p0) {
    const double nn = n;
    if (n < 1 || !(p0 > nn && p0 < 2.0 * nn))
        throw PreconditionError("bootstrap needs n < p0 < 2n (got n = " + std::to_string(n) +
                                ", p0 = " + std::to_string(p0) + ")");
    BootstrapTrace t;
    t.n = n;
    t.p0 = p0;
    double start = p0;
    for (int attempt = 0; attempt < 2; ++attempt) {
        t.start = start;
        t.epsilon = start / nn - 1.0;
        t.sequence = {start};
        bool degenerate = false;
        double p = start;
        for (int step = 0; step < kMaxBootstrapSteps; ++step) {
            const double next = p * nn / (2.0 * nn - p);
            if (std::abs(next - 2.0 * nn) <= 1e-9) {
                degenerate = true;
                break;
            }
            t.sequence.push_back(next);
            if (next > 2.0 * nn) {
                t.terminated = true;
                return t;
            }
            p = next;
        }
        if (!degenerate) return t;
        t.restarted = true;
        start = p0 * (1.0 - 1e-6);
    }
    return t;
}

ExactBootstrapTrace sobolev_bootstrap_exact(int n, const Rational& p0) {
    const Rational nn = n, two_n = 2 * n;
    if (n < 1 || !(p0 > nn && p0 < two_n)) throw PreconditionError("bootstrap needs n < p0 < 2n");
    ExactBootstrapTrace t;
    t.n = n;
    Rational start = p0;
    for (int attempt = 0; attempt < 2; ++attempt) {
        t.start = start;
        t.sequence = {start};
        Rational p = start;
        bool degenerate = false;
        for (int step = 0; step < kMaxBootstrapSteps; ++step) {
            const Rational next = p * nn / (two_n - p);
            if (next == two_n) {
                degenerate = true;
                break;
            }
            t.sequence.push_back(next);
            if (next > two_n) {
                t.terminated = true;
                return t;
            }
            p = next;
        }
        if (!degenerate) return t;
        t.restarted = true;
        start = p0 * (Rational(1) - Rational(1, 1000000));
    }
    return t;
}

std::string to_string(const Rational& q) { return q.str(); }

CoefficientEstimate coefficient_estimate(const std::vector<WSample>& samples) {
    if (samples.empty()) throw PreconditionError("coefficient_estimate needs at least one sample");
    CoefficientEstimate c;
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (samples[i].grad_norm < 1.0 && std::abs(samples[i].laplacian) > c.b_hat) {
            c.b_hat = std::abs(samples[i].laplacian);
            c.b_index = i;
        }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double g2 = samples[i].grad_norm * samples[i].grad_norm;
        if (g2 <= 0.0) continue;
        const double a = (std::abs(samples[i].laplacian) - c.b_hat) / g2;
        if (a > c.a_hat) {
            c.a_hat = a;
            c.a_index = i;
        }
    }
    return c;
}

}  // namespace hqc
