#include "hqc/qc_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hqc/errors.hpp"
#include "hqc/parallel.hpp"
#include "hqc/quadrature.hpp"

namespace hqc {

DistortionRecord distortion_at(const Jet& j) {
    if (!(j.jacobian > 0.0))
        throw DegeneracyError("orientation/degeneracy: non-positive Jacobian " + std::to_string(j.jacobian),
                              j.point);
    const double n = static_cast<double>(j.point.dim());
    DistortionRecord r;
    r.point = j.point;
    r.jacobian = j.jacobian;
    r.k_outer = std::pow(j.sigma_max(), n) / j.jacobian;
    r.k_inner = j.jacobian / std::pow(j.sigma_min(), n);
    r.linear_dilatation = j.sigma_max() / j.sigma_min();
    return r;
}

DistortionScan distortion_scan(const HarmonicMap& f, const SamplingPlan& plan) {
    const auto pts = plan_points(plan, f.dim());
    DistortionScan out;
    out.records.resize(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { out.records[i] = distortion_at(f.jet(pts[i])); });
    out.inf_jacobian = std::numeric_limits<double>::infinity();
    for (const auto& r : out.records) {
        out.sup_k_outer = std::max(out.sup_k_outer, r.k_outer);
        out.sup_k_inner = std::max(out.sup_k_inner, r.k_inner);
        out.sup_linear_dilatation = std::max(out.sup_linear_dilatation, r.linear_dilatation);
        out.sup_jacobian = std::max(out.sup_jacobian, r.jacobian);
        out.inf_jacobian = std::min(out.inf_jacobian, r.jacobian);
    }
    return out;
}

Estimate lp_norm_Df(const HarmonicMap& f, double p, const SamplingPlan& plan) {
    if (!(p > 0.0)) throw PreconditionError("lp_norm_Df needs p > 0");
    if (plan.strategy == Strategy::NearBoundary)
        throw PreconditionError("lp_norm_Df needs a volume-uniform sampling plan");
    const auto pts = plan_points(plan, f.dim());
    std::vector<double> v(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { v[i] = std::pow(f.jet(pts[i]).sigma_max(), p); });
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    const double n = static_cast<double>(v.size());
    const double se_mean = v.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
    const double vol = ball_volume(f.dim());
    const double integral = vol * mean;
    Estimate e;
    e.value = std::pow(integral, 1.0 / p);
    e.std_error = integral > 0.0 ? e.value / (p * integral) * vol * se_mean : 0.0;
    return e;
}

PointValue delta_bound(const HarmonicMap& f, const SamplingPlan& plan) {
    const auto pts = plan_points(plan, f.dim());
    std::vector<double> v(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        const double fx = f.evaluate(pts[i]).norm();
        if (fx >= 1.0) throw RangeError("map leaves the unit ball: |f(x)| = " + std::to_string(fx), pts[i]);
        v[i] = 1.0 - pts[i].norm() + fx;
    });
    PointValue out{std::numeric_limits<double>::infinity(), {}};
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] < out.value) out = {v[i], pts[i]};
    return out;
}

double sup_norm_estimate(const HarmonicMap& f) {
    const std::size_t n = f.dim();
    const SphereRule rule = n == 2 ? sphere_rule(2, 2048) : sphere_rule(3, 48);
    double sup = 0.0;
    for (const Vec& zeta : rule.nodes) {
        Vec v(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Component& c = f.components()[i];
            if (const auto* p = std::get_if<HarmonicPolynomial>(&c))
                v[i] = p->value(zeta * kSupNormRadius);
            else
                v[i] = std::get<PoissonField>(c).boundary_value(zeta);
        }
        sup = std::max(sup, v.norm());
    }
    return sup;
}

BlochResult bloch_ratio(const HarmonicMap& f, const SamplingPlan& plan) {
    BlochResult out;
    out.sup_norm = sup_norm_estimate(f);
    if (!(out.sup_norm > 0.0)) throw DegeneracyError("Bloch ratio undefined for the zero map");
    const auto pts = plan_points(plan, f.dim());
    std::vector<double> v(pts.size());
    parallel_for(pts.size(),
                 [&](std::size_t i) { v[i] = (1.0 - pts[i].norm()) * f.jet(pts[i]).sigma_max(); });
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] / out.sup_norm > out.ratio || i == 0) {
            out.ratio = v[i] / out.sup_norm;
            out.point = pts[i];
        }
    return out;
}

namespace {

double target_distance(const Domain& target, const Vec& y) {
    try {
        return target.boundary_distance(y);
    } catch (const OutsideDomainError& e) {
        throw RangeError("map value outside target: " + e.constraint(), y);
    }
}

}  // namespace

HarnackReport harnack_chain_check(const HarmonicMap& f, const Domain& target, const SamplingPlan& plan) {
    if (!target.convex()) throw PreconditionError("Harnack chain check needs a convex target");
    if (target.dim() != f.dim()) throw_dimension_mismatch(f.dim(), target.dim());
    const std::size_t n = f.dim();
    HarnackReport out;
    out.d_f0 = target_distance(target, f.evaluate(Vec(n)));
    const auto pts = plan_points(plan, n);
    std::vector<double> slack(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        const Vec& z = pts[i];
        const double r = z.norm();
        const double lhs = target_distance(target, f.evaluate(z));
        const double rhs = (1.0 - r) / std::pow(1.0 + r, static_cast<double>(n - 1)) * out.d_f0;
        slack[i] = lhs - rhs;
    });
    out.samples = pts.size();
    out.min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (slack[i] < out.min_slack) {
            out.min_slack = slack[i];
            out.worst_point = pts[i];
        }
    out.passed = out.min_slack >= -kHarnackTolerance;
    return out;
}

WFieldReport w_field_inequality(const HarmonicMap& f, const SamplingPlan& plan) {
    const std::size_t n = f.dim();
    const auto pts = plan_points(plan, n);
    WFieldReport out;
    out.points.resize(pts.size());

    // Independent route to the Laplacian of w: exact polynomial algebra when
    // possible, the product rule with analytic Hessians otherwise, and a
    // finite-difference stencil as the last resort.
    enum class Route { Polynomial, Hessian, Stencil } route;
    std::optional<CompiledPolynomial> lap_w;
    if (f.all_polynomial()) {
        route = Route::Polynomial;
        Polynomial w = Polynomial::constant(n, 1.0);
        for (const auto& c : f.components()) {
            const Polynomial& p = std::get<HarmonicPolynomial>(c).polynomial();
            w -= p * p;
        }
        lap_w.emplace(w.laplacian());
        out.identity_tolerance = 1e-10;
    } else if (f.has_exact_hessian()) {
        route = Route::Hessian;
        out.identity_tolerance = 1e-10;
    } else {
        route = Route::Stencil;
        out.identity_tolerance = 1e-4;
    }

    parallel_for(pts.size(), [&](std::size_t i) {
        const Vec& x = pts[i];
        const Jet j = f.jet(x, route == Route::Hessian);
        WFieldPoint& p = out.points[i];
        p.point = x;
        p.f_norm = j.value.norm();
        p.w = 1.0 - j.value.norm2();
        p.grad_norm = (2.0 * (j.derivative.transpose() * j.value)).norm();
        p.laplacian = -2.0 * j.hs_norm2();
        p.sigma_max = j.sigma_max();
        p.sigma_min = j.sigma_min();
        switch (route) {
        case Route::Polynomial: p.laplacian_direct = (*lap_w)(x); break;
        case Route::Hessian: {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                s += j.derivative.row(k).norm2() + j.value[k] * (*j.hessians)[k].trace();
            p.laplacian_direct = -2.0 * s;
            break;
        }
        case Route::Stencil: {
            constexpr double step = 1e-3;
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const Vec e = Vec::unit(n, k) * step;
                s += (1.0 - f.evaluate(x + e).norm2()) + (1.0 - f.evaluate(x - e).norm2()) - 2.0 * p.w;
            }
            p.laplacian_direct = s / (step * step);
            break;
        }
        }
    });

    out.upper_slack = std::numeric_limits<double>::infinity();
    out.lower_slack = std::numeric_limits<double>::infinity();
    out.delta = std::numeric_limits<double>::infinity();
    for (const auto& p : out.points) {
        const double scale = std::max(std::abs(p.laplacian), std::numeric_limits<double>::min());
        out.identity_residual = std::max(out.identity_residual, std::abs(p.laplacian - p.laplacian_direct) / scale);
        const double top = 2.0 * p.f_norm * p.sigma_max;
        if (top > 0.0)
            out.upper_slack = std::min(out.upper_slack, (top - p.grad_norm) / top);
        else
            out.upper_slack = std::min(out.upper_slack, -p.grad_norm);
        const double bottom = 2.0 * p.f_norm * p.sigma_min;
        if (top > 0.0) {
            out.lower_slack = std::min(out.lower_slack, (p.grad_norm - bottom) / top);
            out.best_lower_constant = std::min(out.best_lower_constant, p.grad_norm / top);
        }
        out.delta = std::min(out.delta, 1.0 - p.point.norm() + p.f_norm);
    }
    if (out.points.empty()) out.upper_slack = out.lower_slack = 0.0;

    const double nn = static_cast<double>(n);
    for (const auto& p : out.points) {
        const double t = (1.0 - p.point.norm()) * p.sigma_max;
        out.b_hat = std::max(out.b_hat, 4.0 * nn * nn / (out.delta * out.delta) * t * t);
    }
    for (const auto& p : out.points)
        if (p.grad_norm > 0.0)
            out.a_hat = std::max(out.a_hat, (std::abs(p.laplacian) - out.b_hat) / (p.grad_norm * p.grad_norm));

    out.identity_ok = out.identity_residual <= out.identity_tolerance;
    // Conformal maps attain the upper bound identically, so the two sides can
    // differ by the rounding of their evaluation; allow a few ulps.
    out.upper_ok = out.upper_slack >= -kWUpperRounding;
    out.lower_ok = out.lower_slack >= -1e-12;
    return out;
}

}  // namespace hqc
