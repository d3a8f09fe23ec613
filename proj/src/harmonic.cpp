#include "hqc/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hqc/errors.hpp"
#include "hqc/quadrature.hpp"
#include "hqc/svd.hpp"

namespace hqc {

// ---------------------------------------------------------------------------
// HarmonicPolynomial

struct HarmonicPolynomial::Compiled {
    std::size_t n = 0;
    int max_exp = 0;
    CompiledPolynomial value;
    std::vector<CompiledPolynomial> grad;
    // Upper triangle, row-major: (0,0) (0,1) (0,2) (1,1) (1,2) (2,2)
    std::vector<CompiledPolynomial> hess;
    CompiledPolynomial lap;

    void powers(const Vec& x, double (*pw)[16]) const {
        for (std::size_t j = 0; j < 3; ++j) {
            pw[j][0] = 1.0;
            const double v = j < n ? x[j] : 0.0;
            for (int k = 1; k <= max_exp; ++k) pw[j][k] = pw[j][k - 1] * v;
        }
    }
};

namespace {
std::size_t hess_index(std::size_t n, std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    std::size_t idx = 0;
    for (std::size_t r = 0; r < i; ++r) idx += n - r;
    return idx + (j - i);
}
}  // namespace

HarmonicPolynomial::HarmonicPolynomial(Polynomial p) : poly_(std::move(p)) {
    const Polynomial lap = poly_.laplacian();
    const double tol = 1e-12 * poly_.max_abs_coefficient();
    if (lap.max_abs_coefficient() > tol) {
        throw HarmonicityError("polynomial is not harmonic: Laplacian has coefficient of size " +
                               std::to_string(lap.max_abs_coefficient()));
    }
    auto c = std::make_shared<Compiled>();
    c->n = poly_.dim();
    c->value = CompiledPolynomial(poly_);
    c->max_exp = c->value.max_exponent();
    for (std::size_t i = 0; i < c->n; ++i) {
        const Polynomial di = poly_.partial(i);
        c->grad.emplace_back(di);
        for (std::size_t j = i; j < c->n; ++j) c->hess.emplace_back(di.partial(j));
    }
    c->lap = CompiledPolynomial(lap);
    compiled_ = std::move(c);
}

double HarmonicPolynomial::value(const Vec& x) const {
    if (x.dim() != dim()) throw_dimension_mismatch(dim(), x.dim());
    double pw[3][16];
    compiled_->powers(x, pw);
    return compiled_->value.eval_with_powers(pw);
}

Vec HarmonicPolynomial::gradient(const Vec& x) const {
    double v;
    Vec g;
    jet(x, v, g, nullptr);
    return g;
}

Mat HarmonicPolynomial::hessian(const Vec& x) const {
    double v;
    Vec g;
    Mat h;
    jet(x, v, g, &h);
    return h;
}

void HarmonicPolynomial::jet(const Vec& x, double& value, Vec& gradient, Mat* hessian) const {
    if (x.dim() != dim()) throw_dimension_mismatch(dim(), x.dim());
    const Compiled& c = *compiled_;
    double pw[3][16];
    c.powers(x, pw);
    value = c.value.eval_with_powers(pw);
    gradient = Vec(c.n);
    for (std::size_t i = 0; i < c.n; ++i) gradient[i] = c.grad[i].eval_with_powers(pw);
    if (hessian) {
        *hessian = Mat(c.n);
        for (std::size_t i = 0; i < c.n; ++i)
            for (std::size_t j = i; j < c.n; ++j) {
                const double h = c.hess[hess_index(c.n, i, j)].eval_with_powers(pw);
                (*hessian)(i, j) = h;
                (*hessian)(j, i) = h;
            }
    }
}

double HarmonicPolynomial::laplacian_at(const Vec& x) const {
    if (x.dim() != dim()) throw_dimension_mismatch(dim(), x.dim());
    double pw[3][16];
    compiled_->powers(x, pw);
    return compiled_->lap.eval_with_powers(pw);
}

HarmonicPolynomial HarmonicPolynomial::partial(std::size_t j) const {
    return HarmonicPolynomial(poly_.partial(j));
}

// ---------------------------------------------------------------------------
// Closed-form harmonic bases

namespace {

struct ComplexPoly {
    Polynomial re;
    Polynomial im;
};

ComplexPoly times_x_plus_iy(const ComplexPoly& p) {
    const std::size_t n = p.re.dim();
    const Polynomial x = Polynomial::variable(n, 0);
    const Polynomial y = Polynomial::variable(n, 1);
    return {p.re * x - p.im * y, p.re * y + p.im * x};
}

}  // namespace

Polynomial planar_harmonic(int k, bool sine) {
    if (k < 0) throw PreconditionError("planar harmonic degree must be nonnegative");
    ComplexPoly p{Polynomial::constant(2, 1.0), Polynomial(2)};
    for (int i = 0; i < k; ++i) p = times_x_plus_iy(p);
    return sine ? p.im : p.re;
}

Polynomial solid_harmonic(int l, int m) {
    const int am = std::abs(m);
    if (l < 0 || am > l) throw PreconditionError("solid harmonic needs 0 <= |m| <= l");
    // R_m^m = (2m-1)!! (x + i y)^m
    double dfact = 1.0;
    for (int k = 2 * am - 1; k > 1; k -= 2) dfact *= k;
    ComplexPoly rmm{Polynomial::constant(3, 1.0), Polynomial(3)};
    for (int i = 0; i < am; ++i) rmm = times_x_plus_iy(rmm);
    rmm.re *= dfact;
    rmm.im *= dfact;

    const Polynomial z = Polynomial::variable(3, 2);
    const Polynomial r2 = Polynomial::variable(3, 0) * Polynomial::variable(3, 0) +
                          Polynomial::variable(3, 1) * Polynomial::variable(3, 1) + z * z;
    ComplexPoly prev2 = rmm;  // R_{l-2}
    ComplexPoly prev1{};      // R_{l-1}
    ComplexPoly cur = rmm;
    if (l > am) {
        prev1 = rmm;
        cur = {(2.0 * am + 1.0) * (z * rmm.re), (2.0 * am + 1.0) * (z * rmm.im)};
        for (int ll = am + 2; ll <= l; ++ll) {
            prev2 = prev1;
            prev1 = cur;
            const double a = 2.0 * ll - 1.0;
            const double b = ll + am - 1.0;
            const double d = ll - am;
            cur = {(a * (z * prev1.re) - b * (r2 * prev2.re)) * (1.0 / d),
                   (a * (z * prev1.im) - b * (r2 * prev2.im)) * (1.0 / d)};
        }
    }
    return m >= 0 ? cur.re : cur.im;
}

HarmonicPolynomial harmonic_from_fourier(const std::vector<double>& cos_coeffs,
                                         const std::vector<double>& sin_coeffs) {
    Polynomial p(2);
    for (std::size_t k = 0; k < cos_coeffs.size(); ++k)
        if (cos_coeffs[k] != 0.0) p += cos_coeffs[k] * planar_harmonic(static_cast<int>(k), false);
    for (std::size_t k = 1; k < sin_coeffs.size(); ++k)
        if (sin_coeffs[k] != 0.0) p += sin_coeffs[k] * planar_harmonic(static_cast<int>(k), true);
    return HarmonicPolynomial(p);
}

HarmonicPolynomial harmonic_from_spherical(const std::vector<SphericalHarmonicTerm>& terms) {
    Polynomial p(3);
    for (const auto& t : terms)
        if (t.coefficient != 0.0) p += t.coefficient * solid_harmonic(t.l, t.m);
    return HarmonicPolynomial(p);
}

// ---------------------------------------------------------------------------
// PoissonField

namespace {

struct Level {
    std::vector<Vec> nodes;
    std::vector<double> weights;
    std::vector<double> values;
};

constexpr double kAccuracyFloor = 1e-6;

Level circle_level(std::size_t count, const std::function<double(double)>& g) {
    Level lv;
    for (std::size_t i = 0; i < count; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
        lv.nodes.push_back(Vec{std::cos(t), std::sin(t)});
        lv.weights.push_back(1.0 / static_cast<double>(count));
        lv.values.push_back(g(t));
    }
    return lv;
}

double wrap_angle(double t) {
    t = std::fmod(t, 2.0 * std::numbers::pi);
    if (t < 0.0) t += 2.0 * std::numbers::pi;
    return t;
}

}  // namespace

struct PoissonField::Impl {
    std::size_t n = 2;
    Mode mode = Mode::ExactLift;
    std::vector<std::complex<double>> coeffs;
    double tail_error = 0.0;
    std::vector<Level> levels;  // coarsest first
    std::size_t start_level = 0;
    std::function<double(double)> g_circle;
    std::function<double(const Vec&)> g_sphere;
    std::vector<double> circle_table;
    double sup = 0.0;

    // Horner for p, p', p''.
    void lift(const Vec& x, double& value, Vec& grad, Mat* hess) const {
        const std::complex<double> z(x[0], x[1]);
        std::complex<double> p = coeffs.empty() ? 0.0 : coeffs.back(), p1 = 0.0, p2 = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 1;) {
            p2 = p2 * z + p1;
            p1 = p1 * z + p;
            p = p * z + coeffs[k - 1];
        }
        const std::complex<double> d2 = 2.0 * p2;
        value = p.real();
        grad = Vec{p1.real(), -p1.imag()};
        if (hess) {
            *hess = Mat(2, {d2.real(), -d2.imag(), -d2.imag(), -d2.real()});
        }
    }

    // One quadrature level: value and gradient of sum w_i P(x, z_i) g_i.
    void kernel_sum(const Level& lv, const Vec& x, double& value, Vec* grad) const {
        const double nn = static_cast<double>(n);
        const double x2 = x.norm2();
        const double one_minus = 1.0 - x2;
        double v = 0.0;
        Vec g(n);
        for (std::size_t i = 0; i < lv.nodes.size(); ++i) {
            const Vec d = x - lv.nodes[i];
            const double d2 = d.norm2();
            const double dn = n == 2 ? d2 : std::pow(d2, 0.5 * nn);
            const double wg = lv.weights[i] * lv.values[i];
            v += wg * one_minus / dn;
            if (grad) {
                const double inv_dn = 1.0 / dn;
                for (std::size_t j = 0; j < n; ++j)
                    g[j] += wg * (-2.0 * x[j] * inv_dn - nn * one_minus * d[j] * inv_dn / d2);
            }
        }
        value = v;
        if (grad) *grad = g;
    }

    double kernel_eval(const Vec& x, double& value, Vec* grad) const {
        std::size_t lvl = start_level;
        double v_lo, v_hi;
        Vec g_lo, g_hi;
        kernel_sum(levels[lvl - 1], x, v_lo, grad ? &g_lo : nullptr);
        kernel_sum(levels[lvl], x, v_hi, grad ? &g_hi : nullptr);
        auto diff = [&] {
            double e = std::abs(v_hi - v_lo);
            if (grad)
                for (std::size_t j = 0; j < n; ++j) e = std::max(e, std::abs(g_hi[j] - g_lo[j]));
            return e;
        };
        double err = diff();
        const double target = 1e-11 * std::max(1.0, sup);
        while (err > target && lvl + 1 < levels.size()) {
            ++lvl;
            v_lo = v_hi;
            g_lo = g_hi;
            kernel_sum(levels[lvl], x, v_hi, grad ? &g_hi : nullptr);
            err = diff();
        }
        if (err > kAccuracyFloor * std::max(1.0, sup)) {
            throw AccuracyError("Poisson kernel quadrature did not converge (estimate " +
                                    std::to_string(err) + ")",
                                x);
        }
        value = v_hi;
        if (grad) *grad = g_hi;
        return err;
    }
};

PoissonField PoissonField::trigonometric(const std::vector<double>& cos_coeffs,
                                         const std::vector<double>& sin_coeffs) {
    auto impl = std::make_shared<Impl>();
    impl->n = 2;
    impl->mode = Mode::ExactLift;
    const std::size_t k = std::max(cos_coeffs.size(), sin_coeffs.size());
    impl->coeffs.assign(std::max<std::size_t>(k, 1), 0.0);
    for (std::size_t i = 0; i < cos_coeffs.size(); ++i) impl->coeffs[i] += cos_coeffs[i];
    for (std::size_t i = 1; i < sin_coeffs.size(); ++i)
        impl->coeffs[i] += std::complex<double>(0.0, -sin_coeffs[i]);
    double sup = 0.0;
    for (std::size_t i = 0; i < 4096; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / 4096.0;
        double v;
        Vec g;
        impl->lift(Vec{std::cos(t), std::sin(t)}, v, g, nullptr);
        sup = std::max(sup, std::abs(v));
    }
    impl->sup = sup;
    return PoissonField(std::move(impl));
}

PoissonField PoissonField::spectral_lift(const std::function<double(double)>& g, std::size_t samples) {
    if (samples < 16 || samples % 2 != 0)
        throw PreconditionError("spectral lift needs an even sample count >= 16");
    std::vector<double> vals(samples);
    for (std::size_t j = 0; j < samples; ++j)
        vals[j] = g(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(samples));
    PoissonField out = spectral_samples(std::move(vals));
    auto impl = std::make_shared<Impl>(*out.impl_);
    impl->g_circle = g;
    return PoissonField(std::move(impl));
}

PoissonField PoissonField::spectral_samples(std::vector<double> vals) {
    const std::size_t N = vals.size();
    if (N < 16 || N % 2 != 0) throw PreconditionError("spectral lift needs an even sample count >= 16");
    auto impl = std::make_shared<Impl>();
    impl->n = 2;
    impl->mode = Mode::ExactLift;
    double sup = 0.0;
    for (double v : vals) sup = std::max(sup, std::abs(v));
    std::vector<std::complex<double>> roots(N);
    for (std::size_t j = 0; j < N; ++j)
        roots[j] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(N));
    const std::size_t half = N / 2;
    std::vector<std::complex<double>> c(half + 1);
    for (std::size_t k = 0; k <= half; ++k) {
        std::complex<double> s = 0.0;
        for (std::size_t j = 0; j < N; ++j) s += vals[j] * roots[(j * k) % N];
        s /= static_cast<double>(N);
        c[k] = (k == 0 || k == half) ? std::complex<double>(s.real(), 0.0) : 2.0 * s;
    }
    double maxabs = 0.0;
    for (const auto& ck : c) maxabs = std::max(maxabs, std::abs(ck));
    // Drop the negligible tail, keep what was dropped in the error budget.
    double dropped = 0.0;
    while (c.size() > 1 && dropped + std::abs(c.back()) <= 1e-16 * maxabs) {
        dropped += std::abs(c.back());
        c.pop_back();
    }
    double tail = dropped;
    for (std::size_t k = N / 4 + 1; k < c.size(); ++k) tail += std::abs(c[k]);
    impl->coeffs = std::move(c);
    impl->tail_error = tail;
    impl->sup = sup;
    impl->circle_table = std::move(vals);
    return PoissonField(std::move(impl));
}

PoissonField PoissonField::circle_quadrature(const std::function<double(double)>& g) {
    auto impl = std::make_shared<Impl>();
    impl->n = 2;
    impl->mode = Mode::KernelQuadrature;
    impl->g_circle = g;
    for (std::size_t e = 8; e <= 16; ++e) impl->levels.push_back(circle_level(std::size_t{1} << e, g));
    impl->start_level = 4;  // 2^12 nodes
    for (double v : impl->levels.back().values) impl->sup = std::max(impl->sup, std::abs(v));
    return PoissonField(std::move(impl));
}

PoissonField PoissonField::circle_samples(std::vector<double> samples) {
    const std::size_t N = samples.size();
    if (N < 16 || N % 2 != 0) throw PreconditionError("circle sample table needs an even size >= 16");
    auto impl = std::make_shared<Impl>();
    impl->n = 2;
    impl->mode = Mode::KernelQuadrature;
    for (std::size_t stride = 1; N / stride >= 8 && N % stride == 0; stride *= 2) {
        Level lv;
        const std::size_t count = N / stride;
        for (std::size_t i = 0; i < count; ++i) {
            const double t = 2.0 * std::numbers::pi * static_cast<double>(i * stride) / static_cast<double>(N);
            lv.nodes.push_back(Vec{std::cos(t), std::sin(t)});
            lv.weights.push_back(1.0 / static_cast<double>(count));
            lv.values.push_back(samples[i * stride]);
        }
        impl->levels.insert(impl->levels.begin(), std::move(lv));
    }
    impl->start_level = impl->levels.size() - 1;
    for (double v : samples) impl->sup = std::max(impl->sup, std::abs(v));
    impl->circle_table = std::move(samples);
    return PoissonField(std::move(impl));
}

PoissonField PoissonField::sphere_quadrature(const std::function<double(const Vec&)>& g) {
    auto impl = std::make_shared<Impl>();
    impl->n = 3;
    impl->mode = Mode::KernelQuadrature;
    impl->g_sphere = g;
    for (std::size_t m = 8; m <= 128; m *= 2) {
        SphereRule r = sphere_rule(3, m);
        Level lv;
        lv.nodes = std::move(r.nodes);
        lv.weights = std::move(r.weights);
        for (const Vec& z : lv.nodes) lv.values.push_back(g(z));
        impl->levels.push_back(std::move(lv));
    }
    impl->start_level = 3;  // m = 64
    for (double v : impl->levels.back().values) impl->sup = std::max(impl->sup, std::abs(v));
    return PoissonField(std::move(impl));
}

PoissonField PoissonField::sphere_samples(std::size_t n_theta, std::vector<double> samples) {
    if (n_theta < 2) throw PreconditionError("sphere sample grid needs n_theta >= 2");
    const std::size_t n_phi = 2 * n_theta;
    if (samples.size() != n_theta * n_phi)
        throw PreconditionError("sphere sample table must have n_theta * 2 n_theta entries");
    auto impl = std::make_shared<Impl>();
    impl->n = 3;
    impl->mode = Mode::KernelQuadrature;
    SphereRule r = sphere_rule(3, n_theta);
    Level full{r.nodes, r.weights, samples};
    // Every other phi column, weights doubled: a nested coarser rule.
    Level half;
    for (std::size_t i = 0; i < n_theta; ++i)
        for (std::size_t j = 0; j < n_phi; j += 2) {
            const std::size_t k = i * n_phi + j;
            half.nodes.push_back(r.nodes[k]);
            half.weights.push_back(2.0 * r.weights[k]);
            half.values.push_back(samples[k]);
        }
    impl->levels = {std::move(half), std::move(full)};
    impl->start_level = 1;
    for (double v : samples) impl->sup = std::max(impl->sup, std::abs(v));
    return PoissonField(std::move(impl));
}

std::size_t PoissonField::dim() const { return impl_->n; }
PoissonField::Mode PoissonField::mode() const { return impl_->mode; }

const std::vector<std::complex<double>>& PoissonField::lift_coefficients() const { return impl_->coeffs; }

std::size_t PoissonField::quadrature_nodes() const {
    if (impl_->mode == Mode::ExactLift) return 0;
    return impl_->levels[impl_->start_level].nodes.size();
}

namespace {
void check_open_ball(const Vec& x, std::size_t n) {
    if (x.dim() != n) throw_dimension_mismatch(n, x.dim());
    if (!(x.norm2() < 1.0)) throw DomainError("point not inside the open unit ball", x);
}
}  // namespace

PoissonField::Value PoissonField::value(const Vec& x) const {
    check_open_ball(x, impl_->n);
    Value out;
    if (impl_->mode == Mode::ExactLift) {
        Vec g;
        impl_->lift(x, out.value, g, nullptr);
        out.error = impl_->tail_error;
    } else {
        out.error = impl_->kernel_eval(x, out.value, nullptr);
    }
    return out;
}

std::pair<Vec, double> PoissonField::gradient(const Vec& x) const {
    double v;
    Vec g;
    const double err = jet(x, v, g, nullptr);
    return {g, err};
}

double PoissonField::jet(const Vec& x, double& value, Vec& gradient, Mat* hessian) const {
    check_open_ball(x, impl_->n);
    if (impl_->mode == Mode::ExactLift) {
        impl_->lift(x, value, gradient, hessian);
        return impl_->tail_error;
    }
    if (hessian)
        throw CapabilityError("kernel-quadrature Poisson fields provide no analytic second derivatives");
    return impl_->kernel_eval(x, value, &gradient);
}

double PoissonField::boundary_value(const Vec& zeta) const {
    if (zeta.dim() != impl_->n) throw_dimension_mismatch(impl_->n, zeta.dim());
    const Impl& m = *impl_;
    if (m.n == 2) {
        const double t = wrap_angle(std::atan2(zeta[1], zeta[0]));
        if (m.g_circle) return m.g_circle(t);
        if (m.mode == Mode::ExactLift) {
            double v;
            Vec g;
            m.lift(Vec{std::cos(t), std::sin(t)}, v, g, nullptr);
            return v;
        }
        const std::size_t N = m.circle_table.size();
        const double u = t / (2.0 * std::numbers::pi) * static_cast<double>(N);
        const std::size_t i0 = static_cast<std::size_t>(std::floor(u)) % N;
        const double frac = u - std::floor(u);
        return (1.0 - frac) * m.circle_table[i0] + frac * m.circle_table[(i0 + 1) % N];
    }
    if (m.g_sphere) return m.g_sphere(zeta / zeta.norm());
    throw CapabilityError("tabulated sphere data has no pointwise boundary interpolation");
}

double PoissonField::boundary_sup() const { return impl_->sup; }

PoissonField::Value poisson_extend(const PoissonField& boundary, const Vec& x) { return boundary.value(x); }

// ---------------------------------------------------------------------------
// HarmonicMap

namespace {

std::size_t component_dim(const Component& c) {
    return std::visit([](const auto& v) { return v.dim(); }, c);
}

// Returns the error estimate of the component's value/gradient.
double component_jet(const Component& c, const Vec& x, double& value, Vec& grad, Mat* hess) {
    if (const auto* p = std::get_if<HarmonicPolynomial>(&c)) {
        p->jet(x, value, grad, hess);
        return 0.0;
    }
    return std::get<PoissonField>(c).jet(x, value, grad, hess);
}

}  // namespace

HarmonicMap::HarmonicMap(std::vector<Component> components, std::optional<double> declared_k)
    : n_(components.size()), components_(std::move(components)), declared_k_(declared_k) {
    if (n_ != 2 && n_ != 3) throw DimensionError("harmonic maps are supported for n = 2 or 3");
    for (const auto& c : components_)
        if (component_dim(c) != n_) throw_dimension_mismatch(n_, component_dim(c));
    if (declared_k_ && !(*declared_k_ >= 1.0))
        throw PreconditionError("declared distortion bound K must be >= 1");
}

HarmonicMap HarmonicMap::identity(std::size_t n) { return linear(Mat::identity(n)); }

HarmonicMap HarmonicMap::linear(const Mat& a, std::optional<Vec> offset) {
    const std::size_t n = a.dim();
    std::vector<Component> comps;
    for (std::size_t i = 0; i < n; ++i) {
        Polynomial p(n);
        for (std::size_t j = 0; j < n; ++j) p += a(i, j) * Polynomial::variable(n, j);
        if (offset) p += Polynomial::constant(n, (*offset)[i]);
        comps.emplace_back(HarmonicPolynomial(p));
    }
    return HarmonicMap(std::move(comps));
}

bool HarmonicMap::all_polynomial() const {
    return std::all_of(components_.begin(), components_.end(),
                       [](const Component& c) { return std::holds_alternative<HarmonicPolynomial>(c); });
}

bool HarmonicMap::has_exact_hessian() const {
    return std::all_of(components_.begin(), components_.end(), [](const Component& c) {
        if (std::holds_alternative<HarmonicPolynomial>(c)) return true;
        return std::get<PoissonField>(c).has_hessian();
    });
}

void HarmonicMap::check_point(const Vec& x) const { check_open_ball(x, n_); }

Vec HarmonicMap::evaluate(const Vec& x) const { return evaluate_with_error(x).value; }

MapValue HarmonicMap::evaluate_with_error(const Vec& x) const {
    check_point(x);
    MapValue out{Vec(n_), 0.0};
    for (std::size_t i = 0; i < n_; ++i) {
        if (const auto* p = std::get_if<HarmonicPolynomial>(&components_[i])) {
            out.value[i] = p->value(x);
        } else {
            const auto v = std::get<PoissonField>(components_[i]).value(x);
            out.value[i] = v.value;
            out.error = std::max(out.error, v.error);
        }
    }
    return out;
}

Mat HarmonicMap::derivative(const Vec& x) const {
    check_point(x);
    Mat d(n_);
    double v;
    Vec g;
    for (std::size_t i = 0; i < n_; ++i) {
        component_jet(components_[i], x, v, g, nullptr);
        d.set_row(i, g);
    }
    return d;
}

Jet HarmonicMap::jet(const Vec& x, bool with_hessian) const {
    check_point(x);
    Jet j;
    j.point = x;
    j.value = Vec(n_);
    j.derivative = Mat(n_);
    if (with_hessian) j.hessians.emplace();
    for (std::size_t i = 0; i < n_; ++i) {
        double v;
        Vec g;
        Mat h;
        const double err = component_jet(components_[i], x, v, g, with_hessian ? &h : nullptr);
        j.value[i] = v;
        j.derivative.set_row(i, g);
        j.error = std::max(j.error, err);
        if (with_hessian) j.hessians->push_back(h);
    }
    j.singular_values = singular_values(j.derivative);
    j.jacobian = j.derivative.det();
    return j;
}

Vec HarmonicMap::boundary_value(const Vec& zeta) const {
    if (zeta.dim() != n_) throw_dimension_mismatch(n_, zeta.dim());
    Vec out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        if (const auto* p = std::get_if<HarmonicPolynomial>(&components_[i]))
            out[i] = p->value(zeta);
        else
            out[i] = std::get<PoissonField>(components_[i]).boundary_value(zeta);
    }
    return out;
}

GradientMap::GradientMap(HarmonicPolynomial potential, std::optional<double> declared_k)
    : potential_(std::move(potential)), map_([&] {
          std::vector<Component> comps;
          for (std::size_t j = 0; j < potential_.dim(); ++j) comps.emplace_back(potential_.partial(j));
          return HarmonicMap(std::move(comps), declared_k);
      }()) {}

Vec evaluate(const HarmonicMap& f, const Vec& x) { return f.evaluate(x); }

Jet jet(const HarmonicMap& f, const Vec& x, bool with_hessian) { return f.jet(x, with_hessian); }

double laplacian_residual(const Component& c, const Vec& x) {
    if (const auto* p = std::get_if<HarmonicPolynomial>(&c)) return p->laplacian_at(x);
    const auto& field = std::get<PoissonField>(c);
    if (field.has_hessian()) {
        double v;
        Vec g;
        Mat h;
        field.jet(x, v, g, &h);
        return h.trace();
    }
    constexpr double step = 1e-3;
    const double center = field.value(x).value;
    double lap = 0.0;
    for (std::size_t j = 0; j < x.dim(); ++j) {
        const Vec e = Vec::unit(x.dim(), j) * step;
        lap += field.value(x + e).value + field.value(x - e).value - 2.0 * center;
    }
    return lap / (step * step);
}

}  // namespace hqc
