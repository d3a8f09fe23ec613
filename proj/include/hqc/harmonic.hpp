#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "hqc/polynomial.hpp"
#include "hqc/vec.hpp"

namespace hqc {

/// Polynomial with identically vanishing Laplacian. The constructor checks
/// the coefficient-level Laplacian against 1e-12 of the largest coefficient.
class HarmonicPolynomial {
public:
    explicit HarmonicPolynomial(Polynomial p);

    std::size_t dim() const { return poly_.dim(); }
    const Polynomial& polynomial() const { return poly_; }

    double value(const Vec& x) const;
    Vec gradient(const Vec& x) const;
    Mat hessian(const Vec& x) const;
    /// Value, gradient and (optionally) Hessian from one set of power tables.
    void jet(const Vec& x, double& value, Vec& gradient, Mat* hessian) const;
    /// The exact Laplacian polynomial evaluated at x.
    double laplacian_at(const Vec& x) const;

    HarmonicPolynomial partial(std::size_t j) const;

    friend bool operator==(const HarmonicPolynomial& a, const HarmonicPolynomial& b) {
        return a.poly_ == b.poly_;
    }

private:
    struct Compiled;
    Polynomial poly_;
    std::shared_ptr<const Compiled> compiled_;
};

/// Re (x + i y)^k (sine = false) or Im (x + i y)^k (sine = true).
Polynomial planar_harmonic(int k, bool sine);

/// Real solid harmonic r^l P_l^|m|(cos theta) cos(m phi) for m >= 0 and
/// r^l P_l^|m|(cos theta) sin(|m| phi) for m < 0, with unnormalised associated
/// Legendre functions and no Condon-Shortley phase.
Polynomial solid_harmonic(int l, int m);

struct SphericalHarmonicTerm {
    int l = 0;
    int m = 0;
    double coefficient = 0.0;
};

/// Harmonic lift of a0 + sum_k a_k cos k t + b_k sin k t (cos[0] = a0, sin[0] ignored).
HarmonicPolynomial harmonic_from_fourier(const std::vector<double>& cos_coeffs,
                                         const std::vector<double>& sin_coeffs);
/// Harmonic lift of boundary data given in the real spherical-harmonic basis above.
HarmonicPolynomial harmonic_from_spherical(const std::vector<SphericalHarmonicTerm>& terms);

/// Harmonic extension of boundary data on the unit circle or sphere.
class PoissonField {
public:
    enum class Mode { ExactLift, KernelQuadrature };

    struct Value {
        double value = 0.0;
        double error = 0.0;
    };

    /// n = 2 trigonometric polynomial data, lifted via e^{ikt} -> r^|k| e^{ikt}.
    static PoissonField trigonometric(const std::vector<double>& cos_coeffs,
                                      const std::vector<double>& sin_coeffs);
    /// n = 2 smooth data sampled at `samples` equispaced nodes; the discrete
    /// Fourier coefficients are lifted exactly. Error estimate = coefficient tail.
    static PoissonField spectral_lift(const std::function<double(double)>& g,
                                      std::size_t samples = 4096);
    /// As spectral_lift, from an equispaced sample table (sample j at angle 2 pi j / N).
    static PoissonField spectral_samples(std::vector<double> samples);
    /// n = 2 Poisson-kernel trapezoid rule, orders 2^8 .. 2^16 (default 2^12).
    static PoissonField circle_quadrature(const std::function<double(double)>& g);
    /// n = 2 equispaced sample table; nested halvings supply the error estimate.
    static PoissonField circle_samples(std::vector<double> samples);
    /// n = 3 product Gauss-Legendre x uniform rule, orders m = 8 .. 128 (default 64).
    static PoissonField sphere_quadrature(const std::function<double(const Vec&)>& g);
    /// n = 3 sample table on the GL(n_theta) x uniform(2 n_theta) grid, theta-major.
    static PoissonField sphere_samples(std::size_t n_theta, std::vector<double> samples);

    std::size_t dim() const;
    Mode mode() const;
    bool has_hessian() const { return mode() == Mode::ExactLift; }

    Value value(const Vec& x) const;
    /// Gradient and its error estimate.
    std::pair<Vec, double> gradient(const Vec& x) const;
    /// Value, gradient and optional Hessian in one pass. The Hessian is only
    /// available in exact-lift mode (CapabilityError otherwise).
    double jet(const Vec& x, double& value, Vec& gradient, Mat* hessian) const;

    /// Boundary datum at a point of the unit sphere.
    double boundary_value(const Vec& zeta) const;
    /// Maximum of |g| over the tabulated boundary nodes.
    double boundary_sup() const;

    /// Exact-lift coefficients c_k (value = Re sum c_k z^k); empty in quadrature mode.
    const std::vector<std::complex<double>>& lift_coefficients() const;
    /// Current quadrature order (nodes per evaluation) in kernel mode.
    std::size_t quadrature_nodes() const;

private:
    struct Impl;
    explicit PoissonField(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// Free-function form: value of the harmonic extension with error estimate.
PoissonField::Value poisson_extend(const PoissonField& boundary, const Vec& x);

using Component = std::variant<HarmonicPolynomial, PoissonField>;

/// Pointwise first-order (and optional second-order) data of a map.
struct Jet {
    Vec point;
    Vec value;
    /// derivative(i, j) = d f_i / d x_j
    Mat derivative;
    /// Descending.
    Vec singular_values;
    double jacobian = 0.0;
    std::optional<std::vector<Mat>> hessians;
    /// Quadrature error estimate on value and derivative; 0 for exact representations.
    double error = 0.0;

    double sigma_max() const { return singular_values[0]; }
    double sigma_min() const { return singular_values[singular_values.dim() - 1]; }
    /// Squared Hilbert-Schmidt norm of the derivative.
    double hs_norm2() const { return derivative.frobenius2(); }
};

struct MapValue {
    Vec value;
    double error = 0.0;
};

/// Map of the unit ball with harmonic components (n = 2 or 3).
class HarmonicMap {
public:
    HarmonicMap(std::vector<Component> components, std::optional<double> declared_k = std::nullopt);

    static HarmonicMap identity(std::size_t n);
    /// x -> A x (+ b).
    static HarmonicMap linear(const Mat& a, std::optional<Vec> offset = std::nullopt);

    std::size_t dim() const { return n_; }
    const std::vector<Component>& components() const { return components_; }
    std::optional<double> declared_k() const { return declared_k_; }
    bool all_polynomial() const;
    bool has_exact_hessian() const;

    Vec evaluate(const Vec& x) const;
    MapValue evaluate_with_error(const Vec& x) const;
    Jet jet(const Vec& x, bool with_hessian = false) const;
    Mat derivative(const Vec& x) const;
    double jacobian(const Vec& x) const { return derivative(x).det(); }
    /// Value of the continuous boundary extension at |zeta| = 1.
    Vec boundary_value(const Vec& zeta) const;

private:
    void check_point(const Vec& x) const;

    std::size_t n_;
    std::vector<Component> components_;
    std::optional<double> declared_k_;
};

/// Gradient of a harmonic potential; the derivative is the potential's Hessian.
class GradientMap {
public:
    explicit GradientMap(HarmonicPolynomial potential, std::optional<double> declared_k = std::nullopt);

    const HarmonicPolynomial& potential() const { return potential_; }
    const HarmonicMap& map() const { return map_; }
    operator const HarmonicMap&() const { return map_; }
    std::size_t dim() const { return map_.dim(); }

private:
    HarmonicPolynomial potential_;
    HarmonicMap map_;
};

Vec evaluate(const HarmonicMap& f, const Vec& x);
Jet jet(const HarmonicMap& f, const Vec& x, bool with_hessian);

/// Harmonicity certificate for one component. Polynomials: the exact
/// Laplacian polynomial at x. Exact lifts: the analytic Hessian trace.
/// Kernel quadrature: central-difference Laplacian with step 1e-3.
double laplacian_residual(const Component& c, const Vec& x);

}  // namespace hqc
