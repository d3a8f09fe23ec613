#include "hqc/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "hqc/errors.hpp"

namespace hqc {

namespace {
constexpr int kMaxExponent = 15;

void check_poly_dim(std::size_t n) {
    if (n < 1 || n > 3) throw DimensionError("polynomials support n = 1..3, got " + std::to_string(n));
}
}  // namespace

Polynomial::Polynomial(std::size_t n) : n_(n) { check_poly_dim(n); }

Polynomial::Polynomial(std::size_t n, const std::vector<std::pair<MultiIndex, double>>& terms)
    : Polynomial(n) {
    for (const auto& [k, c] : terms) {
        for (std::size_t j = 0; j < 3; ++j) {
            if (k[j] < 0) throw PreconditionError("negative exponent in polynomial term");
            if (j >= n && k[j] != 0)
                throw DimensionError("exponent set for variable beyond dimension " + std::to_string(n));
        }
        add_term(k, c);
    }
}

Polynomial Polynomial::constant(std::size_t n, double c) {
    Polynomial p(n);
    p.add_term({0, 0, 0}, c);
    return p;
}

Polynomial Polynomial::variable(std::size_t n, std::size_t j) {
    Polynomial p(n);
    MultiIndex k{0, 0, 0};
    k[j] = 1;
    p.add_term(k, 1.0);
    return p;
}

void Polynomial::add_term(const MultiIndex& k, double c) {
    if (c == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

int Polynomial::degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, k[0] + k[1] + k[2]);
    return d;
}

double Polynomial::max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

double Polynomial::operator()(const Vec& x) const {
    if (x.dim() != n_) throw_dimension_mismatch(n_, x.dim());
    double s = 0.0;
    for (const auto& [k, c] : terms_) {
        double t = c;
        for (std::size_t j = 0; j < n_; ++j) t *= std::pow(x[j], k[j]);
        s += t;
    }
    return s;
}

Polynomial Polynomial::partial(std::size_t j) const {
    if (j >= n_) throw DimensionError("partial derivative index out of range");
    Polynomial d(n_);
    for (const auto& [k, c] : terms_) {
        if (k[j] == 0) continue;
        MultiIndex kk = k;
        kk[j] -= 1;
        d.add_term(kk, c * k[j]);
    }
    return d;
}

Polynomial Polynomial::laplacian() const {
    Polynomial l(n_);
    for (std::size_t j = 0; j < n_; ++j) l += partial(j).partial(j);
    return l;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (o.n_ != n_) throw_dimension_mismatch(n_, o.n_);
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (o.n_ != n_) throw_dimension_mismatch(n_, o.n_);
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(double s) {
    if (s == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, c] : terms_) c *= s;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.n_ != b.n_) throw_dimension_mismatch(a.n_, b.n_);
    Polynomial p(a.n_);
    for (const auto& [ka, ca] : a.terms_)
        for (const auto& [kb, cb] : b.terms_)
            p.add_term({ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]}, ca * cb);
    return p;
}

CompiledPolynomial::CompiledPolynomial(const Polynomial& p) : n_(p.dim()) {
    for (const auto& [k, c] : p.terms()) {
        std::array<unsigned char, 3> e{};
        for (std::size_t j = 0; j < 3; ++j) {
            if (k[j] > kMaxExponent)
                throw CapabilityError("compiled polynomials support exponents up to 15");
            e[j] = static_cast<unsigned char>(k[j]);
            max_exp_ = std::max(max_exp_, k[j]);
        }
        exps_.push_back(e);
        coefs_.push_back(c);
    }
}

double CompiledPolynomial::eval_with_powers(const double (*pw)[16]) const {
    double s = 0.0;
    for (std::size_t t = 0; t < coefs_.size(); ++t) {
        const auto& e = exps_[t];
        s += coefs_[t] * pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]];
    }
    return s;
}

double CompiledPolynomial::operator()(const Vec& x) const {
    if (x.dim() != n_) throw_dimension_mismatch(n_, x.dim());
    double pw[3][16];
    for (std::size_t j = 0; j < 3; ++j) {
        pw[j][0] = 1.0;
        const double v = j < n_ ? x[j] : 0.0;
        for (int k = 1; k <= max_exp_; ++k) pw[j][k] = pw[j][k - 1] * v;
    }
    return eval_with_powers(pw);
}

}  // namespace hqc
