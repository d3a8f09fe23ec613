#pragma once

#include <array>
#include <map>
#include <utility>
#include <vector>

#include "hqc/vec.hpp"

namespace hqc {

/// Exponents (a, b, c) of x^a y^b z^c. Unused trailing slots stay zero.
using MultiIndex = std::array<int, 3>;

/// Real polynomial in n <= 3 variables, stored as exact coefficient terms.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::size_t n);
    Polynomial(std::size_t n, const std::vector<std::pair<MultiIndex, double>>& terms);

    static Polynomial constant(std::size_t n, double c);
    static Polynomial variable(std::size_t n, std::size_t j);

    std::size_t dim() const { return n_; }
    const std::map<MultiIndex, double>& terms() const { return terms_; }
    int degree() const;
    double max_abs_coefficient() const;
    bool is_zero() const { return terms_.empty(); }

    double operator()(const Vec& x) const;

    Polynomial partial(std::size_t j) const;
    Polynomial laplacian() const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(double s);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
    friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }

private:
    void add_term(const MultiIndex& k, double c);

    std::size_t n_ = 0;
    std::map<MultiIndex, double> terms_;
};

/// Flattened polynomial for repeated evaluation at many points.
class CompiledPolynomial {
public:
    CompiledPolynomial() = default;
    explicit CompiledPolynomial(const Polynomial& p);

    double operator()(const Vec& x) const;
    /// Evaluates with caller-supplied power tables pw[j][k] = x_j^k.
    double eval_with_powers(const double (*pw)[16]) const;
    int max_exponent() const { return max_exp_; }

private:
    std::size_t n_ = 0;
    int max_exp_ = 0;
    std::vector<std::array<unsigned char, 3>> exps_;
    std::vector<double> coefs_;
};

}  // namespace hqc
