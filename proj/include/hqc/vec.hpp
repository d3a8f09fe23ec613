#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>

namespace hqc {

/// Largest ambient dimension carried by a Vec. Map analysis uses n = 2, 3;
/// potential-theory kernels accept anything up to this bound.
inline constexpr std::size_t kMaxDim = 8;

[[noreturn]] void throw_dimension_mismatch(std::size_t a, std::size_t b);
[[noreturn]] void throw_dimension_unsupported(std::size_t n, std::size_t max);

/// Euclidean point or displacement with inline storage.
class Vec {
public:
    Vec() = default;
    explicit Vec(std::size_t n) : n_(n) {
        if (n > kMaxDim) throw_dimension_unsupported(n, kMaxDim);
    }
    Vec(std::initializer_list<double> values) : Vec(values.size()) {
        std::size_t i = 0;
        for (double v : values) c_[i++] = v;
    }
    explicit Vec(std::span<const double> values) : Vec(values.size()) {
        for (std::size_t i = 0; i < n_; ++i) c_[i] = values[i];
    }

    static Vec unit(std::size_t n, std::size_t axis) {
        Vec e(n);
        e[axis] = 1.0;
        return e;
    }

    std::size_t dim() const { return n_; }
    double& operator[](std::size_t i) { return c_[i]; }
    double operator[](std::size_t i) const { return c_[i]; }
    double* begin() { return c_.data(); }
    double* end() { return c_.data() + n_; }
    const double* begin() const { return c_.data(); }
    const double* end() const { return c_.data() + n_; }
    std::span<const double> coords() const { return {c_.data(), n_}; }

    double dot(const Vec& o) const {
        check(o);
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) s += c_[i] * o.c_[i];
        return s;
    }
    double norm2() const {
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) s += c_[i] * c_[i];
        return s;
    }
    double norm() const { return std::sqrt(norm2()); }

    Vec& operator+=(const Vec& o) {
        check(o);
        for (std::size_t i = 0; i < n_; ++i) c_[i] += o.c_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        check(o);
        for (std::size_t i = 0; i < n_; ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (std::size_t i = 0; i < n_; ++i) c_[i] *= s;
        return *this;
    }
    Vec& operator/=(double s) {
        for (std::size_t i = 0; i < n_; ++i) c_[i] /= s;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(Vec a, double s) { return a *= s; }
    friend Vec operator*(double s, Vec a) { return a *= s; }
    friend Vec operator/(Vec a, double s) { return a /= s; }
    friend Vec operator-(Vec a) { return a *= -1.0; }

    friend bool operator==(const Vec& a, const Vec& b) {
        if (a.n_ != b.n_) return false;
        for (std::size_t i = 0; i < a.n_; ++i)
            if (a.c_[i] != b.c_[i]) return false;
        return true;
    }

private:
    void check(const Vec& o) const {
        if (o.n_ != n_) throw_dimension_mismatch(n_, o.n_);
    }

    std::array<double, kMaxDim> c_{};
    std::size_t n_ = 0;
};

inline double distance(const Vec& a, const Vec& b) { return (a - b).norm(); }

std::string to_string(const Vec& v);

/// Square matrix of order 1..3 (derivatives and Hessians of maps of the ball).
class Mat {
public:
    Mat() = default;
    explicit Mat(std::size_t n) : n_(n) {
        if (n > 3) throw_dimension_unsupported(n, 3);
    }
    /// n * n entries, row by row.
    Mat(std::size_t n, std::initializer_list<double> row_major) : Mat(n) {
        if (row_major.size() != n * n) throw_dimension_mismatch(n * n, row_major.size());
        std::size_t k = 0;
        for (double v : row_major) {
            (*this)(k / n, k % n) = v;
            ++k;
        }
    }
    static Mat identity(std::size_t n) {
        Mat m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static Mat diagonal(const Vec& d) {
        Mat m(d.dim());
        for (std::size_t i = 0; i < d.dim(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t dim() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * 3 + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * 3 + j]; }

    Vec row(std::size_t i) const {
        Vec r(n_);
        for (std::size_t j = 0; j < n_; ++j) r[j] = (*this)(i, j);
        return r;
    }
    void set_row(std::size_t i, const Vec& r) {
        for (std::size_t j = 0; j < n_; ++j) (*this)(i, j) = r[j];
    }

    Mat transpose() const {
        Mat t(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }
    double trace() const {
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) s += (*this)(i, i);
        return s;
    }
    double det() const {
        const Mat& m = *this;
        switch (n_) {
        case 1: return m(0, 0);
        case 2: return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        case 3:
            return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                   m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                   m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
        default: return 1.0;
        }
    }
    /// Squared Hilbert-Schmidt (Frobenius) norm.
    double frobenius2() const {
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j) * (*this)(i, j);
        return s;
    }

    Vec operator*(const Vec& x) const {
        if (x.dim() != n_) throw_dimension_mismatch(n_, x.dim());
        Vec y(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }
    Mat operator*(const Mat& b) const {
        if (b.n_ != n_) throw_dimension_mismatch(n_, b.n_);
        Mat c(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < n_; ++k) s += (*this)(i, k) * b(k, j);
                c(i, j) = s;
            }
        return c;
    }
    Mat operator-(const Mat& b) const {
        Mat c(n_);
        for (std::size_t k = 0; k < 9; ++k) c.a_[k] = a_[k] - b.a_[k];
        return c;
    }

private:
    std::array<double, 9> a_{};
    std::size_t n_ = 0;
};

}  // namespace hqc
