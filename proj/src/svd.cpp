#include "hqc/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hqc/errors.hpp"

namespace hqc {

namespace {

void newton_polish(double& lambda, double c2, double c1, double c0) {
    // p(l) = l^3 - c2 l^2 + c1 l - c0
    const double p = ((lambda - c2) * lambda + c1) * lambda - c0;
    const double dp = (3.0 * lambda - 2.0 * c2) * lambda + c1;
    const double scale = std::abs(c2) + std::abs(lambda) + 1e-300;
    // Near a double root p' vanishes and the step is meaningless.
    if (std::abs(dp) > 1e-8 * scale * scale) {
        const double step = p / dp;
        if (std::abs(step) < 1e-6 * scale) lambda -= step;
    }
}

}  // namespace

Vec symmetric_eigenvalues(const Mat& a) {
    const std::size_t n = a.dim();
    if (n == 2) {
        const double m = 0.5 * (a(0, 0) + a(1, 1));
        const double d = 0.5 * (a(0, 0) - a(1, 1));
        const double r = std::hypot(d, a(0, 1));
        return Vec{m + r, m - r};
    }
    if (n != 3) throw DimensionError("symmetric_eigenvalues supports n = 2 or 3");

    const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    if (p1 == 0.0) {
        Vec e{a(0, 0), a(1, 1), a(2, 2)};
        std::sort(e.begin(), e.end(), std::greater<>());
        return e;
    }
    const double q = a.trace() / 3.0;
    const double b00 = a(0, 0) - q, b11 = a(1, 1) - q, b22 = a(2, 2) - q;
    const double p2 = b00 * b00 + b11 * b11 + b22 * b22 + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    Mat b = a;
    for (std::size_t i = 0; i < 3; ++i) b(i, i) -= q;
    const double r = std::clamp(b.det() / (2.0 * p * p * p), -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    const double e2 = 3.0 * q - e1 - e3;

    const double c2 = a.trace();
    const double c1 = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0) +
                      a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
    const double c0 = a.det();
    // The angle formula loses about sqrt(eps) on a clustered pair. Only the
    // isolated root is kept (and polished); the pair comes from the trace and
    // the second invariant through a stable quadratic.
    const bool top_isolated = e1 - e2 >= e2 - e3;
    double iso = top_isolated ? e1 : e3;
    newton_polish(iso, c2, c1, c0);
    const double s = c2 - iso;
    const double prod = c1 - iso * s;
    const double disc = std::sqrt(std::max(0.0, s * s - 4.0 * prod));
    double hi, lo;
    if (s >= 0.0) {
        hi = 0.5 * (s + disc);
        lo = hi != 0.0 ? prod / hi : 0.0;
    } else {
        lo = 0.5 * (s - disc);
        hi = prod / lo;
    }
    Vec e = top_isolated ? Vec{iso, hi, lo} : Vec{hi, lo, iso};
    std::sort(e.begin(), e.end(), std::greater<>());
    return e;
}

Vec singular_values(const Mat& a) {
    const std::size_t n = a.dim();
    if (n == 2) {
        // A = conformal part + anticonformal part; s = |alpha| +- |beta|.
        const double sp = std::hypot(a(0, 0) + a(1, 1), a(1, 0) - a(0, 1));
        const double sm = std::hypot(a(0, 0) - a(1, 1), a(1, 0) + a(0, 1));
        return Vec{0.5 * (sp + sm), 0.5 * std::abs(sp - sm)};
    }
    if (n != 3) throw DimensionError("singular_values supports n = 2 or 3");

    // One-sided Jacobi on the columns of A. Going through A^T A squares the
    // condition number and costs ~1e-10 on the middle value of nearly
    // singular matrices.
    double c[3][3];
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) c[j][i] = a(i, j);
    const auto dot = [&](std::size_t p, std::size_t q) { return c[p][0] * c[q][0] + c[p][1] * c[q][1] + c[p][2] * c[q][2]; };
    for (int sweep = 0; sweep < 40; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p < 2; ++p) {
            for (std::size_t q = p + 1; q < 3; ++q) {
                const double alpha = dot(p, p), beta = dot(q, q), gamma = dot(p, q);
                if (gamma == 0.0 || std::abs(gamma) <= 1e-17 * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
                const double cs = 1.0 / std::hypot(1.0, t), sn = cs * t;
                for (std::size_t k = 0; k < 3; ++k) {
                    const double u = c[p][k], v = c[q][k];
                    c[p][k] = cs * u - sn * v;
                    c[q][k] = sn * u + cs * v;
                }
            }
        }
        if (!rotated) break;
    }
    double sv[3] = {std::sqrt(dot(0, 0)), std::sqrt(dot(1, 1)), std::sqrt(dot(2, 2))};
    std::sort(sv, sv + 3, std::greater<>());
    const double s1 = sv[0], s2 = sv[1];
    double s3 = sv[2];
    return Vec{s1, s2, s3};
}

}  // namespace hqc
