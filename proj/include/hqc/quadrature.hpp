#pragma once

#include <cstddef>
#include <vector>

#include "hqc/vec.hpp"

namespace hqc {

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule with m nodes on [-1, 1] (cached, thread-safe).
const GaussRule& gauss_legendre(std::size_t m);

/// Nodes on the unit sphere S^{n-1} with weights summing to one, so that
/// sum w_i g(x_i) approximates the normalised surface mean of g.
struct SphereRule {
    std::vector<Vec> nodes;
    std::vector<double> weights;
};

/// Product rule of order m on S^{n-1}:
///   n = 2: 2m equispaced nodes (trapezoid);
///   n = 3: m Gauss-Legendre nodes in cos(theta) times 2m uniform in phi;
///   n > 3: recursive product, Gauss-Legendre in each polar angle.
SphereRule sphere_rule(std::size_t n, std::size_t m);

/// Surface area of the unit sphere S^{n-1}.
double sphere_area(std::size_t n);
/// Volume of the unit ball B^n.
double ball_volume(std::size_t n);

}  // namespace hqc
