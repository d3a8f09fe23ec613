#pragma once

#include "hqc/vec.hpp"

namespace hqc {

/// Eigenvalues of a symmetric 2x2 or 3x3 matrix, descending. Closed form
/// (trigonometric for 3x3); the isolated root gets one Newton step and the
/// remaining pair is deflated through a quadratic.
Vec symmetric_eigenvalues(const Mat& a);

/// Singular values of a 2x2 or 3x3 matrix, descending. The 2x2 case is the
/// exact conformal/anticonformal split; the 3x3 case is a one-sided
/// Jacobi iteration on A and recovers the smallest value as |det A| / (s1 s2).
Vec singular_values(const Mat& a);

}  // namespace hqc
