#pragma once

#include <cmath>

#include "hyperlie/config.hpp"

namespace hyperlie {

/// A rotation R in SO(n+1) with R e_n = b (e_n the pole axis), built from
/// two Householder reflections. On the upper hemisphere R = H(b + e_n) D_n,
/// on the lower one R = H(b - e_n) D_0, where H(u) reflects along u and D_i
/// flips coordinate i. This gives R = I at b = e_n and the half-turn in the
/// (0, n) plane at b = -e_n; |u|^2 >= 2 keeps both branches well conditioned.
inline Matrix pole_rotation(const Vector& b) {
  const auto dim = b.size();
  const auto pole = dim - 1;
  const bool upper = b(pole) >= 0.0;
  Vector u = b;
  u(pole) += upper ? 1.0 : -1.0;
  Matrix rot = Matrix::Identity(dim, dim) - (2.0 / u.squaredNorm()) * u * u.transpose();
  rot.col(upper ? pole : 0) *= -1.0;
  return rot;
}

}  // namespace hyperlie
