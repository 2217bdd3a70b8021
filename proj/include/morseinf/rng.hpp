#pragma once

#include <cstdint>
#include <random>

#include "morseinf/sym_operator.hpp"

namespace morseinf {

using Rng = std::mt19937_64;

inline Vector gaussian_vector(Rng& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

inline Vector unit_sphere(Rng& rng, int n) {
  for (;;) {
    Vector v = gaussian_vector(rng, n);
    const double r = v.norm();
    if (r > 1e-12) return v / r;
  }
}

// Uniform in the ball of the given radius.
inline Vector ball_point(Rng& rng, int n, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector v = unit_sphere(rng, n);
  return radius * std::pow(u(rng), 1.0 / n) * v;
}

// Point of a subspace given by an orthonormal column basis, uniform on the
// sphere of the given radius inside that subspace.
inline Vector subspace_sphere(Rng& rng, const Matrix& basis, double radius) {
  const int k = static_cast<int>(basis.cols());
  if (k == 0) return Vector::Zero(basis.rows());
  return radius * (basis * unit_sphere(rng, k));
}

inline Vector subspace_ball(Rng& rng, const Matrix& basis, double radius) {
  const int k = static_cast<int>(basis.cols());
  if (k == 0) return Vector::Zero(basis.rows());
  return basis * ball_point(rng, k, radius);
}

}  // namespace morseinf
