#include "morseinf/spectral.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace morseinf {

namespace {

// Deterministic sign convention: make the largest-magnitude component of
// each eigenvector positive (first such index on ties).
void normalize_signs(Matrix& basis) {
  for (int c = 0; c < basis.cols(); ++c) {
    int imax = 0;
    double amax = -1.0;
    for (int i = 0; i < basis.rows(); ++i) {
      const double a = std::abs(basis(i, c));
      if (a > amax + 1e-15) {
        amax = a;
        imax = i;
      }
    }
    if (basis(imax, c) < 0.0) basis.col(c) *= -1.0;
  }
}

}  // namespace

SpectralSplit spectral_split(const SymOperator& B_inf, double zero_tol) {
  if (zero_tol <= 0.0) throw ConfigParse("spectral_split: zero_tol must be > 0");
  const int n = B_inf.dim();
  Eigen::SelfAdjointEigenSolver<Matrix> es(B_inf.matrix());
  if (es.info() != Eigen::Success)
    throw Error("spectral_split: eigendecomposition failed");
  const Vector& vals = es.eigenvalues();  // ascending
  const Matrix& vecs = es.eigenvectors();

  for (int i = 0; i < n; ++i) {
    const double a = std::abs(vals[i]);
    if (a > zero_tol && a < 2.0 * zero_tol)
      throw GapViolation("spectral_split: eigenvalue " + std::to_string(vals[i]) +
                         " falls in the guard band (" + std::to_string(zero_tol) +
                         ", " + std::to_string(2.0 * zero_tol) +
                         "); 0 is not numerically isolated");
  }

  std::vector<int> iz, ip, im;
  for (int i = 0; i < n; ++i) {
    if (std::abs(vals[i]) <= zero_tol)
      iz.push_back(i);
    else if (vals[i] > 0.0)
      ip.push_back(i);
    else
      im.push_back(i);
  }

  SpectralSplit s;
  s.zero_tol = zero_tol;
  s.nu = static_cast<int>(iz.size());
  s.mu = static_cast<int>(im.size());
  s.basis_zero.resize(n, s.nu);
  s.basis_plus.resize(n, static_cast<int>(ip.size()));
  s.basis_minus.resize(n, s.mu);
  s.vals_plus.resize(static_cast<int>(ip.size()));
  s.vals_minus.resize(s.mu);
  for (size_t k = 0; k < iz.size(); ++k) s.basis_zero.col(k) = vecs.col(iz[k]);
  for (size_t k = 0; k < ip.size(); ++k) {
    s.basis_plus.col(k) = vecs.col(ip[k]);
    s.vals_plus[static_cast<int>(k)] = vals[ip[k]];
  }
  for (size_t k = 0; k < im.size(); ++k) {
    s.basis_minus.col(k) = vecs.col(im[k]);
    s.vals_minus[static_cast<int>(k)] = vals[im[k]];
  }
  normalize_signs(s.basis_zero);
  normalize_signs(s.basis_plus);
  normalize_signs(s.basis_minus);

  double min_nonzero = std::numeric_limits<double>::infinity();
  for (int i : ip) min_nonzero = std::min(min_nonzero, std::abs(vals[i]));
  for (int i : im) min_nonzero = std::min(min_nonzero, std::abs(vals[i]));
  s.a_infty = std::isfinite(min_nonzero) ? min_nonzero / 2.0 : 0.0;
  return s;
}

Vector project(const SpectralSplit& split, const Vector& v, Part part) {
  if (v.size() != split.dim())
    throw DimensionMismatch("project: vector length != dim");
  switch (part) {
    case Part::zero:
      return split.basis_zero * (split.basis_zero.transpose() * v);
    case Part::plus:
      return split.basis_plus * (split.basis_plus.transpose() * v);
    case Part::minus:
      return split.basis_minus * (split.basis_minus.transpose() * v);
    case Part::nonkernel:
      return v - split.basis_zero * (split.basis_zero.transpose() * v);
  }
  throw Error("project: unknown part");
}

OperatorConstants operator_constants(const SymOperator& B_inf,
                                     const SpectralSplit& split) {
  (void)B_inf;
  if (split.nu == split.dim())
    throw DegenerateComplement("operator_constants: H+- is trivial (nu == dim)");
  double c1 = 0.0;
  for (int i = 0; i < split.vals_plus.size(); ++i)
    c1 = std::max(c1, 1.0 / std::abs(split.vals_plus[i]));
  for (int i = 0; i < split.vals_minus.size(); ++i)
    c1 = std::max(c1, 1.0 / std::abs(split.vals_minus[i]));
  OperatorConstants oc;
  oc.c1_infty = c1;
  oc.c2_infty = 1.0;  // orthogonal projection, nu < dim
  return oc;
}

Vector apply_inverse_offkernel(const SpectralSplit& split, const Vector& v) {
  Vector out = Vector::Zero(split.dim());
  for (int i = 0; i < split.basis_plus.cols(); ++i) {
    const Vector& e = split.basis_plus.col(i);
    out += (e.dot(v) / split.vals_plus[i]) * e;
  }
  for (int i = 0; i < split.basis_minus.cols(); ++i) {
    const Vector& e = split.basis_minus.col(i);
    out += (e.dot(v) / split.vals_minus[i]) * e;
  }
  return out;
}

}  // namespace morseinf
