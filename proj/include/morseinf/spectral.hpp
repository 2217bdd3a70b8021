#pragma once

#include "morseinf/sym_operator.hpp"

namespace morseinf {

// Orthogonal decomposition H = H0 (+) H+ (+) H- of a symmetric operator,
// with the gap constant a_infty and the index data (nu, mu) at infinity.
struct SpectralSplit {
  Matrix basis_zero;   // dim x nu, orthonormal columns
  Matrix basis_plus;   // dim x n_plus
  Matrix basis_minus;  // dim x mu
  Vector vals_plus;    // eigenvalues for basis_plus columns (ascending)
  Vector vals_minus;   // eigenvalues for basis_minus columns (ascending)
  double a_infty = 0.0;
  int nu = 0;
  int mu = 0;
  double zero_tol = 0.0;

  int dim() const { return static_cast<int>(basis_zero.rows()); }
  int n_plus() const { return static_cast<int>(basis_plus.cols()); }
};

enum class Part { zero, plus, minus, nonkernel };

// Eigendecomposition with kernel detection by threshold. The guard band
// (zero_tol, 2*zero_tol) must contain no |eigenvalue|; otherwise 0 is not
// numerically isolated in the spectrum and we refuse to classify.
SpectralSplit spectral_split(const SymOperator& B_inf, double zero_tol);

Vector project(const SpectralSplit& split, const Vector& v, Part part);

struct OperatorConstants {
  double c1_infty = 0.0;  // ||(B(inf)|_{H+-})^{-1}||
  double c2_infty = 1.0;  // ||I - P0||
};

OperatorConstants operator_constants(const SymOperator& B_inf,
                                     const SpectralSplit& split);

// Inverse of B(inf) restricted to H+-, applied to the non-kernel component.
Vector apply_inverse_offkernel(const SpectralSplit& split, const Vector& v);

}  // namespace morseinf
