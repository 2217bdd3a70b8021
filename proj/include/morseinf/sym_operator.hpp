#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

#include "morseinf/errors.hpp"

namespace morseinf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Dense symmetric operator on R^dim with the coordinate inner product.
// Problems must be expressed in an orthonormal basis up front; no Gram
// matrix is carried through the formulas.
class SymOperator {
 public:
  SymOperator() = default;  // empty placeholder; filled in by problem setup
  explicit SymOperator(Matrix entries);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

  Vector apply(const Vector& v) const;
  double quad(const Vector& u, const Vector& v) const;  // (Bu, v)
  double norm() const;                                  // spectral norm

  // Plain-text block: one row per line, whitespace separated.
  std::string serialize() const;
  static SymOperator parse(std::istream& in);
  static SymOperator parse_text(const std::string& text);

 private:
  Matrix m_;
};

}  // namespace morseinf
