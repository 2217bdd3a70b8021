#include "morseinf/sym_operator.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace morseinf {

SymOperator::SymOperator(Matrix entries) : m_(std::move(entries)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols())
    throw DimensionMismatch("SymOperator: matrix must be square and nonempty");
  if (!m_.allFinite())
    throw NonSymmetric("SymOperator: non-finite entries");
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale)
    throw NonSymmetric("SymOperator: symmetry violated beyond 1e-12 relative");
  // exact symmetrization so downstream eigensolves see a clean input
  m_ = ((m_ + m_.transpose()) / 2.0).eval();
}

Vector SymOperator::apply(const Vector& v) const {
  if (v.size() != m_.rows())
    throw DimensionMismatch("SymOperator::apply: size mismatch");
  return m_ * v;
}

double SymOperator::quad(const Vector& u, const Vector& v) const {
  if (u.size() != m_.rows() || v.size() != m_.rows())
    throw DimensionMismatch("SymOperator::quad: size mismatch");
  return u.dot(m_ * v);
}

double SymOperator::norm() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

std::string SymOperator::serialize() const {
  std::ostringstream os;
  os.precision(17);
  for (int i = 0; i < m_.rows(); ++i) {
    for (int j = 0; j < m_.cols(); ++j) {
      if (j) os << ' ';
      os << m_(i, j);
    }
    os << '\n';
  }
  return os.str();
}

SymOperator SymOperator::parse(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    double x;
    while (ls >> x) row.push_back(x);
    if (!ls.eof())
      throw ConfigParse("SymOperator::parse: bad token in matrix row " +
                        std::to_string(rows.size() + 1));
    if (row.empty()) {
      if (rows.empty()) continue;  // leading blank lines
      break;                       // blank line terminates the block
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigParse("SymOperator::parse: empty matrix block");
  const size_t n = rows.size();
  Matrix m(n, n);
  for (size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      throw ConfigParse("SymOperator::parse: row " + std::to_string(i + 1) +
                        " has " + std::to_string(rows[i].size()) +
                        " entries, expected " + std::to_string(n));
    for (size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return SymOperator(std::move(m));
}

SymOperator SymOperator::parse_text(const std::string& text) {
  std::istringstream is(text);
  return parse(is);
}

}  // namespace morseinf
