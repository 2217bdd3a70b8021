#include "morseinf/models.hpp"

#include <cmath>

namespace morseinf {

FunctionalProblem make_trig_model(double eps, double gamma,
                                  double infinity_radius) {
  FunctionalProblem p;
  p.dim = 3;
  p.name = "trig";
  Matrix binf = Matrix::Zero(3, 3);
  binf(1, 1) = 2.0;
  binf(2, 2) = -2.0;
  p.B_inf = SymOperator(binf);
  p.infinity_radius = infinity_radius;
  p.eval_L = [eps, gamma](const Vector& x) {
    return x[1] * x[1] - x[2] * x[2] + eps * std::sin(x[0]) * (x[1] + x[2]) +
           gamma * std::cos(x[0]);
  };
  p.eval_A = [eps, gamma](const Vector& x) {
    Vector a(3);
    a[0] = eps * std::cos(x[0]) * (x[1] + x[2]) - gamma * std::sin(x[0]);
    a[1] = 2.0 * x[1] + eps * std::sin(x[0]);
    a[2] = -2.0 * x[2] + eps * std::sin(x[0]);
    return a;
  };
  p.eval_B = [eps, gamma](const Vector& x) {
    Matrix b = Matrix::Zero(3, 3);
    b(0, 0) = -eps * std::sin(x[0]) * (x[1] + x[2]) - gamma * std::cos(x[0]);
    b(0, 1) = b(1, 0) = eps * std::cos(x[0]);
    b(0, 2) = b(2, 0) = eps * std::cos(x[0]);
    b(1, 1) = 2.0;
    b(2, 2) = -2.0;
    return SymOperator(b);
  };
  return p;
}

FunctionalProblem make_damped_trig_model(double eps, double gamma,
                                         double infinity_radius) {
  FunctionalProblem p;
  p.dim = 3;
  p.name = "damped_trig";
  Matrix binf = Matrix::Zero(3, 3);
  binf(1, 1) = 2.0;
  binf(2, 2) = -2.0;
  p.B_inf = SymOperator(binf);
  p.infinity_radius = infinity_radius;
  // Trig coupling damped by the full norm, L = x1^2 - x2^2 + U(x) w(x) with
  // U = eps sin(z)(x1+x2) + gamma cos(z) and w = 1/(1+|x|^2). Every entry
  // of the Hessian of U w is O(1/|x|) on spheres, uniformly over directions
  // (a z-only damping is not enough: the (z,z) entry carries a factor
  // x1 + x2 that grows along rays with a small kernel component).
  auto parts = [eps, gamma](const Vector& x, double& U, Vector& gU,
                            Matrix& hU) {
    const double z = x[0], s = std::sin(z), c = std::cos(z);
    const double m = x[1] + x[2];
    U = eps * s * m + gamma * c;
    gU = Vector::Zero(3);
    gU[0] = eps * c * m - gamma * s;
    gU[1] = gU[2] = eps * s;
    hU = Matrix::Zero(3, 3);
    hU(0, 0) = -eps * s * m - gamma * c;
    hU(0, 1) = hU(1, 0) = eps * c;
    hU(0, 2) = hU(2, 0) = eps * c;
  };
  p.eval_L = [parts](const Vector& x) {
    double U;
    Vector gU;
    Matrix hU;
    parts(x, U, gU, hU);
    return x[1] * x[1] - x[2] * x[2] + U / (1.0 + x.squaredNorm());
  };
  p.eval_A = [parts](const Vector& x) {
    double U;
    Vector gU;
    Matrix hU;
    parts(x, U, gU, hU);
    const double w = 1.0 / (1.0 + x.squaredNorm());
    Vector a = Vector::Zero(3);
    a[1] = 2.0 * x[1];
    a[2] = -2.0 * x[2];
    return Vector(a + w * gU - 2.0 * w * w * U * x);
  };
  p.eval_B = [parts, binf](const Vector& x) {
    double U;
    Vector gU;
    Matrix hU;
    parts(x, U, gU, hU);
    const double w = 1.0 / (1.0 + x.squaredNorm());
    const Vector gw = -2.0 * w * w * x;
    const Matrix hw = -2.0 * w * w * Matrix::Identity(3, 3) +
                      8.0 * w * w * w * x * x.transpose();
    Matrix b = binf + w * hU + gU * gw.transpose() + gw * gU.transpose() +
               U * hw;
    return SymOperator(std::move(b));
  };
  return p;
}

FunctionalProblem make_quadratic_model(SymOperator B_inf,
                                       double infinity_radius) {
  FunctionalProblem p;
  p.dim = B_inf.dim();
  p.name = "quadratic";
  p.infinity_radius = infinity_radius;
  const Matrix m = B_inf.matrix();
  p.eval_L = [m](const Vector& x) { return 0.5 * x.dot(m * x); };
  p.eval_A = [m](const Vector& x) { return Vector(m * x); };
  p.eval_B = [m](const Vector&) { return SymOperator(m); };
  p.B_inf = std::move(B_inf);
  return p;
}

FunctionalProblem make_coupled_model(double c, double infinity_radius) {
  FunctionalProblem p;
  p.dim = 3;
  p.name = "coupled";
  Matrix binf = Matrix::Zero(3, 3);
  binf(1, 1) = 2.0;
  binf(2, 2) = -2.0;
  p.B_inf = SymOperator(binf);
  p.infinity_radius = infinity_radius;
  p.eval_L = [c](const Vector& x) {
    return x[1] * x[1] - x[2] * x[2] + c * x[1] * x[2];
  };
  p.eval_A = [c](const Vector& x) {
    Vector a(3);
    a[0] = 0.0;
    a[1] = 2.0 * x[1] + c * x[2];
    a[2] = -2.0 * x[2] + c * x[1];
    return a;
  };
  p.eval_B = [c](const Vector&) {
    Matrix b = Matrix::Zero(3, 3);
    b(1, 1) = 2.0;
    b(2, 2) = -2.0;
    b(1, 2) = b(2, 1) = c;
    return SymOperator(b);
  };
  return p;
}

FunctionalProblem make_definite_model(double a, int dim,
                                      double infinity_radius) {
  FunctionalProblem p;
  p.dim = dim;
  p.name = "definite";
  p.B_inf = SymOperator(Matrix(2.0 * a * Matrix::Identity(dim, dim)));
  p.infinity_radius = infinity_radius;
  p.eval_L = [a](const Vector& x) { return a * x.squaredNorm(); };
  p.eval_A = [a](const Vector& x) { return Vector(2.0 * a * x); };
  p.eval_B = [a, dim](const Vector&) {
    return SymOperator(Matrix(2.0 * a * Matrix::Identity(dim, dim)));
  };
  return p;
}

}  // namespace morseinf
