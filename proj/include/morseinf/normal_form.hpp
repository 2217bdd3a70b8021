#pragma once

#include <cstdint>
#include <utility>

#include "morseinf/reduction.hpp"

namespace morseinf {

struct ChartPoint {
  Vector z;        // kernel component
  Vector u_plus;   // H+ component
  Vector u_minus;  // H- component
};

// The Morse normal-form chart at infinity: fiber functional F, concave
// maximizer phi_z, coordinate maps psi/psi^{-1}, and the assembled map Phi
// with L(Phi(z,u+,u-)) = ||u+||^2 - ||u-||^2 + L_reduced(z).
class NormalFormChart {
 public:
  NormalFormChart(ReductionSolver solver, double working_radius,
                  double maximizer_tol = 1e-10, double rootfind_tol = 1e-12,
                  int calibration_samples = 64, std::uint64_t seed = 2024);

  const ReductionSolver& solver() const { return solver_; }
  double a1() const { return a1_; }
  double r_cap() const { return r_cap_; }  // +inf in the Theorem-1.1 regime
  double working_radius() const { return working_radius_; }

  // F(z, u) = L(z + h(z) + u) - L(z + h(z)); F(z, theta) == 0 exactly.
  double F_infty(const Vector& z, const Vector& u) const;

  // Unique maximizer of v -> F(z, u_plus + v) over H-; theta when mu == 0.
  Vector maximize_minus(const Vector& z, const Vector& u_plus) const;

  // psi = psi1 + psi2; satisfies F(z,u+v) == ||psi1||^2 - ||psi2||^2.
  std::pair<Vector, Vector> psi(const Vector& z, const Vector& u_plus,
                                const Vector& u_minus) const;

  // Inverse of psi via the intermediate-value-theorem ray root-finds.
  std::pair<Vector, Vector> psi_inverse(const Vector& z, const Vector& w_plus,
                                        const Vector& w_minus) const;

  // Phi(p) and the normal-form residual
  // |L(Phi(p)) - (||u+||^2 - ||u-||^2 + L_reduced(z))|.
  std::pair<Vector, double> phi_chart(const ChartPoint& p) const;

  // Theorem 1.8(i) chart (nu = mu = 0): L(phi(u)) = ||u||^2 along rays.
  Vector nondeg_chart_definite(const Vector& u) const;

  // Theorem 1.8(ii) chart (nu = 0, mu > 0): L(phi(u+v)) = ||u||^2 - ||v||^2.
  Vector nondeg_chart_indefinite(const Vector& u_plus, const Vector& v) const;

  // |F(z_R, u0) - (B(inf)u0, u0)/2| over a radius ladder (Lemma 2.7(i)).
  std::vector<double> fiber_limit_ladder(const Vector& u0,
                                         const std::vector<double>& radii,
                                         const Vector& kernel_dir) const;

 private:
  double F_with_h(const Vector& base, double Lbase, const Vector& u) const;
  Vector maximize_minus_at(const Vector& base, double Lbase,
                           const Vector& u_plus) const;
  std::pair<Vector, Vector> psi_at(const Vector& base, double Lbase,
                                   const Vector& u_plus,
                                   const Vector& u_minus) const;
  double lambda_estimate() const;

  ReductionSolver solver_;
  double working_radius_;
  double maximizer_tol_;
  double rootfind_tol_;
  double a1_ = 0.0;
  double r_cap_ = kInf;
};

}  // namespace morseinf
