#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "morseinf/audits.hpp"
#include "morseinf/problem.hpp"

namespace morseinf {

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;
  double contraction_factor = 0.0;  // worst observed gap ratio, 0 if <2 gaps
  bool newton_polished = false;
};

struct ReducedCriticalPoint {
  Vector z;           // kernel component, ||z|| >= R1
  Vector h;           // h^inf(z)
  Vector full_point;  // z + h
  double grad_norm = 0.0;  // ||A(z+h)||, <= 10*fp_tol
};

struct CriticalPointResult {
  std::vector<ReducedCriticalPoint> points;
  bool degenerate_flat = false;  // gradient ~ 0 across the whole band
};

// Fixed-point reduction at infinity: for each kernel point z, the unique h
// in H+- with (I-P0)A(z+h) = 0, via the Picard iteration
//   x <- x - (B(inf)|_{H+-})^{-1} (I-P0) A(z+x)
// started at x0 = theta, with an optional Newton polish once the residual
// drops below 1e-4.
class ReductionSolver {
 public:
  ReductionSolver(FunctionalProblem problem, SpectralSplit split,
                  OperatorConstants consts, ContractionData cdata,
                  double fp_tol = 1e-10, int max_iter = 10000);

  const FunctionalProblem& problem() const { return problem_; }
  const SpectralSplit& split() const { return split_; }
  const OperatorConstants& consts() const { return consts_; }
  const ContractionData& cdata() const { return cdata_; }
  double fp_tol() const { return fp_tol_; }

  Vector solve_h(const Vector& z, SolveStats* stats = nullptr,
                 const Vector* start = nullptr) const;

  double reduced_value(const Vector& z) const;   // L(z + h(z))
  Vector reduced_gradient(const Vector& z) const;  // P0 A(z + h(z))

  // Max sampled ||h(z1)-h(z2)|| / ||z1-z2||; only meaningful (and only
  // proved) in E-mode contraction data.
  double lipschitz_audit(int pairs, std::uint64_t seed) const;

  CriticalPointResult find_reduced_critical_points(
      std::pair<double, double> search_radius_band, int starts,
      std::uint64_t seed) const;

  // Max ||h|| over sampled kernel directions at each radius.
  std::vector<double> decay_audit(const std::vector<double>& radii,
                                  int directions = 16,
                                  std::uint64_t seed = 777) const;

 private:
  void check_kernel_point(const Vector& z) const;

  FunctionalProblem problem_;
  SpectralSplit split_;
  OperatorConstants consts_;
  ContractionData cdata_;
  double fp_tol_;
  int max_iter_;
  Matrix pm_;  // dim x (dim-nu) basis of H+-
};

}  // namespace morseinf
