#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "morseinf/spectral.hpp"

namespace morseinf {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The problem interface: L, its Riesz gradient A, the Hessian field B and
// the asymptotic operator B(inf). All evaluators must be pure/reentrant.
struct FunctionalProblem {
  int dim = 0;
  std::function<double(const Vector&)> eval_L;
  std::function<Vector(const Vector&)> eval_A;
  std::function<SymOperator(const Vector&)> eval_B;
  SymOperator B_inf;
  double infinity_radius = 1.0;  // the R of B_H(inf, R)
  std::string name;
};

enum class ContractionMode { E_infty, E_prime_infty };

// The (kappa, rho_A, R1, M(A)) quadruple of conditions (E)/(E').
struct ContractionData {
  double kappa = 2.0;    // > 1
  double rho_A = kInf;   // radius of the invariant ball; +inf in the E' regime
  double R1 = 1.0;       // kernel points are only trusted for ||z|| >= R1
  double M_A = 0.0;      // sup ||(I-P0)A(z)|| estimate over the kernel; may be +inf
  ContractionMode mode = ContractionMode::E_prime_infty;
};

struct HypothesisEntry {
  std::string name;
  bool pass = false;
  Vector worst_sample;
  double worst_value = 0.0;
  int samples_used = 0;
};

struct HypothesisReport {
  std::uint64_t seed = 0;
  std::vector<HypothesisEntry> entries;

  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }
  const HypothesisEntry* find(const std::string& name) const {
    for (const auto& e : entries)
      if (e.name == name) return &e;
    return nullptr;
  }
};

}  // namespace morseinf
