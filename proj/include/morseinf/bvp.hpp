#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "morseinf/problem.hpp"

namespace morseinf {

// Nonlinearity data for -u'' = p(x,u) = a*u + q(x,u) on (0,pi), together
// with the declared hypothesis constants of (q1*)-(q3*).
struct NonlinearitySpec {
  double a0 = 0.0;  // limit of p(x,t)/t at 0
  double a = 0.0;   // limit at infinity
  std::function<double(double, double)> q;    // (x, t) -> q
  std::function<double(double, double)> q_t;  // derivative in t
  std::function<double(double, double)> Q;    // primitive in t, Q(x,0)=0
  // (q3*) envelope |q_t(x,t)| <= ell(x) * h_env(t)
  std::function<double(double)> h_env;
  double hbar = 0.0;
  double ell_norm1 = 0.0;   // L1 norm of ell
  double ell_norm_s = 0.0;  // Ls norm of ell
  double s = 2.0;           // integrability exponent of (q3*)
  // growth constants of (q1*)/(q2*), recorded as metadata
  double c1 = 0.0;
  double r = 0.5;
  double alpha = 1.5;
  double c2 = 0.0;
  int q4_sign = 0;  // +1/-1 when (q4+)/(q4-) is declared, else 0
  std::string name;
};

// amp*t*(1+t^2)^((r-1)/2): odd, sublinear growth |t|^r, bounded q_t with
// hbar = 0. The amplitude is kept small enough that the L1-envelope bound
// (4.15) holds on (0,pi).
NonlinearitySpec make_default_nonlinearity(double a, double amp = 0.25,
                                           double r = 0.5);
NonlinearitySpec make_zero_nonlinearity(double a);
// q(t) = 2 sin t: q_t does not decay, a (D-infinity) counterexample.
NonlinearitySpec make_oscillating_nonlinearity(double a);
// Interpolating p between slope a0 at 0 and a at infinity: amplitude a0-a.
NonlinearitySpec make_interpolating_nonlinearity(double a0, double a,
                                                 double r = 0.5);
// Plain-text table (t, q, q_t, Q) per line with cubic interpolation.
NonlinearitySpec make_table_nonlinearity(
    const std::vector<std::array<double, 4>>& rows, double a);

// Spectral sine-basis Galerkin discretization of the BVP on (0,pi) with
// H^1_0-orthonormal basis phi_j(x) = sqrt(2/pi) sin(jx)/j, lambda_j = j^2.
class GalerkinBVP {
 public:
  GalerkinBVP(int n_modes, NonlinearitySpec spec, int quad_nodes = 0,
              double infinity_radius = 10.0);

  int n_modes() const { return n_modes_; }
  int quad_nodes() const { return static_cast<int>(nodes_.size()); }
  const NonlinearitySpec& spec() const { return spec_; }
  double lambda(int j) const { return static_cast<double>(j) * j; }  // 1-based
  double infinity_radius() const { return infinity_radius_; }

  // u_c at the quadrature nodes
  Vector values_at_nodes(const Vector& coeffs) const;
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  FunctionalProblem assemble_problem() const;
  GalerkinBVP with_quad_nodes(int quad_nodes) const;

 private:
  int n_modes_;
  NonlinearitySpec spec_;
  double infinity_radius_;
  std::vector<double> nodes_, weights_;
  Matrix basis_at_nodes_;  // quad_nodes x n_modes
};

struct MorseData {
  int nu = 0;
  int mu = 0;
  int m_minus = -1;  // only meaningful in the resonant case
  int m_plus = -1;
};

MorseData morse_data(const GalerkinBVP& g, double a);

struct C1Detail {
  double direct = 0.0;       // max_j lambda_j / |lambda_j - a|
  double closed_form = 0.0;  // the Lemma 4.8 expression as printed
  bool discrepancy = false;
};

double c1_infinity(const GalerkinBVP& g, double a);
C1Detail c1_infinity_detail(const GalerkinBVP& g, double a);

struct EmbeddingEstimate {
  double value = 0.0;
  double restart_spread = 0.0;
};

EmbeddingEstimate embedding_constant(const GalerkinBVP& g);

HypothesisReport check_resonance_conditions(const GalerkinBVP& g,
                                            int m_override = -1);

enum class BvpScenario { theorem_4_7_a, theorem_4_7_b, theorem_4_7_c, direct };

struct BvpSolution {
  Vector coeffs;
  double norm_H = 0.0;
  double grad_norm = 0.0;  // max-mode residual at doubled quadrature
  bool nontrivial = false;
  double quad_shift = 0.0;  // coefficient movement when re-solved at 2x nodes
  bool from_reduction = false;
};

std::vector<BvpSolution> solve_bvp(const GalerkinBVP& g, BvpScenario scenario,
                                   int starts, std::uint64_t seed);

}  // namespace morseinf
