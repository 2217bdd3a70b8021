#include "morseinf/audits.hpp"

#include <algorithm>
#include <cmath>

#include "morseinf/rng.hpp"

namespace morseinf {

namespace {
double fd_step(const Vector& x) { return std::max(1e-6, 1e-6 * x.norm()); }
}  // namespace

HypothesisReport audit_gradient(const FunctionalProblem& p, int samples,
                                std::uint64_t seed) {
  if (samples < 1) throw ConfigParse("audit_gradient: samples must be >= 1");
  Rng rng(seed);
  HypothesisReport rep;
  rep.seed = seed;
  HypothesisEntry e;
  e.name = "F2_gradient_consistency";
  e.samples_used = samples;
  e.worst_value = 0.0;
  e.worst_sample = Vector::Zero(p.dim);
  for (int k = 0; k < samples; ++k) {
    const Vector x = ball_point(rng, p.dim, 1.5);
    const Vector u = unit_sphere(rng, p.dim);
    const double h = fd_step(x);
    const double fd = (p.eval_L(x + h * u) - p.eval_L(x - h * u)) / (2.0 * h);
    const double ex = p.eval_A(x).dot(u);
    const double rel = std::abs(ex - fd) / std::max({1.0, std::abs(fd), std::abs(ex)});
    if (rel > e.worst_value) {
      e.worst_value = rel;
      e.worst_sample = x;
    }
  }
  e.pass = e.worst_value <= 1e-5;
  rep.entries.push_back(std::move(e));
  return rep;
}

HypothesisReport audit_hessian(const FunctionalProblem& p, int samples,
                               std::uint64_t seed) {
  if (samples < 1) throw ConfigParse("audit_hessian: samples must be >= 1");
  Rng rng(seed);
  HypothesisReport rep;
  rep.seed = seed;
  HypothesisEntry e;
  e.name = "F3_hessian_consistency";
  e.samples_used = samples;
  e.worst_value = 0.0;
  e.worst_sample = Vector::Zero(p.dim);
  for (int k = 0; k < samples; ++k) {
    const Vector x = ball_point(rng, p.dim, 1.5);
    const Vector u = unit_sphere(rng, p.dim);
    const double h = fd_step(x);
    const Vector fd = (p.eval_A(x + h * u) - p.eval_A(x - h * u)) / (2.0 * h);
    const Vector ex = p.eval_B(x).apply(u);
    const double rel = (ex - fd).norm() / std::max({1.0, fd.norm(), ex.norm()});
    if (rel > e.worst_value) {
      e.worst_value = rel;
      e.worst_sample = x;
    }
  }
  e.pass = e.worst_value <= 1e-4;
  rep.entries.push_back(std::move(e));
  return rep;
}

HypothesisReport audit_D_infty(const FunctionalProblem& p,
                               const SpectralSplit& split,
                               const std::vector<double>& radii,
                               int samples_per_radius, std::uint64_t seed) {
  if (radii.empty()) throw ConfigParse("audit_D_infty: radii empty");
  for (size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < p.infinity_radius)
      throw ConfigParse("audit_D_infty: radii must be >= infinity_radius");
    if (i && radii[i] <= radii[i - 1])
      throw ConfigParse("audit_D_infty: radii must be increasing");
  }
  Rng rng(seed);
  HypothesisReport rep;
  rep.seed = seed;

  // The kernel-or-minus test directions of (D-infinity).
  Matrix zm(p.dim, split.nu + split.mu);
  zm << split.basis_zero, split.basis_minus;

  // Shared directions across the ladder so the trend reflects decay of
  // B(x)-B(inf), not sampling noise.
  std::vector<Vector> dirs, us, vs;
  for (int k = 0; k < samples_per_radius; ++k) {
    dirs.push_back(unit_sphere(rng, p.dim));
    us.push_back(unit_sphere(rng, p.dim));
    vs.push_back(zm.cols() > 0 ? Vector(zm * unit_sphere(rng, static_cast<int>(zm.cols())))
                               : Vector(Vector::Zero(p.dim)));
  }

  std::vector<double> omegas;
  Vector worst_x = Vector::Zero(p.dim);
  for (double R : radii) {
    double omega = 0.0;
    for (int k = 0; k < samples_per_radius; ++k) {
      if (vs[k].norm() < 0.5) continue;  // trivial H0 (+) H-
      const Vector x = R * dirs[k];
      const Matrix diff = p.eval_B(x).matrix() - p.B_inf.matrix();
      const double val = std::abs(us[k].dot(diff * vs[k]));
      if (val > omega) {
        omega = val;
        if (R == radii.back()) worst_x = x;
      }
    }
    omegas.push_back(omega);
  }

  HypothesisEntry decay;
  decay.name = "omega_decay";
  decay.samples_used = samples_per_radius * static_cast<int>(radii.size());
  decay.worst_sample = Vector::Map(omegas.data(), static_cast<int>(omegas.size()));
  decay.worst_value = omegas.back();
  bool nonincreasing = true;
  for (size_t i = 1; i < omegas.size(); ++i)
    if (omegas[i] > omegas[i - 1] * (1.0 + 1e-9) + 1e-15) nonincreasing = false;
  decay.pass = nonincreasing && omegas.back() < split.a_infty / 2.0;
  rep.entries.push_back(std::move(decay));

  // Lemma 2.5-style sign bounds at the largest radius.
  const double Rmax = radii.back();
  HypothesisEntry sp;
  sp.name = "sign_plus";
  sp.samples_used = samples_per_radius;
  sp.worst_value = kInf;
  sp.worst_sample = Vector::Zero(p.dim);
  HypothesisEntry sm;
  sm.name = "sign_minus";
  sm.samples_used = samples_per_radius;
  sm.worst_value = -kInf;
  sm.worst_sample = Vector::Zero(p.dim);
  for (int k = 0; k < samples_per_radius; ++k) {
    const Vector x = Rmax * dirs[k];
    const SymOperator B = p.eval_B(x);
    if (split.n_plus() > 0) {
      const Vector vp = subspace_sphere(rng, split.basis_plus, 1.0);
      const double q = B.quad(vp, vp);
      if (q < sp.worst_value) {
        sp.worst_value = q;
        sp.worst_sample = x;
      }
    }
    if (split.mu > 0) {
      const Vector vm = subspace_sphere(rng, split.basis_minus, 1.0);
      const double q = B.quad(vm, vm);
      if (q > sm.worst_value) {
        sm.worst_value = q;
        sm.worst_sample = x;
      }
    }
  }
  sp.pass = split.n_plus() == 0 || sp.worst_value > 0.0;
  sm.pass = split.mu == 0 || sm.worst_value <= -split.a_infty;
  if (split.n_plus() == 0) sp.worst_value = 0.0;
  if (split.mu == 0) sm.worst_value = 0.0;
  rep.entries.push_back(std::move(sp));
  rep.entries.push_back(std::move(sm));
  return rep;
}

ContractionData estimate_contraction(const FunctionalProblem& p,
                                     const SpectralSplit& split,
                                     const OperatorConstants& consts,
                                     double kappa, double trial_rho, double R1,
                                     int samples, ContractionMode mode,
                                     std::uint64_t seed) {
  if (kappa <= 1.0) throw ConfigParse("estimate_contraction: kappa must be > 1");
  if (trial_rho <= 0.0) throw ConfigParse("estimate_contraction: trial_rho must be > 0");
  if (R1 < p.infinity_radius)
    throw ConfigParse("estimate_contraction: R1 must be >= infinity_radius");
  Rng rng(seed);
  const double bound = 1.0 / (kappa * consts.c1_infty);
  std::uniform_real_distribution<double> rad(R1, 10.0 * R1);

  auto kernel_point = [&]() {
    if (split.nu == 0) return Vector(Vector::Zero(p.dim));
    return subspace_sphere(rng, split.basis_zero, rad(rng));
  };

  auto offkernel = [&](const Vector& v) {
    return project(split, v, Part::nonkernel);
  };

  Matrix pm(p.dim, split.dim() - split.nu);
  pm << split.basis_plus, split.basis_minus;

  for (int k = 0; k < samples; ++k) {
    const Vector x1 = subspace_ball(rng, pm, trial_rho);
    const Vector x2 = subspace_ball(rng, pm, trial_rho);
    const Vector z1 = kernel_point();
    const Vector z2 = (mode == ContractionMode::E_infty) ? kernel_point() : z1;
    const double den = ((z1 + x1) - (z2 + x2)).norm();
    if (den < 1e-12) continue;
    const Vector num = offkernel(p.eval_A(z1 + x1) - p.eval_A(z2 + x2)) -
                       p.B_inf.apply(x1 - x2);
    const double ratio = num.norm() / den;
    if (ratio > bound * (1.0 + 1e-9))
      throw ContractionViolated(
          "estimate_contraction: sampled Lipschitz ratio " +
          std::to_string(ratio) + " exceeds 1/(kappa*c1) = " +
          std::to_string(bound));
  }

  double M_A = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Vector z = kernel_point();
    M_A = std::max(M_A, offkernel(p.eval_A(z)).norm());
  }

  ContractionData cd;
  cd.kappa = kappa;
  cd.R1 = R1;
  cd.M_A = M_A;
  cd.mode = mode;
  if (mode == ContractionMode::E_infty) {
    cd.rho_A = trial_rho;
    const double need = kappa / (kappa - 1.0) * consts.c1_infty * M_A;
    if (!(cd.rho_A > need))
      throw RhoTooSmall("estimate_contraction: rho_A = " +
                        std::to_string(cd.rho_A) +
                        " does not exceed kappa/(kappa-1)*c1*M_A = " +
                        std::to_string(need));
  } else {
    cd.rho_A = kInf;
  }
  return cd;
}

}  // namespace morseinf
