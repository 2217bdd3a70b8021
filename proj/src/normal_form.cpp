#include "morseinf/normal_form.hpp"

#include <cmath>

#include "morseinf/rng.hpp"
#include "morseinf/rootfind.hpp"

namespace morseinf {

namespace {
constexpr double kZero = 1e-13;  // "the theta branch" cut for psi/psi^{-1}
}

NormalFormChart::NormalFormChart(ReductionSolver solver, double working_radius,
                                 double maximizer_tol, double rootfind_tol,
                                 int calibration_samples, std::uint64_t seed)
    : solver_(std::move(solver)),
      working_radius_(working_radius),
      maximizer_tol_(maximizer_tol),
      rootfind_tol_(rootfind_tol) {
  const auto& split = solver_.split();
  const auto& p = solver_.problem();
  const double a_inf = split.a_infty;

  if (split.nu == 0) {
    // Nondegenerate-at-infinity regime (Theorem 1.8); the degenerate chart
    // machinery is not used, so no calibration against h is possible.
    a1_ = 2.0 * a_inf;
    r_cap_ = kInf;
    return;
  }
  if (working_radius_ < solver_.cdata().R1)
    throw ConfigParse("NormalFormChart: working_radius below R1");

  Rng rng(seed);
  Matrix pm(p.dim, split.dim() - split.nu);
  pm << split.basis_plus, split.basis_minus;

  // a1 of Lemma 2.5(i): smallest sampled H+ quadratic form of B at the
  // working radius, floored (positivity is guaranteed, a value is not).
  double a1 = 2.0 * a_inf;
  // Pinching audit deciding between the r = inf regime and the finite cap.
  bool pinch_ok = true;
  for (int k = 0; k < calibration_samples; ++k) {
    const Vector z = subspace_sphere(rng, split.basis_zero, working_radius_);
    const Vector u = subspace_ball(rng, pm, working_radius_);
    const Vector h = solver_.solve_h(z);
    if (split.n_plus() > 0) {
      const Vector v = subspace_sphere(rng, split.basis_plus, 1.0);
      const Vector usm = subspace_ball(rng, pm, 1.0);
      a1 = std::min(a1, p.eval_B(z + h + usm).quad(v, v));
    }
    const double lhs = std::abs(p.eval_L(z + u) - 0.5 * p.B_inf.quad(u, u));
    if (lhs > a_inf / 8.0 * (z + u).squaredNorm()) pinch_ok = false;
  }
  a1_ = std::min(std::max(a1, 1e-6), 2.0 * a_inf);

  if (pinch_ok) {
    r_cap_ = kInf;
    return;
  }

  // Finite-cap regime: shrink the fiber ball by halving until the sampled
  // sign bounds certify the chart on B(theta, r).
  double r = working_radius_ / 4.0;
  for (int halving = 0; halving < 30; ++halving) {
    bool ok = true;
    Rng rr(seed ^ 0xabcdefull);
    for (int k = 0; k < calibration_samples && ok; ++k) {
      const Vector z = subspace_sphere(rr, split.basis_zero, working_radius_);
      const Vector h = solver_.solve_h(z);
      const double Lbase = p.eval_L(z + h);
      if (split.n_plus() > 0) {
        const Vector up = subspace_ball(rr, split.basis_plus, r);
        // slack is relative: an absolute one would vacuously certify any
        // sign pattern once r has been halved far enough
        if (F_with_h(z + h, Lbase, up) <
            (a1_ / 4.0 - 1e-12) * up.squaredNorm())
          ok = false;
      }
      if (split.mu > 0) {
        const Vector um = subspace_ball(rr, split.basis_minus, r);
        if (F_with_h(z + h, Lbase, um) >
            (-a_inf / 4.0 + 1e-12) * um.squaredNorm())
          ok = false;
      }
    }
    if (ok) {
      r_cap_ = r;
      return;
    }
    r /= 2.0;
  }
  throw Error("NormalFormChart: no certified fiber ball found");
}

double NormalFormChart::F_with_h(const Vector& base, double Lbase,
                                 const Vector& u) const {
  if (u.norm() == 0.0) return 0.0;  // exact by construction
  return solver_.problem().eval_L(base + u) - Lbase;
}

double NormalFormChart::F_infty(const Vector& z, const Vector& u) const {
  const Vector h = solver_.solve_h(z);
  return F_with_h(z + h, solver_.problem().eval_L(z + h), u);
}

Vector NormalFormChart::maximize_minus_at(const Vector& base, double Lbase,
                                          const Vector& u_plus) const {
  const auto& split = solver_.split();
  const auto& p = solver_.problem();
  if (split.mu == 0) return Vector::Zero(p.dim);
  const Matrix& M = split.basis_minus;
  const double a_inf = split.a_infty;

  Vector y = Vector::Zero(split.mu);
  double fcur = F_with_h(base, Lbase, u_plus);
  for (int it = 0; it < 200; ++it) {
    const Vector x = base + u_plus + M * y;
    const Vector g = M.transpose() * p.eval_A(x);
    if (g.norm() <= maximizer_tol_) return M * y;
    const Matrix Hm = M.transpose() * p.eval_B(x).matrix() * M;
    {
      Eigen::SelfAdjointEigenSolver<Matrix> es(Hm, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().maxCoeff() > -a_inf / 2.0)
        throw ConcavityViolation(
            "maximize_minus: H- Hessian probe is not uniformly concave");
    }
    Vector step = -Hm.ldlt().solve(g);
    if (step.dot(g) <= 0.0) step = g;  // fall back to gradient ascent
    double t = 1.0;
    bool moved = false;
    for (int half = 0; half < 40; ++half) {
      const Vector cand = y + t * step;
      const double fc = F_with_h(base, Lbase, u_plus + M * cand);
      if (fc > fcur) {
        y = cand;
        fcur = fc;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) {
      const Vector gg = M.transpose() * p.eval_A(base + u_plus + M * y);
      if (gg.norm() <= 10.0 * maximizer_tol_) return M * y;
      throw NoConvergence("maximize_minus: line search stalled", it, gg.norm());
    }
  }
  throw NoConvergence("maximize_minus: iteration cap reached", 200,
                      (M.transpose() * p.eval_A(base + u_plus + M * y)).norm());
}

Vector NormalFormChart::maximize_minus(const Vector& z,
                                       const Vector& u_plus) const {
  const Vector h = solver_.solve_h(z);
  return maximize_minus_at(z + h, solver_.problem().eval_L(z + h), u_plus);
}

std::pair<Vector, Vector> NormalFormChart::psi_at(const Vector& base,
                                                  double Lbase,
                                                  const Vector& u_plus,
                                                  const Vector& u_minus) const {
  const int n = solver_.problem().dim;
  const Vector phi = maximize_minus_at(base, Lbase, u_plus);
  double r1 = F_with_h(base, Lbase, u_plus + phi);
  if (r1 < -1e-12)
    throw NegativeRadicand(
        "psi: F(z, u+ + phi_z(u+)) = " + std::to_string(r1) +
        " is negative; point left the certified region");
  r1 = std::max(r1, 0.0);
  Vector psi1 = Vector::Zero(n);
  if (u_plus.norm() > kZero) psi1 = std::sqrt(r1) / u_plus.norm() * u_plus;
  const Vector d = u_minus - phi;
  Vector psi2 = Vector::Zero(n);
  if (d.norm() > kZero) {
    const double r2 =
        std::max(r1 - F_with_h(base, Lbase, u_plus + u_minus), 0.0);
    psi2 = std::sqrt(r2) / d.norm() * d;
  }
  return {psi1, psi2};
}

std::pair<Vector, Vector> NormalFormChart::psi(const Vector& z,
                                               const Vector& u_plus,
                                               const Vector& u_minus) const {
  const Vector h = solver_.solve_h(z);
  return psi_at(z + h, solver_.problem().eval_L(z + h), u_plus, u_minus);
}

std::pair<Vector, Vector> NormalFormChart::psi_inverse(
    const Vector& z, const Vector& w_plus, const Vector& w_minus) const {
  const auto& p = solver_.problem();
  const int n = p.dim;
  if (std::isfinite(r_cap_) &&
      w_plus.squaredNorm() + w_minus.squaredNorm() > r_cap_ * r_cap_)
    throw Error("psi_inverse: target outside the certified ball (finite r)");
  const Vector h = solver_.solve_h(z);
  const Vector base = z + h;
  const double Lbase = p.eval_L(base);

  const double np = w_plus.norm();
  const double nm = w_minus.norm();
  if (np <= kZero && nm <= kZero) return {Vector::Zero(n), Vector::Zero(n)};

  if (np <= kZero) {
    // w+ = theta: invert psi2 along the H- ray through theta.
    const Vector dir = w_minus / nm;
    const double t = solve_increasing(
        [&](double tt) { return -F_with_h(base, Lbase, tt * dir); }, nm * nm,
        rootfind_tol_, "psi_inverse (minus ray)");
    return {Vector::Zero(n), t * dir};
  }

  const Vector dir = w_plus / np;
  const double t = solve_increasing(
      [&](double tt) {
        const Vector up = tt * dir;
        return F_with_h(base, Lbase, up + maximize_minus_at(base, Lbase, up));
      },
      np * np, rootfind_tol_, "psi_inverse (plus ray)");
  const Vector u_plus = t * dir;
  const Vector phi = maximize_minus_at(base, Lbase, u_plus);
  if (nm <= kZero) return {u_plus, phi};

  const double Ftop = F_with_h(base, Lbase, u_plus + phi);
  const Vector mdir = w_minus / nm;
  const double s = solve_increasing(
      [&](double ss) {
        return Ftop - F_with_h(base, Lbase, u_plus + phi + ss * mdir);
      },
      nm * nm, rootfind_tol_, "psi_inverse (minus offset)");
  return {u_plus, phi + s * mdir};
}

std::pair<Vector, double> NormalFormChart::phi_chart(const ChartPoint& p) const {
  const auto& split = solver_.split();
  const auto check = [&](const Vector& v, Part part, const char* what) {
    if ((project(split, v, part) - v).norm() > 1e-12 * std::max(1.0, v.norm()))
      throw DimensionMismatch(std::string("phi_chart: ") + what +
                              " component not in its subspace");
  };
  check(p.z, Part::zero, "kernel");
  check(p.u_plus, Part::plus, "H+");
  check(p.u_minus, Part::minus, "H-");

  const auto& prob = solver_.problem();
  const Vector h = solver_.solve_h(p.z);
  const double Lbase = prob.eval_L(p.z + h);
  const auto [u_plus, u_minus] = psi_inverse(p.z, p.u_plus, p.u_minus);
  const Vector phi = p.z + h + u_plus + u_minus;
  const double target =
      p.u_plus.squaredNorm() - p.u_minus.squaredNorm() + Lbase;
  return {phi, std::abs(prob.eval_L(phi) - target)};
}

double NormalFormChart::lambda_estimate() const {
  const auto& p = solver_.problem();
  const double a_inf = solver_.split().a_infty;
  Rng rng(99);
  double lam = 1e-9;
  for (int k = 0; k < 64; ++k) {
    const double R = working_radius_ * (k % 2 ? 2.0 : 1.0);
    const Vector x = R * unit_sphere(rng, p.dim);
    lam = std::max(lam, std::abs(p.eval_L(x) - 0.5 * p.B_inf.quad(x, x)) /
                            x.squaredNorm());
    lam = std::max(lam,
                   (p.eval_A(x) - p.B_inf.apply(x)).norm() / x.norm());
  }
  if (lam >= a_inf)
    throw MonotonicityViolation(
        "nondeg chart: lambda estimate " + std::to_string(lam) +
        " is not below a_infty = " + std::to_string(a_inf));
  return lam;
}

Vector NormalFormChart::nondeg_chart_definite(const Vector& u) const {
  const auto& split = solver_.split();
  const auto& p = solver_.problem();
  if (split.nu != 0 || split.mu != 0)
    throw ConfigParse("nondeg_chart_definite: requires nu = mu = 0");
  const double un = u.norm();
  if (un < working_radius_)
    throw Error("nondeg_chart_definite: ||u|| below the certified radius");
  const double a_inf = split.a_infty;
  const double lam = lambda_estimate();
  const Vector dir = u / un;

  // Radial monotonicity certificate (2.31) sampled on the ray.
  for (double t : {un / std::sqrt(2.0 * a_inf), un, 2.0 * un}) {
    const Vector x = t * dir;
    if (p.eval_A(x).dot(x) < a_inf * x.squaredNorm() * (1.0 - 1e-9))
      throw MonotonicityViolation(
          "nondeg_chart_definite: DL(u)u >= a_infty ||u||^2 fails on the ray");
  }

  const double t = solve_increasing(
      [&](double tt) { return p.eval_L(tt * dir); }, un * un, rootfind_tol_,
      "nondeg_chart_definite");
  const Vector phi = t * dir;
  const double lo = un / std::sqrt(2.0 * a_inf);
  const double hi = un / std::sqrt(a_inf - lam);
  if (t < lo * (1.0 - 1e-9) || t > hi * (1.0 + 1e-9))
    throw MonotonicityViolation(
        "nondeg_chart_definite: Theorem 1.8(i) norm bounds violated");
  return phi;
}

Vector NormalFormChart::nondeg_chart_indefinite(const Vector& u_plus,
                                                const Vector& v) const {
  const auto& split = solver_.split();
  const auto& p = solver_.problem();
  if (split.nu != 0 || split.mu == 0)
    throw ConfigParse("nondeg_chart_indefinite: requires nu = 0, mu > 0");
  const double np = u_plus.norm();
  if (np < working_radius_)
    throw Error("nondeg_chart_indefinite: ||u+|| below the certified radius");
  const double a_inf = split.a_infty;
  const double lam = lambda_estimate();
  const Vector zerov = Vector::Zero(p.dim);
  const Vector dir = u_plus / np;

  const double t = solve_increasing(
      [&](double tt) {
        const Vector up = tt * dir;
        return p.eval_L(up + maximize_minus_at(zerov, 0.0, up));
      },
      np * np, rootfind_tol_, "nondeg_chart_indefinite (plus ray)");
  const Vector up0 = t * dir;
  const Vector phi0 = maximize_minus_at(zerov, 0.0, up0);

  const double lo = np / std::sqrt(2.0 * p.B_inf.norm());
  const double hi = std::sqrt(a_inf - lam) * np;
  const double pplus = project(split, up0 + phi0, Part::plus).norm();
  if (pplus < lo * (1.0 - 1e-9) || pplus > hi * (1.0 + 1e-9))
    throw MonotonicityViolation(
        "nondeg_chart_indefinite: Theorem 1.8(ii) norm bounds violated");

  const double nv = v.norm();
  if (nv <= kZero) return up0 + phi0;
  const double Ltop = p.eval_L(up0 + phi0);
  const Vector mdir = v / nv;
  const double s = solve_increasing(
      [&](double ss) { return Ltop - p.eval_L(up0 + phi0 + ss * mdir); },
      nv * nv, rootfind_tol_, "nondeg_chart_indefinite (minus ray)");
  return up0 + phi0 + s * mdir;
}

std::vector<double> NormalFormChart::fiber_limit_ladder(
    const Vector& u0, const std::vector<double>& radii,
    const Vector& kernel_dir) const {
  const auto& p = solver_.problem();
  const Vector dir = kernel_dir / kernel_dir.norm();
  const double ref = 0.5 * p.B_inf.quad(u0, u0);
  std::vector<double> out;
  for (double R : radii) out.push_back(std::abs(F_infty(R * dir, u0) - ref));
  return out;
}

}  // namespace morseinf
