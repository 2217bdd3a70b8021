#include "morseinf/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "morseinf/rng.hpp"
#include "morseinf/threads.hpp"

namespace morseinf {

ReductionSolver::ReductionSolver(FunctionalProblem problem, SpectralSplit split,
                                 OperatorConstants consts, ContractionData cdata,
                                 double fp_tol, int max_iter)
    : problem_(std::move(problem)),
      split_(std::move(split)),
      consts_(consts),
      cdata_(cdata),
      fp_tol_(fp_tol),
      max_iter_(max_iter) {
  if (fp_tol_ <= 0.0) throw ConfigParse("ReductionSolver: fp_tol must be > 0");
  if (max_iter_ < 1) throw ConfigParse("ReductionSolver: max_iter must be >= 1");
  pm_.resize(split_.dim(), split_.dim() - split_.nu);
  pm_ << split_.basis_plus, split_.basis_minus;
}

void ReductionSolver::check_kernel_point(const Vector& z) const {
  if (z.size() != problem_.dim)
    throw DimensionMismatch("ReductionSolver: kernel point has wrong length");
  if (z.norm() < cdata_.R1 * (1.0 - 1e-12))
    throw Error("ReductionSolver: kernel point with ||z|| = " +
                std::to_string(z.norm()) + " below R1 = " +
                std::to_string(cdata_.R1));
}

Vector ReductionSolver::solve_h(const Vector& z, SolveStats* stats,
                                const Vector* start) const {
  check_kernel_point(z);
  const double factor_cap = 1.0 / cdata_.kappa + 0.05;
  Vector x = start ? project(split_, *start, Part::nonkernel)
                   : Vector(Vector::Zero(problem_.dim));
  SolveStats st;
  double prev_gap = -1.0;
  double res = kInf;
  for (int it = 0; it < max_iter_; ++it) {
    const Vector r = project(split_, problem_.eval_A(z + x), Part::nonkernel);
    res = r.norm();
    st.residual = res;
    if (res <= fp_tol_) break;

    if (res < 1e-4) {
      // Newton polish on H+- coordinates; the Picard construction has done
      // the certified contraction work by now.
      Vector y = pm_.transpose() * x;
      bool done = false;
      for (int nit = 0; nit < 50; ++nit) {
        const Vector xc = pm_ * y;
        const Vector g = pm_.transpose() * problem_.eval_A(z + xc);
        st.residual = g.norm();
        if (g.norm() <= fp_tol_) {
          x = xc;
          done = true;
          break;
        }
        const Matrix J =
            pm_.transpose() * problem_.eval_B(z + xc).matrix() * pm_;
        y -= J.fullPivLu().solve(g);
        ++st.iterations;
        if (std::isfinite(cdata_.rho_A) && (pm_ * y).norm() > cdata_.rho_A)
          throw LeftBall("solve_h: Newton polish left B(theta, rho_A)");
      }
      if (done) {
        st.newton_polished = true;
        res = st.residual;
        break;
      }
      throw NoConvergence("solve_h: Newton polish stalled", st.iterations,
                          st.residual);
    }

    const Vector step = -apply_inverse_offkernel(split_, r);
    const double gap = step.norm();
    if (prev_gap > fp_tol_) {
      const double factor = gap / prev_gap;
      st.contraction_factor = std::max(st.contraction_factor, factor);
      if (factor > factor_cap)
        throw ContractionViolated(
            "solve_h: observed contraction factor " + std::to_string(factor) +
            " exceeds 1/kappa + 0.05 = " + std::to_string(factor_cap));
    }
    prev_gap = gap;
    x += step;
    ++st.iterations;
    if (std::isfinite(cdata_.rho_A) && x.norm() > cdata_.rho_A)
      throw LeftBall("solve_h: iterate left B(theta, rho_A), ||x|| = " +
                     std::to_string(x.norm()));
  }
  if (res > fp_tol_)
    throw NoConvergence("solve_h: residual target not reached", st.iterations,
                        res);
  if (stats) *stats = st;
  return x;
}

double ReductionSolver::reduced_value(const Vector& z) const {
  return problem_.eval_L(z + solve_h(z));
}

Vector ReductionSolver::reduced_gradient(const Vector& z) const {
  return project(split_, problem_.eval_A(z + solve_h(z)), Part::zero);
}

double ReductionSolver::lipschitz_audit(int pairs, std::uint64_t seed) const {
  if (cdata_.mode != ContractionMode::E_infty)
    throw ConfigParse(
        "lipschitz_audit: requires contraction data in E-infinity mode");
  Rng rng(seed);
  std::uniform_real_distribution<double> rad(cdata_.R1, 10.0 * cdata_.R1);
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const Vector z1 = subspace_sphere(rng, split_.basis_zero, rad(rng));
    const Vector z2 = subspace_sphere(rng, split_.basis_zero, rad(rng));
    const double den = (z1 - z2).norm();
    if (den < 1e-10) continue;
    const double ratio = (solve_h(z1) - solve_h(z2)).norm() / den;
    worst = std::max(worst, ratio);
  }
  return worst;
}

CriticalPointResult ReductionSolver::find_reduced_critical_points(
    std::pair<double, double> band, int starts, std::uint64_t seed) const {
  const auto [lo, hi] = band;
  if (lo < cdata_.R1)
    throw ConfigParse("find_reduced_critical_points: band below R1");
  if (hi <= lo) throw ConfigParse("find_reduced_critical_points: empty band");
  CriticalPointResult out;
  const int nu = split_.nu;
  if (nu == 0) return out;

  auto grad_coords = [&](const Vector& zeta) {
    return Vector(split_.basis_zero.transpose() *
                  problem_.eval_A(split_.basis_zero * zeta +
                                  solve_h(split_.basis_zero * zeta)));
  };

  // Degenerate flat kernel: the reduced gradient vanishes across the whole
  // band (e.g. a purely quadratic resonant problem).
  {
    Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> rad(lo, hi);
    bool flat = true;
    for (int k = 0; k < 100 && flat; ++k) {
      const Vector zeta = rad(rng) * unit_sphere(rng, nu);
      if (grad_coords(zeta).norm() >= 10.0 * fp_tol_) flat = false;
    }
    if (flat) {
      out.degenerate_flat = true;
      return out;
    }
  }

  // Precompute starts so the result does not depend on scheduling.
  Rng rng(seed);
  std::uniform_real_distribution<double> rad(lo, hi);
  std::vector<Vector> start_pts(starts);
  for (int i = 0; i < starts; ++i)
    start_pts[i] = rad(rng) * unit_sphere(rng, nu);

  std::vector<std::vector<ReducedCriticalPoint>> hits(starts);
  parallel_for(starts, [&](int i) {
    try {
      Vector zeta = start_pts[i];
      const double fd = 1e-6;
      for (int it = 0; it < 100; ++it) {
        const Vector g = grad_coords(zeta);
        if (g.norm() <= fp_tol_) break;
        Matrix J(nu, nu);
        for (int j = 0; j < nu; ++j) {
          Vector e = Vector::Zero(nu);
          e[j] = fd * std::max(1.0, zeta.norm());
          J.col(j) = (grad_coords(zeta + e) - grad_coords(zeta - e)) /
                     (2.0 * e[j]);
        }
        Vector step = -J.fullPivLu().solve(g);
        if (!step.allFinite()) break;
        // Armijo backtracking on ||g||^2
        const double f0 = g.squaredNorm();
        double t = 1.0;
        bool moved = false;
        for (int half = 0; half < 30; ++half) {
          const Vector cand = zeta + t * step;
          if (cand.norm() >= lo * 0.999) {
            if (grad_coords(cand).squaredNorm() < f0) {
              zeta = cand;
              moved = true;
              break;
            }
          }
          t *= 0.5;
        }
        if (!moved) break;
      }
      const Vector g = grad_coords(zeta);
      const double zn = zeta.norm();
      if (g.norm() <= fp_tol_ && zn >= lo && zn <= hi) {
        const Vector z = split_.basis_zero * zeta;
        const Vector h = solve_h(z);
        const double full = problem_.eval_A(z + h).norm();
        if (full <= 10.0 * fp_tol_) {
          ReducedCriticalPoint cp;
          cp.z = z;
          cp.h = h;
          cp.full_point = z + h;
          cp.grad_norm = full;
          hits[i].push_back(std::move(cp));
        }
      }
    } catch (const Error&) {
      // a failed start is simply not a hit
    }
  });

  std::vector<ReducedCriticalPoint> all;
  for (auto& v : hits)
    for (auto& cp : v) all.push_back(std::move(cp));
  std::sort(all.begin(), all.end(),
            [](const ReducedCriticalPoint& a, const ReducedCriticalPoint& b) {
              for (int i = 0; i < a.z.size(); ++i) {
                if (a.z[i] != b.z[i]) return a.z[i] < b.z[i];
              }
              return false;
            });
  for (auto& cp : all) {
    bool dup = false;
    for (const auto& kept : out.points)
      if ((kept.z - cp.z).norm() <= 1e-6) dup = true;
    if (!dup) out.points.push_back(std::move(cp));
  }
  return out;
}

std::vector<double> ReductionSolver::decay_audit(
    const std::vector<double>& radii, int directions,
    std::uint64_t seed) const {
  for (size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < cdata_.R1)
      throw ConfigParse("decay_audit: radii must be >= R1");
    if (i && radii[i] <= radii[i - 1])
      throw ConfigParse("decay_audit: radii must be increasing");
  }
  Rng rng(seed);
  std::vector<Vector> dirs;
  for (int k = 0; k < directions; ++k)
    dirs.push_back(split_.nu > 0 ? Vector(split_.basis_zero *
                                          unit_sphere(rng, split_.nu))
                                 : Vector(Vector::Zero(problem_.dim)));
  std::vector<double> out;
  for (double R : radii) {
    double worst = 0.0;
    for (const auto& d : dirs)
      if (d.norm() > 0.5) worst = std::max(worst, solve_h(R * d).norm());
    out.push_back(worst);
  }
  return out;
}

}  // namespace morseinf
