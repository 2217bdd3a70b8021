#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "morseinf/models.hpp"
#include "morseinf/normal_form.hpp"
#include "morseinf/rng.hpp"

using namespace morseinf;

namespace {

ReductionSolver make_solver(const FunctionalProblem& p,
                            ContractionMode mode = ContractionMode::E_prime_infty,
                            double trial_rho = 1.0) {
  const auto s = spectral_split(p.B_inf, 1e-9);
  const auto oc = operator_constants(p.B_inf, s);
  const auto cd = estimate_contraction(p, s, oc, 2.0, trial_rho,
                                       std::max(p.infinity_radius, 10.0), 50,
                                       mode, 5);
  return ReductionSolver(p, s, oc, cd);
}

// nu = 0 problems cannot certify contraction data over the kernel; build the
// solver shell directly.
ReductionSolver make_nondeg_solver(const FunctionalProblem& p) {
  const auto s = spectral_split(p.B_inf, 1e-9);
  const auto oc = operator_constants(p.B_inf, s);
  ContractionData cd;
  cd.R1 = p.infinity_radius;
  return ReductionSolver(p, s, oc, cd);
}

Vector kernel3(double z) {
  Vector v = Vector::Zero(3);
  v[0] = z;
  return v;
}

Vector e(int i, double v = 1.0) {
  Vector x = Vector::Zero(3);
  x[i] = v;
  return x;
}

FunctionalProblem quad_diag(double k0, double k1, double k2, double R = 10.0) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = k0;
  m(1, 1) = k1;
  m(2, 2) = k2;
  return make_quadratic_model(SymOperator(std::move(m)), R);
}

}  // namespace

TEST_CASE("trig chart runs in the r = inf regime with a1 = 2") {
  const NormalFormChart chart(make_solver(make_trig_model()), 10.0);
  CHECK(chart.r_cap() == kInf);
  CHECK(chart.a1() == doctest::Approx(2.0));
  CHECK(chart.a1() <= 2.0 * chart.solver().split().a_infty);
}

TEST_CASE("F_infty closed forms") {
  const NormalFormChart chart(make_solver(make_trig_model()), 10.0);
  const Vector z = kernel3(12.0);
  CHECK(chart.F_infty(z, Vector(Vector::Zero(3))) == 0.0);
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    const double up = gaussian_vector(rng, 1)[0];
    const double um = gaussian_vector(rng, 1)[0];
    const Vector u = e(1, up) + e(2, um);
    CHECK(chart.F_infty(z, u) ==
          doctest::Approx(up * up - um * um).epsilon(1e-10));
  }

  const NormalFormChart qc(make_solver(quad_diag(0.0, 2.0, -2.0)), 10.0);
  const Vector u = e(1, 0.7) + e(2, -0.3);
  CHECK(qc.F_infty(z, u) ==
        doctest::Approx(0.5 * (2.0 * 0.49 - 2.0 * 0.09)).epsilon(1e-12));
}

TEST_CASE("maximize_minus") {
  const NormalFormChart trig(make_solver(make_trig_model()), 10.0);
  const Vector z = kernel3(11.0);
  CHECK(trig.maximize_minus(z, Vector(Vector::Zero(3))).norm() <= 1e-10);
  CHECK(trig.maximize_minus(z, e(1, 0.5)).norm() <= 1e-10);

  const double c = 0.1;
  const NormalFormChart cc(make_solver(make_coupled_model(c)), 10.0);
  for (double up : {0.2, 1.0, -0.8}) {
    const Vector phi = cc.maximize_minus(z, e(1, up));
    CHECK(phi[2] == doctest::Approx(c * up / 2.0).epsilon(1e-9));
    // stationarity of the returned maximizer
    const auto& p = cc.solver().problem();
    const Vector x = z + e(1, up) + phi;
    CHECK(project(cc.solver().split(), p.eval_A(x), Part::minus).norm() <= 1e-9);
    // Lemma 2.8(ii)-style growth bound, r = inf regime
    const double Bn = p.B_inf.norm();
    const double ai = cc.solver().split().a_infty;
    const double h2 = cc.solver().solve_h(z).squaredNorm();
    CHECK(phi.squaredNorm() <= 8.0 / ai * Bn * up * up + 4.0 * z.squaredNorm() +
                                   16.0 * Bn * Bn / (ai * ai) * h2);
  }
}

TEST_CASE("maximize_minus detects a concavity breach") {
  FunctionalProblem p = make_coupled_model(0.1);
  // flip the H- curvature: the fiber is no longer concave over H-
  p.eval_L = [](const Vector& x) {
    return x[1] * x[1] + 0.001 * x[2] * x[2];
  };
  p.eval_A = [](const Vector& x) {
    Vector a = Vector::Zero(3);
    a[1] = 2.0 * x[1];
    a[2] = 0.002 * x[2];
    return a;
  };
  p.eval_B = [](const Vector&) {
    Matrix b = Matrix::Zero(3, 3);
    b(1, 1) = 2.0;
    b(2, 2) = 0.002;
    return SymOperator(std::move(b));
  };
  const auto s = spectral_split(make_coupled_model(0.1).B_inf, 1e-9);
  const auto oc = operator_constants(make_coupled_model(0.1).B_inf, s);
  ContractionData cd;
  cd.R1 = 10.0;
  const ReductionSolver rs(p, s, oc, cd);
  CHECK_THROWS_AS(NormalFormChart(rs, 10.0), morseinf::Error);
}

TEST_CASE("psi closed forms") {
  const Vector z = kernel3(12.0);
  {
    const NormalFormChart chart(make_solver(quad_diag(0.0, 8.0, -2.0)), 10.0);
    // F = 4 u+^2 - u-^2: psi(u+, v) = (2 u+, v)
    const auto [p1, p2] = chart.psi(z, e(1, 0.3), e(2, -0.4));
    CHECK((p1 - e(1, 0.6)).norm() < 1e-10);
    CHECK((p2 - e(2, -0.4)).norm() < 1e-10);
    const auto [q1, q2] = chart.psi(z, Vector(Vector::Zero(3)),
                                    Vector(Vector::Zero(3)));
    CHECK(q1.norm() == 0.0);
    CHECK(q2.norm() == 0.0);
  }
  {
    const NormalFormChart chart(make_solver(make_trig_model()), 10.0);
    Rng rng(13);
    for (int k = 0; k < 50; ++k) {
      const Vector up = e(1, gaussian_vector(rng, 1)[0]);
      const Vector um = e(2, gaussian_vector(rng, 1)[0]);
      const auto [p1, p2] = chart.psi(z, up, um);
      CHECK((p1 - up).norm() < 1e-9);
      CHECK((p2 - um).norm() < 1e-9);
      // defining identity F = ||psi1||^2 - ||psi2||^2
      CHECK(std::abs(chart.F_infty(z, up + um) -
                     (p1.squaredNorm() - p2.squaredNorm())) < 1e-10);
    }
  }
}

TEST_CASE("psi_inverse closed forms and round trips") {
  const Vector z = kernel3(12.0);
  {
    const NormalFormChart chart(make_solver(quad_diag(0.0, 8.0, -2.0)), 10.0);
    const auto [u, v] = chart.psi_inverse(z, e(1, 0.8), e(2, 0.6));
    CHECK((u - e(1, 0.4)).norm() < 1e-9);
    CHECK((v - e(2, 0.6)).norm() < 1e-9);
    const auto [u0, v0] = chart.psi_inverse(z, Vector(Vector::Zero(3)),
                                            Vector(Vector::Zero(3)));
    CHECK(u0.norm() == 0.0);
    CHECK(v0.norm() == 0.0);
  }
  {
    const NormalFormChart chart(make_solver(make_trig_model()), 10.0);
    Rng rng(19);
    for (int k = 0; k < 100; ++k) {
      const Vector up = e(1, gaussian_vector(rng, 1)[0]);
      const Vector um = e(2, gaussian_vector(rng, 1)[0]);
      const auto [w1, w2] = chart.psi(z, up, um);
      const auto [b1, b2] = chart.psi_inverse(z, w1, w2);
      CHECK((b1 - up).norm() < 1e-8);
      CHECK((b2 - um).norm() < 1e-8);
      const auto [f1, f2] = chart.psi(z, b1, b2);
      CHECK((f1 - w1).norm() < 1e-8);
      CHECK((f2 - w2).norm() < 1e-8);
    }
  }
}

TEST_CASE("phi_chart identity and residual") {
  const NormalFormChart chart(make_solver(make_trig_model()), 10.0);
  const Vector z = kernel3(13.0);
  {
    ChartPoint p;
    p.z = z;
    p.u_plus = Vector::Zero(3);
    p.u_minus = Vector::Zero(3);
    const auto [phi, resid] = chart.phi_chart(p);
    CHECK((phi - z - chart.solver().solve_h(z)).norm() < 1e-12);
    CHECK(resid < 1e-12);
  }
  Rng rng(23);
  for (int k = 0; k < 50; ++k) {
    ChartPoint p;
    p.z = kernel3((k % 2 ? -1.0 : 1.0) * (10.0 + k * 0.3));
    p.u_plus = e(1, gaussian_vector(rng, 1)[0]);
    p.u_minus = e(2, gaussian_vector(rng, 1)[0]);
    CHECK(chart.phi_chart(p).second <= 1e-10);
  }
  ChartPoint bad;
  bad.z = kernel3(12.0);
  bad.u_plus = e(2, 0.5);  // H- vector declared as H+
  bad.u_minus = Vector::Zero(3);
  CHECK_THROWS_AS(chart.phi_chart(bad), DimensionMismatch);
}

TEST_CASE("sign bounds (2.20)/(2.21) on the trig chart") {
  const NormalFormChart chart(make_solver(make_trig_model()), 10.0);
  Rng rng(31);
  for (int k = 0; k < 100; ++k) {
    const Vector z = kernel3((k % 2 ? -1.0 : 1.0) * (10.0 + 0.1 * k));
    const double t = gaussian_vector(rng, 1)[0];
    CHECK(chart.F_infty(z, e(1, t)) >=
          chart.a1() / 4.0 * t * t - 1e-12);
    CHECK(chart.F_infty(z, e(2, t)) <=
          -chart.solver().split().a_infty / 4.0 * t * t + 1e-12);
  }
}

TEST_CASE("fiber limit ladder (Lemma 2.7(i))") {
  const NormalFormChart chart(make_solver(make_trig_model()), 10.0);
  const Vector u0 = e(1, 0.4) + e(2, 0.3);
  const auto vals =
      chart.fiber_limit_ladder(u0, {10.0, 100.0, 1000.0, 10000.0}, e(0));
  REQUIRE(vals.size() == 4);
  for (size_t i = 1; i < vals.size(); ++i)
    CHECK(vals[i] <= vals[i - 1] * 1.1 + 1e-9);
  CHECK(vals.back() <= 1e-3);
}

TEST_CASE("nondeg_chart_definite (Theorem 1.8(i))") {
  {
    // L = a||u||^2, a = 2, dim 6: phi(u) = u/sqrt(2)
    const auto p = make_definite_model(2.0, 6, 1.0);
    const NormalFormChart chart(make_nondeg_solver(p), 1.0);
    Rng rng(37);
    for (int k = 0; k < 25; ++k) {
      const Vector u = (1.0 + k * 0.5) * unit_sphere(rng, 6);
      const Vector phi = chart.nondeg_chart_definite(u);
      CHECK((phi - u / std::sqrt(2.0)).norm() < 1e-9 * u.norm());
      CHECK(std::abs(p.eval_L(phi) - u.squaredNorm()) <= 1e-10 * u.squaredNorm());
      const double ai = chart.solver().split().a_infty;
      CHECK(phi.norm() >= u.norm() / std::sqrt(2.0 * ai) * (1.0 - 1e-9));
      CHECK(phi.norm() <= u.norm() / std::sqrt(ai) * (1.0 + 1e-6));
    }
  }
  {
    // L = 1/2 (B u, u) with B = 2I: phi(u) = u
    const auto p = make_definite_model(1.0, 4, 1.0);
    const NormalFormChart chart(make_nondeg_solver(p), 1.0);
    Vector u(4);
    u << 3.0, -1.0, 2.0, 0.5;
    CHECK((chart.nondeg_chart_definite(u) - u).norm() < 1e-9);
  }
  {
    // perturbed definite quadratic at ||u|| = 50
    FunctionalProblem p;
    p.dim = 3;
    p.name = "perturbed_definite";
    p.B_inf = SymOperator(Matrix(2.0 * Matrix::Identity(3, 3)));
    p.infinity_radius = 30.0;
    p.eval_L = [](const Vector& x) {
      const double r = x.norm();
      return r * r + std::sin(r) / r;
    };
    p.eval_A = [](const Vector& x) {
      const double r = x.norm();
      const double d = (std::cos(r) * r - std::sin(r)) / (r * r);
      return Vector(2.0 * x + d / r * x);
    };
    p.eval_B = [](const Vector& x) {
      // exact Hessian of sin(r)/r via the radial formulas
      const double r = x.norm();
      const double f1 = (std::cos(r) * r - std::sin(r)) / (r * r);
      const double f2 = -std::sin(r) / r - 2.0 * f1 / r;
      const Matrix P = x * x.transpose() / (r * r);
      Matrix m = 2.0 * Matrix::Identity(3, 3) + f1 / r * (Matrix::Identity(3, 3) - P) + f2 * P;
      return SymOperator(std::move(m));
    };
    const NormalFormChart chart(make_nondeg_solver(p), 30.0);
    Rng rng(41);
    const Vector u = 50.0 * unit_sphere(rng, 3);
    const Vector phi = chart.nondeg_chart_definite(u);
    CHECK(std::abs(p.eval_L(phi) - u.squaredNorm()) <= 1e-8 * u.squaredNorm());
  }
  const auto p = make_definite_model(2.0, 6, 1.0);
  const NormalFormChart chart(make_nondeg_solver(p), 1.0);
  CHECK_THROWS_AS(chart.nondeg_chart_definite(Vector(Vector::Zero(6))),
                  morseinf::Error);
}

TEST_CASE("nondeg_chart_indefinite (Theorem 1.8(ii))") {
  {
    // L = u+^2 - 1.5 u-^2 from B = diag(2, 2, -3)
    const auto p = quad_diag(2.0, 2.0, -3.0, 1.0);
    const NormalFormChart chart(make_nondeg_solver(p), 1.0);
    const auto& s = chart.solver().split();
    REQUIRE(s.nu == 0);
    REQUIRE(s.mu == 1);
    Rng rng(43);
    for (int k = 0; k < 20; ++k) {
      const Vector up = subspace_sphere(rng, s.basis_plus, 1.5 + 0.4 * k);
      const Vector v = subspace_ball(rng, s.basis_minus, 2.0);
      const Vector out = chart.nondeg_chart_indefinite(up, v);
      CHECK(std::abs(p.eval_L(out) - (up.squaredNorm() - v.squaredNorm())) <=
            1e-8 * std::max(1.0, up.squaredNorm()));
    }
  }
  {
    // scaled diagonal L = 2 u+^2 - 3 u-^2: P+ component is u+/sqrt(2)
    const auto p = quad_diag(4.0, 4.0, -6.0, 1.0);
    const NormalFormChart chart(make_nondeg_solver(p), 1.0);
    const auto& s = chart.solver().split();
    Vector up = Vector::Zero(3);
    up[0] = 3.0;
    const Vector out =
        chart.nondeg_chart_indefinite(up, Vector(Vector::Zero(3)));
    CHECK((project(s, out, Part::plus) - up / std::sqrt(2.0)).norm() < 1e-9);
  }
}
