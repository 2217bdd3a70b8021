#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "morseinf/audits.hpp"
#include "morseinf/bvp.hpp"
#include "morseinf/rng.hpp"

using namespace morseinf;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("construction guards") {
  CHECK_THROWS_AS(GalerkinBVP(1, make_zero_nonlinearity(2.0)), ConfigParse);
  CHECK_THROWS_AS(GalerkinBVP(8, make_zero_nonlinearity(2.0), 16),
                  QuadratureUnderflow);
}

TEST_CASE("basis is H^1_0-orthonormal; K is diagonal") {
  const GalerkinBVP g(6, make_zero_nonlinearity(2.0));
  // (K phi_i, phi_j)_{H^1_0} = integral phi_i phi_j dx = delta_ij / lambda_i
  const auto& w = g.weights();
  for (int i = 1; i <= 6; ++i) {
    for (int j = 1; j <= 6; ++j) {
      Vector ci = Vector::Zero(6), cj = Vector::Zero(6);
      ci[i - 1] = 1.0;
      cj[j - 1] = 1.0;
      const Vector ui = g.values_at_nodes(ci), uj = g.values_at_nodes(cj);
      double val = 0.0;
      for (size_t k = 0; k < w.size(); ++k)
        val += w[k] * ui[static_cast<int>(k)] * uj[static_cast<int>(k)];
      const double expect = (i == j) ? 1.0 / g.lambda(i) : 0.0;
      CHECK(val == doctest::Approx(expect).epsilon(1e-10));
    }
  }
}

TEST_CASE("assemble_problem: zero nonlinearity is the pure quadratic") {
  const GalerkinBVP g(6, make_zero_nonlinearity(2.0));
  const auto p = g.assemble_problem();
  for (int j = 0; j < 6; ++j)
    CHECK(p.B_inf.matrix()(j, j) ==
          doctest::Approx(1.0 - 2.0 / ((j + 1.0) * (j + 1.0))).epsilon(1e-15));
  Rng rng(3);
  for (int k = 0; k < 10; ++k) {
    const Vector c = gaussian_vector(rng, 6);
    CHECK(p.eval_L(c) == doctest::Approx(0.5 * p.B_inf.quad(c, c)).epsilon(1e-12));
    CHECK((p.eval_A(c) - p.B_inf.apply(c)).norm() < 1e-12);
  }
}

TEST_CASE("assembled problem passes the gradient/Hessian audits") {
  const GalerkinBVP g(8, make_default_nonlinearity(1.0));
  const auto p = g.assemble_problem();
  const auto gr = audit_gradient(p, 50, 1);
  CHECK(gr.entries[0].pass);
  const auto he = audit_hessian(p, 50, 1);
  CHECK(he.entries[0].pass);
}

TEST_CASE("quadrature convergence: doubling nodes is a 1e-9 no-op") {
  const GalerkinBVP g(8, make_default_nonlinearity(1.0));
  const GalerkinBVP g2 = g.with_quad_nodes(2 * g.quad_nodes());
  const auto p = g.assemble_problem();
  const auto p2 = g2.assemble_problem();
  Rng rng(5);
  for (int k = 0; k < 10; ++k) {
    const Vector c = gaussian_vector(rng, 8);
    CHECK(std::abs(p.eval_L(c) - p2.eval_L(c)) <= 1e-9);
  }
}

TEST_CASE("morse_data index table") {
  const GalerkinBVP g(16, make_zero_nonlinearity(1.0));
  {
    const MorseData md = morse_data(g, 1.0);
    CHECK(md.nu == 1);
    CHECK(md.mu == 0);
    CHECK(md.m_minus == 1);
    CHECK(md.m_plus == 1);
  }
  {
    const MorseData md = morse_data(g, 0.5);
    CHECK(md.nu == 0);
    CHECK(md.mu == 0);
  }
  {
    const MorseData md = morse_data(g, 2.5);
    CHECK(md.nu == 0);
    CHECK(md.mu == 1);
  }
  {
    const MorseData md = morse_data(g, 4.0);
    CHECK(md.nu == 1);
    CHECK(md.mu == 1);
    CHECK(md.m_minus == 2);
  }
  {
    const MorseData md = morse_data(g, 9.0);
    CHECK(md.nu == 1);
    CHECK(md.mu == 2);
  }
  CHECK_THROWS_AS(morse_data(g, 1.0 + 1e-10), GuardBand);
}

TEST_CASE("morse_data agrees with spectral_split over a grid") {
  for (double a : {0.5, 1.0, 2.5, 4.0, 9.0, 12.0}) {
    const GalerkinBVP g(16, make_zero_nonlinearity(a));
    const MorseData md = morse_data(g, a);
    const SpectralSplit s =
        spectral_split(g.assemble_problem().B_inf, 1e-9);
    CHECK(md.nu == s.nu);
    CHECK(md.mu == s.mu);
  }
}

TEST_CASE("c1_infinity values and the Lemma 4.8 discrepancy flag") {
  const GalerkinBVP g(8, make_zero_nonlinearity(1.0));
  CHECK(c1_infinity(g, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(c1_infinity(g, 4.0) == doctest::Approx(9.0 / 5.0).epsilon(1e-14));
  CHECK(c1_infinity(g, 9.0) == doctest::Approx(16.0 / 7.0).epsilon(1e-14));
  CHECK(!c1_infinity_detail(g, 1.0).discrepancy);
  CHECK(!c1_infinity_detail(g, 4.0).discrepancy);
  // m = 3: the closed form as printed gives 4/3, the eigenvalue oracle 16/7
  const C1Detail d3 = c1_infinity_detail(g, 9.0);
  CHECK(d3.discrepancy);
  CHECK(d3.closed_form == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(c1_infinity(g, 2.5), NotResonant);
  // agreement with the generic operator constant
  const auto p = g.assemble_problem();
  const auto oc = operator_constants(p.B_inf, spectral_split(p.B_inf, 1e-9));
  CHECK(std::abs(c1_infinity(g, 1.0) - oc.c1_infty) <= 1e-12);
}

TEST_CASE("embedding constant") {
  const auto e64 =
      embedding_constant(GalerkinBVP(64, make_zero_nonlinearity(2.0)));
  // sqrt(pi)/2 = 0.8862; the 64-mode truncation sits slightly below
  CHECK(e64.value == doctest::Approx(std::sqrt(kPi) / 2.0).epsilon(0.006));
  // restarts land on different local maxima of x -> ||b(x)||; the spread is
  // a diagnostic, not a convergence certificate
  CHECK(e64.restart_spread >= 0.0);
  CHECK(e64.restart_spread < 0.25);
  const auto e2 =
      embedding_constant(GalerkinBVP(2, make_zero_nonlinearity(2.0)));
  CHECK(e2.value < e64.value);  // nested maximization domains
  CHECK(e2.value > std::sqrt(2.0 / kPi) - 1e-6);  // at least mode 1 alone
}

TEST_CASE("check_resonance_conditions: default nonlinearity at a = lambda_1") {
  const GalerkinBVP g(8, make_default_nonlinearity(1.0));
  const auto rep = check_resonance_conditions(g);
  CHECK(rep.find("spec_consistency")->pass);
  CHECK(rep.find("cond_4_14")->pass);  // hbar = 0
  CHECK(rep.find("cond_4_15")->pass);
  CHECK(rep.find("claim_4_4_decay")->pass);
  const auto* emb = rep.find("embedding_constant");
  REQUIRE(emb != nullptr);
  CHECK(emb->worst_value == doctest::Approx(std::sqrt(kPi) / 2.0).epsilon(0.0023));
}

TEST_CASE("check_resonance_conditions: oscillating nonlinearity fails") {
  const GalerkinBVP g(8, make_oscillating_nonlinearity(1.0));
  const auto rep = check_resonance_conditions(g);
  CHECK(!rep.find("cond_4_14")->pass);  // hbar = 2 beats the eigenvalue gap
  CHECK(!rep.find("cond_4_15")->pass);  // ||ell||_1 * ||h||_inf = 2*pi >= 1/c^2
}

TEST_CASE("solve_bvp: nonresonant linear problem has only theta") {
  const GalerkinBVP g(8, make_zero_nonlinearity(2.5));
  const auto sols = solve_bvp(g, BvpScenario::direct, 16, 7);
  REQUIRE(sols.size() == 1);
  CHECK(!sols[0].nontrivial);
  CHECK(sols[0].norm_H <= 1e-10);
  CHECK(sols[0].grad_norm <= 1e-8);
}

TEST_CASE("solve_bvp: Theorem 4.7(a) scenario finds a nontrivial solution") {
  const GalerkinBVP g(8, make_interpolating_nonlinearity(0.5, 2.5));
  const auto sols = solve_bvp(g, BvpScenario::theorem_4_7_a, 32, 7);
  bool found = false;
  for (const auto& s : sols) {
    CHECK(s.grad_norm <= 1e-8);
    if (s.nontrivial) {
      found = true;
      CHECK(s.quad_shift <= 1e-7);
      // oddness: -u is a solution too
      const auto p = g.assemble_problem();
      CHECK(p.eval_A(Vector(-s.coeffs)).norm() <= 1e-8);
    }
  }
  CHECK(found);
}

TEST_CASE("solve_bvp scenario validation") {
  // a0 == a: no eigenvalue strictly between
  const GalerkinBVP g(8, make_interpolating_nonlinearity(2.5, 2.5));
  CHECK_THROWS_AS(solve_bvp(g, BvpScenario::theorem_4_7_a, 4, 7),
                  ScenarioMismatch);
  // scenario b needs a0 on the spectrum
  const GalerkinBVP gb(8, make_interpolating_nonlinearity(0.5, 2.5));
  CHECK_THROWS_AS(solve_bvp(gb, BvpScenario::theorem_4_7_b, 4, 7),
                  ScenarioMismatch);
}

TEST_CASE("table nonlinearity interpolates its own nodes") {
  std::vector<std::array<double, 4>> rows;
  for (int i = -40; i <= 40; ++i) {
    const double t = 0.25 * i;
    rows.push_back({t, std::tanh(t), 1.0 / std::cosh(t) / std::cosh(t),
                    std::log(std::cosh(t))});
  }
  const auto sp = make_table_nonlinearity(rows, 2.0);
  CHECK(sp.q(0.5, 1.0) == doctest::Approx(std::tanh(1.0)).epsilon(1e-12));
  CHECK(sp.q(0.5, 1.1) == doctest::Approx(std::tanh(1.1)).epsilon(1e-3));
  CHECK(sp.q(0.5, 1000.0) == doctest::Approx(std::tanh(10.0)).epsilon(1e-6));
  CHECK(sp.a0 == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_THROWS_AS(make_table_nonlinearity({{0.0, 0.0, 1.0, 0.0}}, 2.0),
                  ConfigParse);
}
