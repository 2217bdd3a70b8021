#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "morseinf/bvp.hpp"
#include "morseinf/rng.hpp"
#include "morseinf/spectral.hpp"
#include "morseinf/sym_operator.hpp"

using namespace morseinf;

namespace {
Matrix diag3(double a, double b, double c) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

SymOperator bvp_binf(int n_modes, double a) {
  return GalerkinBVP(n_modes, make_zero_nonlinearity(a)).assemble_problem().B_inf;
}
}  // namespace

TEST_CASE("SymOperator validation") {
  CHECK_THROWS_AS(SymOperator(Matrix::Zero(2, 3)), DimensionMismatch);
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(SymOperator{bad}, NonSymmetric);
  Matrix nan = Matrix::Zero(2, 2);
  nan(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(SymOperator{nan}, NonSymmetric);
  // within 1e-12 relative: accepted and symmetrized
  Matrix near = Matrix::Identity(2, 2);
  near(0, 1) = 1e-14;
  SymOperator s{near};
  CHECK(s.matrix()(0, 1) == s.matrix()(1, 0));
}

TEST_CASE("SymOperator serialize/parse round trip") {
  Rng rng(5);
  Matrix m = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = gaussian_vector(rng, 1)[0];
  const SymOperator s{m};
  const SymOperator t = SymOperator::parse_text(s.serialize());
  CHECK((s.matrix() - t.matrix()).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(SymOperator::parse_text(""), ConfigParse);
  CHECK_THROWS_AS(SymOperator::parse_text("1 2\n3"), ConfigParse);
  CHECK_THROWS_AS(SymOperator::parse_text("1 x\n0 1\n"), ConfigParse);
}

TEST_CASE("spectral_split diag(2,-2,0)") {
  const SpectralSplit s = spectral_split(SymOperator(diag3(2, -2, 0)), 1e-9);
  CHECK(s.nu == 1);
  CHECK(s.mu == 1);
  CHECK(s.n_plus() == 1);
  CHECK(s.a_infty == doctest::Approx(1.0));
  // kernel is the third coordinate
  CHECK(std::abs(s.basis_zero(2, 0)) == doctest::Approx(1.0));
}

TEST_CASE("spectral_split identity dim 4") {
  const SpectralSplit s =
      spectral_split(SymOperator(Matrix(Matrix::Identity(4, 4))), 1e-9);
  CHECK(s.nu == 0);
  CHECK(s.mu == 0);
  CHECK(s.n_plus() == 4);
  CHECK(s.a_infty == doctest::Approx(0.5));
}

TEST_CASE("spectral_split BVP I-4K, 6 modes") {
  const SpectralSplit s = spectral_split(bvp_binf(6, 4.0), 1e-9);
  CHECK(s.nu == 1);
  CHECK(s.mu == 1);
}

TEST_CASE("guard band violation") {
  Matrix m = diag3(2, -2, 1.5e-9);
  CHECK_THROWS_AS(spectral_split(SymOperator(m), 1e-9), GapViolation);
  CHECK_THROWS_AS(spectral_split(SymOperator(m), -1.0), ConfigParse);
}

TEST_CASE("split invariants: orthonormality, signs, quadratic forms") {
  const SymOperator B = bvp_binf(8, 4.0);
  const SpectralSplit s = spectral_split(B, 1e-9);
  Matrix full(s.dim(), s.dim());
  full << s.basis_zero, s.basis_plus, s.basis_minus;
  CHECK((full.transpose() * full - Matrix::Identity(s.dim(), s.dim()))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
  Rng rng(7);
  for (int k = 0; k < 100; ++k) {
    const Vector vp = subspace_sphere(rng, s.basis_plus, 1.0);
    CHECK(B.quad(vp, vp) >= 2.0 * s.a_infty - 1e-12);
    const Vector vm = subspace_sphere(rng, s.basis_minus, 1.0);
    CHECK(B.quad(vm, vm) <= -2.0 * s.a_infty + 1e-12);
  }
  for (int c = 0; c < s.nu; ++c)
    CHECK(B.apply(s.basis_zero.col(c)).norm() <= s.zero_tol);
}

TEST_CASE("project examples and reconstruction") {
  const SpectralSplit s = spectral_split(SymOperator(diag3(2, -2, 0)), 1e-9);
  Vector v(3);
  v << 1, 1, 1;
  const Vector pz = project(s, v, Part::zero);
  CHECK(pz[0] == doctest::Approx(0.0));
  CHECK(pz[1] == doctest::Approx(0.0));
  CHECK(pz[2] == doctest::Approx(1.0));
  CHECK(project(s, Vector(Vector::Zero(3)), Part::plus).norm() == 0.0);
  CHECK_THROWS_AS(project(s, Vector(Vector::Zero(4)), Part::zero),
                  DimensionMismatch);

  const SpectralSplit s6 = spectral_split(bvp_binf(6, 4.0), 1e-9);
  // e2 (the resonant mode) is the kernel eigenvector
  Vector e2 = Vector::Zero(6);
  e2[1] = 1.0;
  CHECK(project(s6, e2, Part::nonkernel).norm() < 1e-12);

  Rng rng(11);
  for (int k = 0; k < 20; ++k) {
    const Vector x = gaussian_vector(rng, 6);
    const Vector sum = project(s6, x, Part::zero) + project(s6, x, Part::plus) +
                       project(s6, x, Part::minus);
    CHECK((sum - x).norm() < 1e-12 * std::max(1.0, x.norm()));
  }
}

TEST_CASE("operator_constants") {
  {
    const SymOperator B{diag3(2, -2, 0)};
    const auto oc = operator_constants(B, spectral_split(B, 1e-9));
    CHECK(oc.c1_infty == doctest::Approx(0.5));
    CHECK(oc.c2_infty == 1.0);
  }
  {
    const SymOperator B = bvp_binf(6, 1.0);  // a = lambda_1
    const SpectralSplit s = spectral_split(B, 1e-9);
    const auto oc = operator_constants(B, s);
    CHECK(oc.c1_infty == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(oc.c1_infty <= 1.0 / (2.0 * s.a_infty) + 1e-9);
  }
  {
    const SymOperator B = bvp_binf(6, 4.0);  // a = lambda_2
    const auto oc = operator_constants(B, spectral_split(B, 1e-9));
    CHECK(oc.c1_infty == doctest::Approx(9.0 / 5.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(
      operator_constants(SymOperator(Matrix(Matrix::Zero(3, 3))),
                         spectral_split(SymOperator(Matrix(Matrix::Zero(3, 3))), 1e-9)),
      DegenerateComplement);
}

TEST_CASE("c1 agrees with brute-force inverse norm") {
  const SymOperator B = bvp_binf(8, 4.0);
  const SpectralSplit s = spectral_split(B, 1e-9);
  const auto oc = operator_constants(B, s);
  Rng rng(23);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Vector rhs = project(s, gaussian_vector(rng, 8), Part::nonkernel);
    if (rhs.norm() < 1e-12) continue;
    const Vector x = apply_inverse_offkernel(s, rhs);
    CHECK((B.apply(x) - rhs).norm() < 1e-10 * std::max(1.0, rhs.norm()));
    worst = std::max(worst, x.norm() / rhs.norm());
  }
  CHECK(worst <= oc.c1_infty + 1e-10);
}
