// Copyright (c) the tworay developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tworay/extension.hpp"
#include "tworay/sampling.hpp"

using namespace tworay;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

// 1x1 model with vanishing coefficients and W = e^{i phi}.
ExtensionSpec scalar_model(double phi, double a = 0.0, double b = 1.0) {
  Matrix w(1, 1);
  w << std::exp(Complex(0.0, phi));
  SignedCoefficientPair coeffs(spectral_decompose(Matrix::Zero(1, 1)),
                               spectral_decompose(Matrix::Zero(1, 1)));
  return build_extension(coeffs, UnitaryMap(w), a, b);
}

// A1 = diag(0, -1), A2 = diag(0, 2), W = I.
ExtensionSpec coupled_model() {
  SignedCoefficientPair coeffs(spectral_decompose(diag2(0.0, -1.0)),
                               spectral_decompose(diag2(0.0, 2.0)));
  return build_extension(coeffs, UnitaryMap(Matrix::Identity(2, 2)), 0.0, 1.0);
}

Vector unit2(int which) {
  Vector v = Vector::Zero(2);
  v(which) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("build_extension flags and admissible subspace") {
  const ExtensionSpec s1 = scalar_model(0.4);
  CHECK(s1.dim_k() == 1);
  CHECK(s1.normal_extension_possible());
  CHECK_FALSE(s1.maximal_normal());

  const ExtensionSpec s2 = coupled_model();
  CHECK(s2.dim_k() == 1);
  CHECK(std::abs(std::abs(s2.k_basis().col(0)(0)) - 1.0) <= 1e-10);
  CHECK(s2.normal_extension_possible());

  // Injective A1 leaves no admissible traces at all.
  SignedCoefficientPair injective(spectral_decompose(diag2(-1.0, -2.0)),
                                  spectral_decompose(diag2(0.0, 2.0)));
  const ExtensionSpec s3 =
      build_extension(injective, UnitaryMap(Matrix::Identity(2, 2)), 0.0, 1.0);
  CHECK(s3.dim_k() == 0);
  CHECK(s3.maximal_normal());
  CHECK_FALSE(s3.normal_extension_possible());

  // Unequal kernel ranks rule a normal extension out.
  SignedCoefficientPair unequal(spectral_decompose(Matrix::Zero(2, 2)),
                                spectral_decompose(diag2(0.0, 2.0)));
  const ExtensionSpec s4 =
      build_extension(unequal, UnitaryMap(Matrix::Identity(2, 2)), 0.0, 1.0);
  CHECK_FALSE(s4.normal_extension_possible());

  CHECK_THROWS_AS(build_extension(unequal, UnitaryMap(Matrix::Identity(2, 2)), 1.0, 0.0), Error);
}

TEST_CASE("K sits inside both kernels") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix raw(3, 3);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) raw(r, c) = Complex(g(rng), g(rng));
    const Matrix q = Eigen::HouseholderQR<Matrix>(raw).householderQ();
    Matrix a1 = Matrix::Zero(3, 3);
    a1(2, 2) = -1.5;
    Matrix a2 = Matrix::Zero(3, 3);
    a2(1, 1) = 0.5;
    a2(2, 2) = 2.5;
    const ExtensionSpec spec =
        build_extension(SignedCoefficientPair(spectral_decompose(a1), spectral_decompose(a2)),
                        UnitaryMap(q), 0.0, 1.0);
    const Matrix& k = spec.k_basis();
    if (k.cols() == 0) continue;
    CHECK(((Matrix::Identity(3, 3) - spec.p1()) * k).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(((Matrix::Identity(3, 3) - spec.p2()) * (q * k)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("apply_expression") {
  const ExtensionSpec s1 = scalar_model(M_PI / 2);
  const GridSpec grid{20.0, 2001};
  const int m = grid.m;
  RayFunction left = make_uniform(Ray::left, 0.0, grid.truncation, m, [](double t) {
    Vector v(1);
    v << std::exp(t);
    return v;
  });
  RayFunction right = make_uniform(Ray::right, 1.0, grid.truncation, m, [](double t) {
    Vector v(1);
    v << std::exp(1.0 - t);
    return v;
  });
  const TwoRayFunction u(left, right);
  const TwoRayFunction lu = apply_expression(s1, u, ExpressionVariant::direct);
  CHECK((lu.left.values() - u.left.values()).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK((lu.right.values() + u.right.values()).cwiseAbs().maxCoeff() <= 1e-6);
  const TwoRayFunction lplus = apply_expression(s1, u, ExpressionVariant::adjoint);
  CHECK((lplus.left.values() + u.left.values()).cwiseAbs().maxCoeff() <= 1e-6);

  // Constant function: the derivative term drops out exactly at interior nodes.
  const ExtensionSpec s2 = coupled_model();
  Vector c(2);
  c << Complex(0.7, -0.2), Complex(-1.1, 0.4);
  RayFunction const_left =
      make_uniform(Ray::left, 0.0, 5.0, 501, [&](double) { return c; });
  RayFunction const_right =
      make_uniform(Ray::right, 1.0, 5.0, 501, [&](double) { return c; });
  const TwoRayFunction uc(const_left, const_right);
  const TwoRayFunction luc = apply_expression(s2, uc, ExpressionVariant::direct);
  const Vector a1c = s2.coeffs().a1().apply(c);
  for (int i = 100; i < 400; i += 50) {
    CHECK((luc.left.values().row(i).transpose() - a1c).norm() <= 1e-12);
  }
}

TEST_CASE("propagator profile is an eigenfunction of the expression") {
  const ExtensionSpec s2 = coupled_model();
  const Complex lambda(2.0, 0.5);
  const double a = s2.a();
  const int m = 4001;
  // Components along both eigenvectors; each evolves with its own rate.
  RayFunction left = make_uniform(Ray::left, a, 10.0, m, [&](double t) {
    Vector v(2);
    v(0) = std::exp(lambda * (t - a));          // alpha = 0
    v(1) = std::exp((lambda + 1.0) * (t - a));  // alpha = -1
    return v;
  });
  RayFunction right = make_zero(Ray::right, s2.b(), 10.0, m, 2);
  const TwoRayFunction u(left, right);
  const TwoRayFunction lu = apply_expression(s2, u, ExpressionVariant::direct);
  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    worst = std::max(worst, (lu.left.values().row(i) - lambda * u.left.values().row(i)).norm());
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("domain_check") {
  const ExtensionSpec s2 = coupled_model();
  const GridSpec grid{40.0, 0};
  std::mt19937_64 rng(41);

  const TwoRayFunction good = random_domain_function(s2, grid, rng);
  const DomainReport in = domain_check(s2, good, 1e-8);
  CHECK(in.in_domain);

  // Coupling broken: right trace no longer equals W u1(a).
  const Vector ua = s2.k_basis().col(0);
  const TwoRayFunction bad_coupling =
      function_with_traces(s2, ua, (2.0 * s2.w().apply(ua)).eval(), grid, rng);
  const DomainReport rep = domain_check(s2, bad_coupling, 1e-8);
  CHECK_FALSE(rep.in_domain);
  CHECK(rep.reasons == std::vector<std::string>{"coupling"});

  // Left trace outside the kernel.
  const TwoRayFunction bad_kernel =
      function_with_traces(s2, unit2(1), Vector::Zero(2).eval(), grid, rng);
  const DomainReport rep2 = domain_check(s2, bad_kernel, 1e-8);
  CHECK_FALSE(rep2.in_domain);
  CHECK(std::find(rep2.reasons.begin(), rep2.reasons.end(), "left kernel") !=
        rep2.reasons.end());
}

TEST_CASE("normality_residual on and off the domain") {
  const ExtensionSpec s2 = coupled_model();
  const GridSpec grid{40.0, 0};
  std::mt19937_64 rng(43);

  for (int trial = 0; trial < 10; ++trial) {
    const TwoRayFunction u = random_domain_function(s2, grid, rng);
    const NormalityReport nr = normality_residual(s2, u);
    CHECK(std::abs(nr.lhs_sq_diff) <= 1e-6);
    CHECK(std::abs(nr.boundary_formula) <= 1e-8);
  }

  // Explicit off-domain profile u1 = e^{t-a} e2, u2 = 0: the left expression
  // cancels exactly and the adjoint one doubles, so the squared norms differ
  // by -2 and the boundary form is (A1 e2, e2) = -1.
  const int m = grid.size();
  RayFunction left = make_uniform(Ray::left, 0.0, grid.truncation, m, [](double t) {
    Vector v = Vector::Zero(2);
    v(1) = std::exp(t);
    return v;
  });
  RayFunction right = make_zero(Ray::right, 1.0, grid.truncation, m, 2);
  const NormalityReport nr = normality_residual(s2, TwoRayFunction(left, right));
  CHECK(std::abs(nr.boundary_formula - (-1.0)) <= 1e-10);
  CHECK(std::abs(nr.lhs_sq_diff - (-2.0)) <= 1e-5);
  CHECK(nr.factor == 2.0);
  CHECK(nr.residual <= 1e-5);

  const NormalityReport zero = normality_residual(
      s2, TwoRayFunction(make_zero(Ray::left, 0.0, grid.truncation, m, 2),
                         make_zero(Ray::right, 1.0, grid.truncation, m, 2)));
  CHECK(zero.lhs_sq_diff == 0.0);
  CHECK(zero.boundary_formula == 0.0);
  CHECK(zero.residual == 0.0);

  for (int trial = 0; trial < 10; ++trial) {
    const TwoRayFunction u = random_offdomain_function(s2, grid, rng);
    CHECK(normality_residual(s2, u).residual <= 1e-5);
  }
}

TEST_CASE("selfadjoint_bc_residual equivalence with the coupling") {
  const ExtensionSpec s1 = scalar_model(M_PI / 2);
  const GridSpec tiny{1.0, 9};
  std::mt19937_64 rng(47);

  Vector one(1);
  one << 1.0;
  const TwoRayFunction coupled =
      function_with_traces(s1, one, s1.w().apply(one), tiny, rng);
  CHECK(selfadjoint_bc_residual(s1, coupled) <= 1e-12);

  const ExtensionSpec identity_w = scalar_model(0.0);
  const TwoRayFunction split =
      function_with_traces(identity_w, one, Vector::Zero(1).eval(), tiny, rng);
  CHECK(std::abs(selfadjoint_bc_residual(identity_w, split) - std::sqrt(2.0)) <= 1e-12);

  const TwoRayFunction zero = function_with_traces(
      identity_w, Vector::Zero(1).eval(), Vector::Zero(1).eval(), tiny, rng);
  CHECK(selfadjoint_bc_residual(identity_w, zero) == 0.0);

  // Classification agreement on random trace pairs.
  const ExtensionSpec s2 = coupled_model();
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Vector ua = random_complex_vector(2, rng);
    Vector ub =
        (trial % 2 == 0) ? s2.w().apply(ua).eval() : random_complex_vector(2, rng);
    const TwoRayFunction u = function_with_traces(s2, ua, ub, tiny, rng);
    const auto [ta, tb] = trace(u);
    const bool by_unitary = selfadjoint_bc_residual(s2, u) <= 1e-10;
    const bool by_coupling = (tb - s2.w().apply(ta)).norm() <= 1e-9;
    if (by_unitary != by_coupling) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("green form vanishes between domain and adjoint domain") {
  const ExtensionSpec s2 = coupled_model();
  const GridSpec grid{40.0, 0};
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const TwoRayFunction u = random_domain_function(s2, grid, rng);
    const TwoRayFunction v = random_adjoint_domain_function(s2, grid, rng);
    CHECK(std::abs(coupled_green_form(s2, u, v)) <= 1e-6);
  }
}
