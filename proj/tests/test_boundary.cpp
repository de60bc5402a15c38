// Copyright (c) the tworay developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tworay/boundary.hpp"
#include "tworay/sampling.hpp"

using namespace tworay;

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

TwoRayFunction from_traces(const Vector& ua, const Vector& ub, double a = 0.0, double b = 1.0,
                           double T = 20.0, int m = 2001) {
  RayFunction left = make_uniform(Ray::left, a, T, m,
                                  [&](double t) { return (std::exp(t - a) * ua).eval(); });
  RayFunction right = make_uniform(Ray::right, b, T, m,
                                   [&](double t) { return (std::exp(b - t) * ub).eval(); });
  return TwoRayFunction(std::move(left), std::move(right));
}

Vector scalar(Complex z) {
  Vector v(1);
  v << z;
  return v;
}

}  // namespace

TEST_CASE("gamma_maps formulas") {
  {
    const auto bd = gamma_maps(from_traces(scalar(0.0), scalar(Complex(0.0, kSqrt2))));
    CHECK(std::abs(bd.y1(0) - Complex(1.0, 0.0)) <= 1e-12);
    CHECK(std::abs(bd.y2(0) - Complex(0.0, 1.0)) <= 1e-12);
  }
  {
    const auto bd = gamma_maps(from_traces(scalar(0.0), scalar(0.0)));
    CHECK(bd.y1.norm() == 0.0);
    CHECK(bd.y2.norm() == 0.0);
  }
  {
    const auto bd = gamma_maps(from_traces(scalar(1.0), scalar(1.0)));
    CHECK(std::abs(bd.y1(0) - Complex(0.0, -kSqrt2)) <= 1e-12);
    CHECK(std::abs(bd.y2(0)) <= 1e-15);
  }
}

TEST_CASE("gamma_maps is linear in the traces") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector ua = random_complex_vector(3, rng);
    const Vector ub = random_complex_vector(3, rng);
    const Vector va = random_complex_vector(3, rng);
    const Vector vb = random_complex_vector(3, rng);
    const Complex alpha(0.3, -1.1), beta(-0.7, 0.2);
    const auto bu = gamma_maps(from_traces(ua, ub, 0.0, 1.0, 10.0, 401));
    const auto bv = gamma_maps(from_traces(va, vb, 0.0, 1.0, 10.0, 401));
    const auto bc =
        gamma_maps(from_traces(alpha * ua + beta * va, alpha * ub + beta * vb, 0.0, 1.0, 10.0, 401));
    CHECK((bc.y1 - alpha * bu.y1 - beta * bv.y1).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((bc.y2 - alpha * bu.y2 - beta * bv.y2).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("boundary_witness round trips") {
  {
    const TwoRayFunction w = boundary_witness(scalar(0.0), scalar(0.0), 0.0, 1.0, 10.0, 801);
    CHECK(quad_norm_sq(w) == 0.0);
  }
  {
    const TwoRayFunction w = boundary_witness(scalar(1.0), scalar(0.0), 0.0, 1.0, 10.0, 801);
    const auto [ua, ub] = trace(w);
    CHECK(std::abs(ua(0) - Complex(0.0, 1.0 / kSqrt2)) <= 1e-14);
    CHECK(std::abs(ub(0) - Complex(0.0, 1.0 / kSqrt2)) <= 1e-14);
  }
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector f = random_complex_vector(3, rng);
    const Vector g = random_complex_vector(3, rng);
    const TwoRayFunction w = boundary_witness(f, g, -0.5, 2.0, 30.0, 3001);
    const BoundaryData bd = gamma_maps(w);
    CHECK((bd.y1 - f).norm() <= 1e-10);
    CHECK((bd.y2 - g).norm() <= 1e-10);
  }
}

TEST_CASE("witness trace formula matches the construction") {
  std::mt19937_64 rng(9);
  const Vector f = random_complex_vector(2, rng);
  const Vector g = random_complex_vector(2, rng);
  const TwoRayFunction w = boundary_witness(f, g, 0.0, 1.0, 20.0, 2001);
  const auto [ua, ub] = trace(w);
  const Complex i(0.0, 1.0);
  CHECK((ua - (i * f - g) / kSqrt2).norm() <= 1e-14);
  CHECK((ub - (i * f + g) / kSqrt2).norm() <= 1e-14);
}

TEST_CASE("green identity residual on the witness family") {
  // The startup self-test must have settled on the swapped orientation: the
  // two sides match only after exchanging the roles of y1 and y2.
  CHECK(greens_sign_convention() == GreenSignConvention::swapped);

  const double T = 40.0;
  const int m = default_grid_size(T);
  std::mt19937_64 rng(17);
  {
    const Vector f = random_complex_vector(2, rng);
    const Vector g = random_complex_vector(2, rng);
    const TwoRayFunction u = boundary_witness(f, g, 0.0, 1.0, T, m);
    const TwoRayFunction v = boundary_witness(g, f, 0.0, 1.0, T, m);
    CHECK(greens_residual(u, v) <= 1e-6);
    CHECK(greens_residual(u, u) <= 1e-6);
  }
}

TEST_CASE("green identity for compactly supported functions") {
  const double T = 40.0;
  const int m = default_grid_size(T);
  const auto bump_fun = [&](Ray ray, double endpoint) {
    return make_uniform(ray, endpoint, T, m, [=](double t) {
      Vector v(1);
      v << Complex(ray_bump(t, endpoint, T, ray), 0.3 * ray_bump(t, endpoint, T, ray));
      return v;
    });
  };
  const TwoRayFunction u(bump_fun(Ray::left, 0.0), bump_fun(Ray::right, 1.0));
  const TwoRayFunction mu = [&] {
    RayFunction dl = differentiate(u.left);
    RayFunction dr = differentiate(u.right);
    dl.mutable_values() *= Complex(0.0, -1.0);
    dr.mutable_values() *= Complex(0.0, -1.0);
    return TwoRayFunction(std::move(dl), std::move(dr));
  }();
  const Complex lhs = quad_inner(mu, u) - quad_inner(u, mu);
  CHECK(std::abs(lhs) <= 1e-8);  // no boundary contribution
  const BoundaryData bd = gamma_maps(u);
  CHECK(bd.y1.norm() == 0.0);
  CHECK(bd.y2.norm() == 0.0);
  CHECK(greens_residual(u, u) <= 1e-8);
}

TEST_CASE("greens_residual rejects non-decaying input") {
  const TwoRayFunction u = [&] {
    RayFunction left = make_uniform(Ray::left, 0.0, 10.0, 1001,
                                    [](double) { return scalar(1.0); });
    RayFunction right = make_uniform(Ray::right, 1.0, 10.0, 1001,
                                     [](double t) { return scalar(std::exp(1.0 - t)); });
    return TwoRayFunction(std::move(left), std::move(right));
  }();
  CHECK_THROWS_AS(greens_residual(u, u), Error);
  try {
    greens_residual(u, u);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TruncationUnsound);
  }
}

TEST_CASE("surjectivity sample across dims") {
  std::mt19937_64 rng(23);
  for (const int dim : {1, 2, 4}) {
    for (int trial = 0; trial < 50; ++trial) {
      const Vector f = random_complex_vector(dim, rng);
      const Vector g = random_complex_vector(dim, rng);
      const BoundaryData bd = gamma_maps(boundary_witness(f, g, 0.0, 1.0, 20.0, 801));
      CHECK(std::sqrt((bd.y1 - f).squaredNorm() + (bd.y2 - g).squaredNorm()) <= 1e-10);
    }
  }
}
