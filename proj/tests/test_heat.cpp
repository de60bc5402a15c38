// Copyright (c) the tworay developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "tworay/heat.hpp"

using namespace tworay;

namespace {

// Tensor samples of f(t, x) over both rays.
SpaceTimeSamples sample_source(const HeatConfig& config, int mt, int mx,
                               const std::function<Complex(double, double)>& f) {
  SpaceTimeSamples s;
  s.t_left.resize(mt);
  s.t_right.resize(mt);
  s.x.resize(mx);
  for (int i = 0; i < mt; ++i) {
    s.t_left(i) = config.a - 10.0 + 10.0 * i / (mt - 1);
    s.t_right(i) = config.b + 10.0 * i / (mt - 1);
  }
  for (int j = 0; j < mx; ++j) s.x(j) = static_cast<double>(j) / (mx - 1);
  s.left_values.resize(mt, mx);
  s.right_values.resize(mt, mx);
  for (int i = 0; i < mt; ++i) {
    for (int j = 0; j < mx; ++j) {
      s.left_values(i, j) = f(s.t_left(i), s.x(j));
      s.right_values(i, j) = f(s.t_right(i), s.x(j));
    }
  }
  return s;
}

double mode_rate(int n) { return (n * M_PI) * (n * M_PI); }

}  // namespace

TEST_CASE("cosine_reduce produces the diagonal mode operators") {
  HeatConfig config;
  config.modes = 4;
  config.phi = M_PI / 3;
  const ExtensionSpec spec = cosine_reduce(config);
  CHECK(spec.dim() == 4);
  CHECK(spec.a() == -1.0);
  CHECK(spec.b() == 1.0);
  for (int n = 0; n < 4; ++n) {
    CHECK(spec.coeffs().a2().eigenvalues()(n) == doctest::Approx(mode_rate(n)).epsilon(1e-12));
    CHECK(spec.coeffs().a1().eigenvalues()(n) ==
          doctest::Approx(-mode_rate(3 - n)).epsilon(1e-12));
  }
  CHECK(spec.coeffs().a2().eigenvalues()(1) == doctest::Approx(9.8696044010893586));
  CHECK(spec.dim_k() == 1);
  CHECK(spec.normal_extension_possible());

  HeatConfig one;
  one.modes = 1;
  one.phi = 1.0;
  const ExtensionSpec scalar = cosine_reduce(one);
  CHECK(scalar.dim() == 1);
  CHECK(std::abs(scalar.w().entries()(0, 0) - std::exp(Complex(0.0, 1.0))) <= 1e-15);

  for (const int n : {1, 3, 8}) {
    HeatConfig c;
    c.modes = n;
    CHECK(cosine_reduce(c).dim_k() == 1);
  }

  HeatConfig bad;
  bad.modes = 0;
  CHECK_THROWS_AS(cosine_reduce(bad), Error);
  bad.modes = 2;
  bad.phi = 7.0;
  CHECK_THROWS_AS(cosine_reduce(bad), Error);
}

TEST_CASE("project_source separates cosine modes") {
  HeatConfig config;
  config.modes = 4;
  const auto g = [](double t) { return std::exp(-std::abs(t) + 1.0); };

  {
    const SpaceTimeSamples s =
        sample_source(config, 41, 81, [&](double t, double) { return Complex(g(t), 0.0); });
    const TwoRayFunction u = project_source(s, config);
    CHECK(u.dim() == 4);
    for (int i = 0; i < u.right.size(); ++i) {
      CHECK(std::abs(u.right.values()(i, 0) - g(u.right.nodes()(i))) <= 1e-9);
      for (int n = 1; n < 4; ++n) CHECK(std::abs(u.right.values()(i, n)) <= 1e-9);
    }
  }
  {
    const SpaceTimeSamples s = sample_source(config, 41, 81, [&](double t, double x) {
      return Complex(g(t) * std::sqrt(2.0) * std::cos(M_PI * x), 0.0);
    });
    const TwoRayFunction u = project_source(s, config);
    for (int i = 0; i < u.left.size(); ++i) {
      CHECK(std::abs(u.left.values()(i, 1) - g(u.left.nodes()(i))) <= 1e-8);
      CHECK(std::abs(u.left.values()(i, 0)) <= 1e-9);
      CHECK(std::abs(u.left.values()(i, 2)) <= 1e-8);
    }
  }
  {
    // f(t, x) = x: cosine coefficients 1/2 and sqrt2((-1)^n - 1)/(n pi)^2.
    const SpaceTimeSamples s =
        sample_source(config, 11, 201, [](double, double x) { return Complex(x, 0.0); });
    const TwoRayFunction u = project_source(s, config);
    const double expected[4] = {0.5, -2.0 * std::sqrt(2.0) / (M_PI * M_PI), 0.0,
                                -2.0 * std::sqrt(2.0) / (9.0 * M_PI * M_PI)};
    for (int n = 0; n < 4; ++n) {
      CHECK(std::abs(u.right.values()(0, n) - expected[n]) <= 1e-6);
    }
  }

  const SpaceTimeSamples coarse =
      sample_source(config, 11, 12, [](double, double) { return Complex(1.0, 0.0); });
  CHECK_THROWS_AS(project_source(coarse, config), Error);
}

TEST_CASE("project_source is an isometry on resolved modes") {
  HeatConfig config;
  config.modes = 3;
  const SpaceTimeSamples s = sample_source(config, 201, 161, [](double t, double x) {
    const double envelope = std::exp(-std::abs(t) + 1.0);
    return Complex(envelope * (0.4 + std::sqrt(2.0) * std::cos(M_PI * x)),
                   envelope * 0.3 * std::sqrt(2.0) * std::cos(2 * M_PI * x));
  });
  const TwoRayFunction u = project_source(s, config);
  const double mode_norm_sq = quad_norm_sq(u);

  // Sample-space squared norm by Simpson in x then t.
  const auto block_norm_sq = [&](const RealVector& t, const Matrix& vals) {
    const int mt = static_cast<int>(t.size());
    const int mx = static_cast<int>(s.x.size());
    const double hx = 1.0 / (mx - 1);
    const double ht = (t(mt - 1) - t(0)) / (mt - 1);
    double acc = 0.0;
    for (int i = 0; i < mt; ++i) {
      double slice = 0.0;
      for (int j = 0; j < mx; ++j) {
        const double wx = (j == 0 || j == mx - 1) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        slice += wx * std::norm(vals(i, j));
      }
      slice *= hx / 3.0;
      const double wt = (i == 0 || i == mt - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      acc += wt * slice;
    }
    return acc * ht / 3.0;
  };
  const double sample_norm_sq =
      block_norm_sq(s.t_left, s.left_values) + block_norm_sq(s.t_right, s.right_values);
  CHECK(mode_norm_sq <= sample_norm_sq + 1e-9);
  CHECK(std::abs(mode_norm_sq - sample_norm_sq) <= 1e-6);
}

TEST_CASE("source csv round trip") {
  HeatConfig config;
  config.modes = 2;
  std::string csv = "t,x,re_f,im_f\n";
  const double ts[4] = {-3.0, -1.0, 1.0, 2.0};
  const double xs[9] = {0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0};
  for (double t : ts) {
    for (double x : xs) {
      csv += std::to_string(t) + ',' + std::to_string(x) + ',' +
             std::to_string(t * x) + ",0.5\n";
    }
  }
  std::istringstream in(csv);
  const SpaceTimeSamples s = read_source_csv(in, config);
  CHECK(s.t_left.size() == 2);
  CHECK(s.t_right.size() == 2);
  CHECK(s.x.size() == 9);
  CHECK(std::abs(s.left_values(0, 8) - Complex(-3.0, 0.5)) <= 1e-12);
  CHECK(std::abs(s.right_values(1, 4) - Complex(1.0, 0.5)) <= 1e-12);

  std::istringstream bad("nope\n");
  CHECK_THROWS_AS(read_source_csv(bad, config), Error);
}

TEST_CASE("heat probe with one mode matches the scalar model byte for byte") {
  const double phi = M_PI / 3;
  HeatConfig config;
  config.modes = 1;
  config.phi = phi;

  ProbeBundleParams params;
  params.grid_points = 11;
  params.divergence_truncations = {10.0, 20.0};
  params.sweep_lambdas = {{1.0, 0.0}, {0.5, 0.5}};
  params.probe_count = 3;
  params.sweep_grid = GridSpec{20.0, 0};
  params.seed = 42;

  const ProbeBundleReport via_heat = heat_probe(config, params);

  Matrix w(1, 1);
  w << std::exp(Complex(0.0, phi));
  SignedCoefficientPair coeffs(spectral_decompose(Matrix::Zero(1, 1)),
                               spectral_decompose(Matrix::Zero(1, 1)));
  const ExtensionSpec direct = build_extension(coeffs, UnitaryMap(w), -1.0, 1.0);
  const ProbeBundleReport via_direct = probe_bundle(direct, params);

  const auto serialize = [](const ProbeBundleReport& r) {
    std::ostringstream out;
    out << r.lambda_points << '|' << r.eigenfunctions_found << '\n';
    write_divergence_csv(out, r.divergence);
    write_sweep_csv(out, r.sweep);
    return out.str();
  };
  CHECK(serialize(via_heat) == serialize(via_direct));
  CHECK(via_heat.eigenfunctions_found == 0);
}
