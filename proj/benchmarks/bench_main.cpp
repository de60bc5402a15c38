// Copyright (c) the tworay developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "tworay/boundary.hpp"
#include "tworay/sampling.hpp"
#include "tworay/spectral.hpp"

namespace {

using namespace tworay;

ExtensionSpec make_model(int dim) {
  Eigen::VectorXd rates(dim);
  for (int k = 0; k < dim; ++k) rates(k) = (k * M_PI) * (k * M_PI);
  Matrix a1 = (-rates).cast<Complex>().asDiagonal();
  Matrix a2 = rates.cast<Complex>().asDiagonal();
  Matrix w = (std::exp(Complex(0.0, 1.0)) * Matrix::Identity(dim, dim)).eval();
  return build_extension(SignedCoefficientPair(spectral_decompose(a1), spectral_decompose(a2)),
                         UnitaryMap(w), -1.0, 1.0);
}

void BM_spectral_decompose(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix raw(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) raw(r, c) = Complex(g(rng), g(rng));
  const Matrix h = (raw + raw.adjoint()) / 2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral_decompose(h));
  }
}
BENCHMARK(BM_spectral_decompose)->Arg(8)->Arg(32)->Arg(64);

void BM_propagator(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ExtensionSpec spec = make_model(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagator(spec.coeffs().a2(), Complex(1.0, 2.0), 0.5));
  }
}
BENCHMARK(BM_propagator)->Arg(8)->Arg(32);

void BM_quad_inner(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const RayFunction u = make_uniform(Ray::left, 0.0, 40.0, m, [](double t) {
    Vector v(2);
    v << std::exp(t), std::exp(0.5 * t);
    return v;
  });
  for (auto _ : state) {
    benchmark::DoNotOptimize(quad_inner(u, u));
  }
}
BENCHMARK(BM_quad_inner)->Arg(4001)->Arg(16001);

void BM_greens_residual(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const Vector f = random_complex_vector(2, rng);
  const Vector g = random_complex_vector(2, rng);
  const TwoRayFunction u = boundary_witness(f, g, 0.0, 1.0, 40.0, 16001);
  const TwoRayFunction v = boundary_witness(g, f, 0.0, 1.0, 40.0, 16001);
  for (auto _ : state) {
    benchmark::DoNotOptimize(greens_residual(u, v));
  }
}
BENCHMARK(BM_greens_residual);

void BM_resolve(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const ExtensionSpec spec = make_model(dim);
  const GridSpec grid{40.0, 0};
  const TwoRayFunction f = random_probe(spec, Complex(1.0, 0.0), grid, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(resolve(spec, Complex(1.0, 0.0), f));
  }
}
BENCHMARK(BM_resolve)->Arg(1)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
