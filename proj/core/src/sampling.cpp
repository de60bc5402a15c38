// Copyright (c) the tworay developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "tworay/sampling.hpp"

#include <cmath>

namespace tworay {

Vector random_complex_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return v;
}

Vector random_unit_in(const Matrix& basis, std::mt19937_64& rng) {
  const int n = static_cast<int>(basis.rows());
  const int k = static_cast<int>(basis.cols());
  if (k == 0) return Vector::Zero(n);
  Vector v = basis * random_complex_vector(k, rng);
  const double norm = v.norm();
  return norm > 0.0 ? (v / norm).eval() : v;
}

double ray_bump(double t, double endpoint, double truncation, Ray ray) {
  const double center =
      (ray == Ray::left) ? endpoint - truncation / 3.0 : endpoint + truncation / 3.0;
  const double width = truncation / 8.0;
  const double s = (t - center) / width;
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}

TwoRayFunction function_with_traces(const ExtensionSpec& spec, const Vector& ua, const Vector& ub,
                                    const GridSpec& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> rate_dist(0.6, 2.0);
  const double rate_left = rate_dist(rng);
  const double rate_right = rate_dist(rng);
  const Vector bump_left_dir = random_complex_vector(spec.dim(), rng);
  const Vector bump_right_dir = random_complex_vector(spec.dim(), rng);
  const double a = spec.a();
  const double b = spec.b();
  const double T = grid.truncation;
  const int m = grid.size();
  RayFunction left = make_uniform(Ray::left, a, T, m, [&](double t) {
    return (std::exp(rate_left * (t - a)) * ua +
            ray_bump(t, a, T, Ray::left) * bump_left_dir)
        .eval();
  });
  RayFunction right = make_uniform(Ray::right, b, T, m, [&](double t) {
    return (std::exp(-rate_right * (t - b)) * ub +
            ray_bump(t, b, T, Ray::right) * bump_right_dir)
        .eval();
  });
  return TwoRayFunction(std::move(left), std::move(right));
}

TwoRayFunction random_domain_function(const ExtensionSpec& spec, const GridSpec& grid,
                                      std::mt19937_64& rng) {
  const Vector ua = random_unit_in(spec.k_basis(), rng);
  const Vector ub = spec.w().apply(ua);
  return function_with_traces(spec, ua, ub, grid, rng);
}

TwoRayFunction random_offdomain_function(const ExtensionSpec& spec, const GridSpec& grid,
                                         std::mt19937_64& rng) {
  Vector ua = random_complex_vector(spec.dim(), rng);
  Vector ub = random_complex_vector(spec.dim(), rng);
  ua /= ua.norm();
  ub /= ub.norm();
  return function_with_traces(spec, ua, ub, grid, rng);
}

TwoRayFunction random_adjoint_domain_function(const ExtensionSpec& spec, const GridSpec& grid,
                                              std::mt19937_64& rng) {
  const Vector va = random_unit_in(spec.k_basis(), rng);
  const Vector vb = spec.w().apply(va);  // then va = W* vb as required
  return function_with_traces(spec, va, vb, grid, rng);
}

}  // namespace tworay
