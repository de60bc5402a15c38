// Copyright (c) the tworay developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "tworay/boundary.hpp"

#include <cmath>

namespace tworay {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kFarDecayTol = 1e-8;

// M u = -i u' applied per ray.
TwoRayFunction symmetric_expression(const TwoRayFunction& u) {
  const Complex minus_i(0.0, -1.0);
  RayFunction dl = differentiate(u.left);
  RayFunction dr = differentiate(u.right);
  dl.mutable_values() *= minus_i;
  dr.mutable_values() *= minus_i;
  return TwoRayFunction(std::move(dl), std::move(dr));
}

Complex boundary_pairing(const TwoRayFunction& u, const TwoRayFunction& v,
                         GreenSignConvention convention) {
  const BoundaryData bu = gamma_maps(u);
  const BoundaryData bv = gamma_maps(v);
  const Complex p12 = bv.y2.dot(bu.y1);  // (y1(u), y2(v))_H
  const Complex p21 = bv.y1.dot(bu.y2);  // (y2(u), y1(v))_H
  return convention == GreenSignConvention::printed ? p12 - p21 : p21 - p12;
}

Complex green_lhs(const TwoRayFunction& u, const TwoRayFunction& v) {
  const TwoRayFunction mu = symmetric_expression(u);
  const TwoRayFunction mv = symmetric_expression(v);
  return quad_inner(mu, v) - quad_inner(u, mv);
}

GreenSignConvention run_sign_self_test() {
  const double a = 0.0, b = 1.0, T = 20.0;
  const int m = default_grid_size(T);
  Vector f(1), g(1);
  f << Complex(1.0, 0.0);
  g << Complex(0.3, -0.4);
  const TwoRayFunction u = boundary_witness(f, g, a, b, T, m);
  const TwoRayFunction v = boundary_witness(g, f, a, b, T, m);
  const Complex lhs = green_lhs(u, v);
  const double res_printed =
      std::abs(lhs - boundary_pairing(u, v, GreenSignConvention::printed));
  const double res_swapped =
      std::abs(lhs - boundary_pairing(u, v, GreenSignConvention::swapped));
  return res_swapped < res_printed ? GreenSignConvention::swapped
                                   : GreenSignConvention::printed;
}

void require_far_decay(const TwoRayFunction& u, const char* who) {
  const double far = std::max(u.left.far_value().cwiseAbs().maxCoeff(),
                              u.right.far_value().cwiseAbs().maxCoeff());
  if (far > kFarDecayTol) {
    throw Error(ErrorCode::TruncationUnsound,
                std::string(who) + " does not decay at the truncated ends");
  }
}

}  // namespace

BoundaryData gamma_maps(const TwoRayFunction& u) {
  const auto [ua, ub] = trace(u);
  BoundaryData out;
  out.y1 = (ub + ua) / Complex(0.0, kSqrt2);
  out.y2 = (ub - ua) / kSqrt2;
  return out;
}

GreenSignConvention greens_sign_convention() {
  static const GreenSignConvention convention = run_sign_self_test();
  return convention;
}

const char* to_string(GreenSignConvention c) {
  return c == GreenSignConvention::printed ? "printed" : "swapped";
}

double greens_residual(const TwoRayFunction& u, const TwoRayFunction& v) {
  if (!u.left.same_grid(v.left) || !u.right.same_grid(v.right)) {
    throw Error(ErrorCode::GridMismatch, "u and v live on different grids");
  }
  require_far_decay(u, "u");
  require_far_decay(v, "v");
  const Complex lhs = green_lhs(u, v);
  const Complex rhs = boundary_pairing(u, v, greens_sign_convention());
  return std::abs(lhs - rhs);
}

TwoRayFunction boundary_witness(const Vector& f, const Vector& g, double a, double b, double T,
                                int m) {
  if (f.size() != g.size()) {
    throw Error(ErrorCode::DimensionMismatch, "f and g have different dims");
  }
  const Complex i(0.0, 1.0);
  const Vector left_trace = (i * f - g) / kSqrt2;
  const Vector right_trace = (i * f + g) / kSqrt2;
  RayFunction left = make_uniform(Ray::left, a, T, m, [&](double t) {
    return (std::exp(t - a) * left_trace).eval();
  });
  RayFunction right = make_uniform(Ray::right, b, T, m, [&](double t) {
    return (std::exp(b - t) * right_trace).eval();
  });
  return TwoRayFunction(std::move(left), std::move(right));
}

}  // namespace tworay
