// Copyright (c) the tworay developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "tworay/extension.hpp"

#include <cmath>

namespace tworay {

namespace {

constexpr double kFarDecayTol = 1e-8;

int projector_rank(const Matrix& p) {
  return static_cast<int>(std::lround(p.trace().real()));
}

}  // namespace

ExtensionSpec::ExtensionSpec(SignedCoefficientPair coeffs, UnitaryMap w, double a, double b,
                             double ker_tol)
    : coeffs_(std::move(coeffs)), w_(std::move(w)), a_(a), b_(b), ker_tol_(ker_tol) {
  if (!(a_ < b_)) {
    throw Error(ErrorCode::InvalidArgument, "need a < b");
  }
  if (w_.dim() != coeffs_.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "W dim does not match coefficients");
  }
  // The signed square roots share their kernels with the base coefficients;
  // projecting from the base operators avoids the sqrt noise amplification
  // (a round-off eigenvalue 1e-15 would become 3e-8 after the root).
  p1_ = kernel_projector(coeffs_.a1(), ker_tol_);
  p2_ = kernel_projector(coeffs_.a2(), ker_tol_);
  const AdmissibilityReport adm = check_admissible(w_, p1_, p2_);
  k_basis_ = adm.basis;
  const int rank1 = projector_rank(p1_);
  const int rank2 = projector_rank(p2_);
  normal_extension_possible_ = (rank1 == rank2) && rank1 > 0;
  maximal_normal_ = (rank1 == 0) || (rank2 == 0);
}

ExtensionSpec build_extension(const SignedCoefficientPair& coeffs, const UnitaryMap& w, double a,
                              double b, double ker_tol) {
  return ExtensionSpec(coeffs, w, a, b, ker_tol);
}

TwoRayFunction apply_expression(const ExtensionSpec& spec, const TwoRayFunction& u,
                                ExpressionVariant variant) {
  if (u.dim() != spec.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "function dim does not match spec");
  }
  if (std::abs(u.left.endpoint() - spec.a()) > 1e-12 ||
      std::abs(u.right.endpoint() - spec.b()) > 1e-12) {
    throw Error(ErrorCode::GridMismatch, "grids do not touch the spec interface points");
  }
  const double sign = (variant == ExpressionVariant::direct) ? 1.0 : -1.0;
  RayFunction dl = differentiate(u.left);
  RayFunction dr = differentiate(u.right);
  // nodewise sign * u' + A u; values are rows, so multiply by A^T on the right.
  dl.mutable_values() =
      sign * dl.values() + u.left.values() * spec.coeffs().a1().entries().transpose();
  dr.mutable_values() =
      sign * dr.values() + u.right.values() * spec.coeffs().a2().entries().transpose();
  return TwoRayFunction(std::move(dl), std::move(dr));
}

DomainReport domain_check(const ExtensionSpec& spec, const TwoRayFunction& u, double tol) {
  DomainReport report;
  const double far = std::max(u.left.far_value().cwiseAbs().maxCoeff(),
                              u.right.far_value().cwiseAbs().maxCoeff());
  if (far > tol) {
    report.reasons.push_back("far-end decay");
  }
  const auto [ua, ub] = trace(u);
  const int n = spec.dim();
  const Matrix id = Matrix::Identity(n, n);
  if (((id - spec.p1()) * ua).norm() > tol) {
    report.reasons.push_back("left kernel");
  }
  if (((id - spec.p2()) * ub).norm() > tol) {
    report.reasons.push_back("right kernel");
  }
  if ((ub - spec.w().apply(ua)).norm() > tol) {
    report.reasons.push_back("coupling");
  }
  report.in_domain = report.reasons.empty();
  return report;
}

NormalityReport normality_residual(const ExtensionSpec& spec, const TwoRayFunction& u) {
  const double far = std::max(u.left.far_value().cwiseAbs().maxCoeff(),
                              u.right.far_value().cwiseAbs().maxCoeff());
  if (far > kFarDecayTol) {
    throw Error(ErrorCode::TruncationUnsound, "u does not decay at the truncated ends");
  }
  const TwoRayFunction direct = apply_expression(spec, u, ExpressionVariant::direct);
  const TwoRayFunction adjoint = apply_expression(spec, u, ExpressionVariant::adjoint);
  NormalityReport report;
  report.lhs_sq_diff = quad_norm_sq(direct) - quad_norm_sq(adjoint);
  const auto [ua, ub] = trace(u);
  report.boundary_formula = ua.dot(spec.coeffs().a1().apply(ua)).real() -
                            ub.dot(spec.coeffs().a2().apply(ub)).real();
  report.factor = 2.0;
  report.residual = std::abs(report.lhs_sq_diff - report.factor * report.boundary_formula);
  return report;
}

double selfadjoint_bc_residual(const ExtensionSpec& spec, const TwoRayFunction& u) {
  const BoundaryData bd = gamma_maps(u);
  const Matrix& w = spec.w().entries();
  const Matrix id = Matrix::Identity(spec.dim(), spec.dim());
  const Vector r = (w - id) * bd.y1 + Complex(0.0, 1.0) * ((w + id) * bd.y2);
  return r.norm();
}

Complex coupled_green_form(const ExtensionSpec& spec, const TwoRayFunction& u,
                           const TwoRayFunction& v) {
  const TwoRayFunction lu = apply_expression(spec, u, ExpressionVariant::direct);
  const TwoRayFunction lv = apply_expression(spec, v, ExpressionVariant::adjoint);
  return quad_inner(lu, v) - quad_inner(u, lv);
}

}  // namespace tworay
