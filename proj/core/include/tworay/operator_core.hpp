// Copyright (c) the tworay developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef TWORAY_OPERATOR_CORE_HPP
#define TWORAY_OPERATOR_CORE_HPP

#include <Eigen/Dense>
#include <complex>

#include "tworay/error.hpp"

namespace tworay {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class SignConstraint { nonpositive, nonnegative };

/// A Hermitian matrix on C^n together with its cached eigendecomposition.
///
/// Eigenvalues are stored ascending, eigenvector columns orthonormal, and the
/// reconstruction V diag(w) V* is validated against the input on construction.
class HermitianOperator {
 public:
  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  const RealVector& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenvectors() const { return eigenvectors_; }
  double hermiticity_tol() const { return hermiticity_tol_; }

  /// Largest eigenvalue magnitude.
  double spectral_radius() const;

  Vector apply(const Vector& x) const { return entries_ * x; }

 private:
  friend HermitianOperator spectral_decompose(const Matrix&, double);
  friend HermitianOperator signed_sqrt(const HermitianOperator&, SignConstraint, double);

  HermitianOperator(Matrix entries, RealVector eigenvalues, Matrix eigenvectors, double tol);

  Matrix entries_;
  RealVector eigenvalues_;
  Matrix eigenvectors_;
  double hermiticity_tol_;
};

/// Eigendecomposition entry point. Throws NonHermitian if the input deviates
/// from its conjugate transpose by more than hermiticity_tol (max-entry norm),
/// DegenerateInput for empty matrices.
HermitianOperator spectral_decompose(const Matrix& op, double hermiticity_tol = 1e-12);

/// Orthogonal projector onto the span of eigenvectors whose eigenvalue
/// magnitude is at most ker_tol * max(1, spectral radius). An empty kernel
/// yields the zero matrix.
Matrix kernel_projector(const HermitianOperator& op, double ker_tol);

/// (-A)^{1/2} for nonpositive A, A^{1/2} for nonnegative A. Round-off
/// eigenvalues on the wrong side within sign_tol are clamped to zero;
/// anything further out throws SignViolation.
HermitianOperator signed_sqrt(const HermitianOperator& op, SignConstraint sign,
                              double sign_tol = 1e-10);

/// e^{-(A - lambda) tau} via the cached eigendecomposition. Throws Overflow
/// when any exponent real part (Re lambda - alpha) * tau exceeds exponent_cap;
/// that signals the caller chose an unstable integration direction.
Matrix propagator(const HermitianOperator& op, Complex lambda, double tau,
                  double exponent_cap = 700.0);

/// The pair (A1, A2) with A1 <= 0 and A2 >= 0 validated on construction.
class SignedCoefficientPair {
 public:
  SignedCoefficientPair(HermitianOperator a1, HermitianOperator a2, double sign_tol = 1e-10);

  const HermitianOperator& a1() const { return a1_; }
  const HermitianOperator& a2() const { return a2_; }
  double sign_tol() const { return sign_tol_; }
  int dim() const { return a1_.dim(); }

 private:
  HermitianOperator a1_;
  HermitianOperator a2_;
  double sign_tol_;
};

/// A unitary matrix (the extension parameter). W*W = I within unitarity_tol.
class UnitaryMap {
 public:
  explicit UnitaryMap(Matrix entries, double unitarity_tol = 1e-10);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  double unitarity_tol() const { return unitarity_tol_; }

  Vector apply(const Vector& x) const { return entries_ * x; }
  Vector apply_inverse(const Vector& x) const { return entries_.adjoint() * x; }

 private:
  Matrix entries_;
  double unitarity_tol_;
};

struct AdmissibilityReport {
  Matrix basis;  // orthonormal columns spanning K = ran P1 ∩ W^{-1}(ran P2)
  int dim_k = 0;
  bool maps_kernel_onto = false;
};

/// Intersection K = ran P1 ∩ W^{-1}(ran P2), computed from the singular
/// vectors of P2 W P1 with singular value above 1 - 1e-10.
/// maps_kernel_onto is true iff dim K = rank P1 = rank P2.
AdmissibilityReport check_admissible(const UnitaryMap& w, const Matrix& p1, const Matrix& p2);

}  // namespace tworay

#endif  // TWORAY_OPERATOR_CORE_HPP
