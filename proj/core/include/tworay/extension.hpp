// Copyright (c) the tworay developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef TWORAY_EXTENSION_HPP
#define TWORAY_EXTENSION_HPP

#include <string>
#include <vector>

#include "tworay/boundary.hpp"
#include "tworay/ray_function.hpp"

namespace tworay {

/// The coupled extension: coefficients, unitary interface parameter, interface
/// points, kernel projectors and the admissible boundary subspace K.
///
/// K collects the traces u1(a) allowed by the interface condition: vectors in
/// ker (-A1)^{1/2} that W maps into ker A2^{1/2}.
class ExtensionSpec {
 public:
  ExtensionSpec(SignedCoefficientPair coeffs, UnitaryMap w, double a, double b,
                double ker_tol = 1e-10);

  const SignedCoefficientPair& coeffs() const { return coeffs_; }
  const UnitaryMap& w() const { return w_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double ker_tol() const { return ker_tol_; }

  const Matrix& p1() const { return p1_; }
  const Matrix& p2() const { return p2_; }
  /// Orthonormal basis of K (n x k, possibly zero columns).
  const Matrix& k_basis() const { return k_basis_; }
  int dim() const { return coeffs_.dim(); }
  int dim_k() const { return static_cast<int>(k_basis_.cols()); }

  bool normal_extension_possible() const { return normal_extension_possible_; }
  bool maximal_normal() const { return maximal_normal_; }

 private:
  SignedCoefficientPair coeffs_;
  UnitaryMap w_;
  double a_;
  double b_;
  double ker_tol_;
  Matrix p1_;
  Matrix p2_;
  Matrix k_basis_;
  bool normal_extension_possible_;
  bool maximal_normal_;
};

/// Validates dimensions and signs, computes kernel projectors of the signed
/// square roots and the admissible subspace, and sets the rank flags.
ExtensionSpec build_extension(const SignedCoefficientPair& coeffs, const UnitaryMap& w, double a,
                              double b, double ker_tol = 1e-10);

enum class ExpressionVariant { direct, adjoint };

/// direct: (u1' + A1 u1, u2' + A2 u2); adjoint: (-u1' + A1 u1, -u2' + A2 u2).
TwoRayFunction apply_expression(const ExtensionSpec& spec, const TwoRayFunction& u,
                                ExpressionVariant variant);

struct DomainReport {
  bool in_domain = false;
  std::vector<std::string> reasons;  // "far-end decay", "left kernel", "right kernel", "coupling"
};

/// Tolerance-based membership test for D(L_W): far-end decay of the grid
/// samples, traces in the kernels, and the interface coupling u2(b) = W u1(a).
DomainReport domain_check(const ExtensionSpec& spec, const TwoRayFunction& u, double tol = 1e-8);

struct NormalityReport {
  double lhs_sq_diff = 0.0;       // |l(u)|^2 - |l+(u)|^2 by quadrature
  double boundary_formula = 0.0;  // (A1 u1(a), u1(a)) - (A2 u2(b), u2(b))
  double factor = 2.0;            // lhs_sq_diff = factor * boundary_formula
  double residual = 0.0;          // |lhs_sq_diff - factor * boundary_formula|
};

/// Quadrature check of the norm identity behind normality: the difference of
/// the squared expression norms reduces to twice the boundary form. Exact for
/// decaying u; on the extension domain both sides vanish.
NormalityReport normality_residual(const ExtensionSpec& spec, const TwoRayFunction& u);

/// |(W - E) Y1(u) + i (W + E) Y2(u)|. Vanishes exactly when the interface
/// coupling u2(b) = W u1(a) holds (the two conditions are equivalent).
double selfadjoint_bc_residual(const ExtensionSpec& spec, const TwoRayFunction& u);

/// Green form (l u, v) - (u, l+ v) by quadrature. Vanishes when u satisfies
/// the extension interface condition and v the adjoint one
/// v1(a) = W* v2(b), with both trace sets inside the kernels.
Complex coupled_green_form(const ExtensionSpec& spec, const TwoRayFunction& u,
                           const TwoRayFunction& v);

}  // namespace tworay

#endif  // TWORAY_EXTENSION_HPP
