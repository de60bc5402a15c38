// Copyright (c) the tworay developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "tworay/operator_core.hpp"

#include <algorithm>
#include <cmath>

namespace tworay {

namespace {

double hermiticity_deviation(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

HermitianOperator::HermitianOperator(Matrix entries, RealVector eigenvalues, Matrix eigenvectors,
                                     double tol)
    : entries_(std::move(entries)),
      eigenvalues_(std::move(eigenvalues)),
      eigenvectors_(std::move(eigenvectors)),
      hermiticity_tol_(tol) {}

double HermitianOperator::spectral_radius() const {
  return eigenvalues_.size() == 0 ? 0.0 : eigenvalues_.cwiseAbs().maxCoeff();
}

HermitianOperator spectral_decompose(const Matrix& op, double hermiticity_tol) {
  if (op.rows() == 0 || op.cols() == 0) {
    throw Error(ErrorCode::DegenerateInput, "empty operator");
  }
  if (op.rows() != op.cols()) {
    throw Error(ErrorCode::NonHermitian, "operator is not square");
  }
  const double dev = hermiticity_deviation(op);
  if (dev > hermiticity_tol) {
    throw Error(ErrorCode::NonHermitian,
                "deviation " + std::to_string(dev) + " exceeds tol " +
                    std::to_string(hermiticity_tol));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(op);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::DegenerateInput, "eigensolver failed to converge");
  }
  return HermitianOperator(op, solver.eigenvalues(), solver.eigenvectors(), hermiticity_tol);
}

Matrix kernel_projector(const HermitianOperator& op, double ker_tol) {
  if (!(ker_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "ker_tol must be positive");
  }
  const int n = op.dim();
  const double cutoff = ker_tol * std::max(1.0, op.spectral_radius());
  Matrix proj = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (std::abs(op.eigenvalues()(i)) <= cutoff) {
      const Vector v = op.eigenvectors().col(i);
      proj += v * v.adjoint();
    }
  }
  return proj;
}

HermitianOperator signed_sqrt(const HermitianOperator& op, SignConstraint sign, double sign_tol) {
  const int n = op.dim();
  const double flip = (sign == SignConstraint::nonpositive) ? -1.0 : 1.0;
  RealVector sqrt_eigs(n);
  for (int i = 0; i < n; ++i) {
    const double w = flip * op.eigenvalues()(i);  // eigenvalue of ∓A, expected >= 0
    if (w < -sign_tol) {
      throw Error(ErrorCode::SignViolation,
                  "eigenvalue " + std::to_string(op.eigenvalues()(i)) +
                      " violates declared sign beyond tol");
    }
    sqrt_eigs(i) = std::sqrt(std::max(w, 0.0));
  }
  // Rebuild entries from the eigendata; eigenvalues re-sorted ascending.
  Matrix entries = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const Vector v = op.eigenvectors().col(i);
    entries += sqrt_eigs(i) * (v * v.adjoint()).eval();
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return sqrt_eigs(a) < sqrt_eigs(b); });
  RealVector sorted_eigs(n);
  Matrix sorted_vecs(n, n);
  for (int i = 0; i < n; ++i) {
    sorted_eigs(i) = sqrt_eigs(order[i]);
    sorted_vecs.col(i) = op.eigenvectors().col(order[i]);
  }
  // Symmetrize away round-off so the stored entries pass the invariant.
  entries = ((entries + entries.adjoint()) / 2.0).eval();
  return HermitianOperator(std::move(entries), std::move(sorted_eigs), std::move(sorted_vecs),
                           op.hermiticity_tol());
}

Matrix propagator(const HermitianOperator& op, Complex lambda, double tau, double exponent_cap) {
  const int n = op.dim();
  Vector diag(n);
  for (int i = 0; i < n; ++i) {
    const Complex exponent = (lambda - op.eigenvalues()(i)) * tau;
    if (exponent.real() > exponent_cap) {
      throw Error(ErrorCode::Overflow,
                  "propagator exponent real part " + std::to_string(exponent.real()) +
                      " exceeds cap; unstable direction");
    }
    diag(i) = std::exp(exponent);
  }
  return op.eigenvectors() * diag.asDiagonal() * op.eigenvectors().adjoint();
}

SignedCoefficientPair::SignedCoefficientPair(HermitianOperator a1, HermitianOperator a2,
                                             double sign_tol)
    : a1_(std::move(a1)), a2_(std::move(a2)), sign_tol_(sign_tol) {
  if (a1_.dim() != a2_.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient dims differ");
  }
  if (a1_.eigenvalues().size() > 0 && a1_.eigenvalues().maxCoeff() > sign_tol_) {
    throw Error(ErrorCode::SignViolation, "a1 has an eigenvalue above sign_tol");
  }
  if (a2_.eigenvalues().size() > 0 && a2_.eigenvalues().minCoeff() < -sign_tol_) {
    throw Error(ErrorCode::SignViolation, "a2 has an eigenvalue below -sign_tol");
  }
}

UnitaryMap::UnitaryMap(Matrix entries, double unitarity_tol)
    : entries_(std::move(entries)), unitarity_tol_(unitarity_tol) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "unitary map must be square and nonempty");
  }
  const int n = static_cast<int>(entries_.rows());
  const double dev = (entries_.adjoint() * entries_ - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (dev > unitarity_tol_) {
    throw Error(ErrorCode::NotUnitary,
                "W*W deviates from identity by " + std::to_string(dev));
  }
}

AdmissibilityReport check_admissible(const UnitaryMap& w, const Matrix& p1, const Matrix& p2) {
  const int n = w.dim();
  if (p1.rows() != n || p1.cols() != n || p2.rows() != n || p2.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "projector dims do not match W");
  }
  const Matrix product = p2 * w.entries() * p1;
  Eigen::JacobiSVD<Matrix> svd(product, Eigen::ComputeFullV);
  const double cut = 1.0 - 1e-10;
  int k = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > cut) ++k;
  }
  AdmissibilityReport report;
  report.dim_k = k;
  report.basis = svd.matrixV().leftCols(k);
  const int rank1 = static_cast<int>(std::lround(p1.trace().real()));
  const int rank2 = static_cast<int>(std::lround(p2.trace().real()));
  report.maps_kernel_onto = (k == rank1) && (k == rank2);
  return report;
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::SignViolation: return "SignViolation";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadGrid: return "BadGrid";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::TruncationUnsound: return "TruncationUnsound";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::OnAxis: return "OnAxis";
    case ErrorCode::NotInKernel: return "NotInKernel";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace tworay
