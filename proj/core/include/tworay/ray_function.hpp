// Copyright (c) the tworay developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef TWORAY_RAY_FUNCTION_HPP
#define TWORAY_RAY_FUNCTION_HPP

#include <functional>
#include <iosfwd>
#include <utility>

#include "tworay/operator_core.hpp"

namespace tworay {

enum class Ray { left, right };

/// Grid samples of a vector-valued function on a truncated ray.
///
/// A left ray covers [endpoint - T, endpoint] with the last node at the
/// endpoint; a right ray covers [endpoint, endpoint + T] with the first node
/// at the endpoint. Rows of `values` correspond to nodes.
class RayFunction {
 public:
  RayFunction(Ray ray, double endpoint, double truncation, RealVector nodes, Matrix values);

  Ray ray() const { return ray_; }
  double endpoint() const { return endpoint_; }
  double truncation() const { return truncation_; }
  const RealVector& nodes() const { return nodes_; }
  const Matrix& values() const { return values_; }
  Matrix& mutable_values() { return values_; }

  int size() const { return static_cast<int>(nodes_.size()); }
  int dim() const { return static_cast<int>(values_.cols()); }

  /// Sample at the interface endpoint (a for left rays, b for right rays).
  Vector endpoint_value() const;
  /// Sample at the truncated far end of the ray.
  Vector far_value() const;

  /// Grid spacing; throws BadGrid if the grid is not uniform to 1e-9 relative.
  double uniform_step() const;

  bool same_grid(const RayFunction& other) const;

 private:
  Ray ray_;
  double endpoint_;
  double truncation_;
  RealVector nodes_;
  Matrix values_;
};

struct TwoRayFunction {
  RayFunction left;
  RayFunction right;

  TwoRayFunction(RayFunction l, RayFunction r);
  int dim() const { return left.dim(); }
};

/// Number of nodes used by default for a truncation length T.
int default_grid_size(double truncation);

/// Uniform grid sampling of t -> C^dim over the truncated ray.
RayFunction make_uniform(Ray ray, double endpoint, double truncation, int m,
                         const std::function<Vector(double)>& sampler);

/// Zero function on the same grid layout.
RayFunction make_zero(Ray ray, double endpoint, double truncation, int m, int dim);

/// Composite-Simpson approximation of the L2 pairing int (u(t), v(t))_H dt
/// over the ray; linear in u, conjugate in v. Grids must match. Falls back to
/// the trapezoid rule when the interval count is odd.
Complex quad_inner(const RayFunction& u, const RayFunction& v);

/// Sum of quad_inner over both rays.
Complex quad_inner(const TwoRayFunction& u, const TwoRayFunction& v);

double quad_norm_sq(const RayFunction& u);
double quad_norm_sq(const TwoRayFunction& u);

/// Nodewise derivative: 4th-order central differences inside, one-sided
/// 4th-order stencils at the ends. Requires m >= 5 and a uniform grid.
RayFunction differentiate(const RayFunction& u);

/// Boundary samples (u1(a), u2(b)).
std::pair<Vector, Vector> trace(const TwoRayFunction& u);

/// CSV serialization: a metadata header (ray, endpoint, T), a column header
/// t, re_v1, im_v1, ..., then one row per node.
void write_csv(std::ostream& out, const RayFunction& u);
RayFunction read_csv(std::istream& in);

}  // namespace tworay

#endif  // TWORAY_RAY_FUNCTION_HPP
