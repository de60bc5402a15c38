// Copyright (c) the tworay developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef TWORAY_HEAT_HPP
#define TWORAY_HEAT_HPP

#include "tworay/spectral.hpp"

namespace tworay {

/// Sign-flipping heat problem on two time rays, reduced over the cosine basis
/// {1, sqrt2 cos(n pi x)} of the unit interval with zero-slope ends in x.
///
/// The zero-slope (Neumann) reading of the x boundary conditions is the one
/// under which the x operator is selfadjoint with the constants as kernel;
/// reading the printed conditions as t-derivatives would leave the x operator
/// without boundary conditions at all, so the module implements zero slope.
struct HeatConfig {
  int modes = 8;           // number of cosine modes N >= 1
  double phi = 0.0;        // interface phase, in [0, 2 pi)
  double a = -1.0;
  double b = 1.0;
  double truncation = 40.0;
  int m = 0;               // 0: default_grid_size(truncation)

  int grid_size() const { return m > 0 ? m : default_grid_size(truncation); }
};

/// Mode-space reduction: A1 = diag(-(n pi)^2), A2 = diag((n pi)^2),
/// W = e^{i phi} I. The mode-0 constants are the joint kernel, so the
/// admissible subspace is one-dimensional for every N.
ExtensionSpec cosine_reduce(const HeatConfig& config);

/// Samples of a source f(t, x) on a tensor grid: x uniform on [0, 1],
/// t grids covering the two truncated rays.
struct SpaceTimeSamples {
  RealVector t_left;    // ascending, last node at a
  RealVector t_right;   // ascending, first node at b
  RealVector x;         // uniform on [0, 1]
  Matrix left_values;   // size(t_left) x size(x)
  Matrix right_values;  // size(t_right) x size(x)
};

/// Quadrature projection of the samples onto the first `modes` cosine modes;
/// needs at least 4 * modes x-points (GridTooCoarse otherwise).
TwoRayFunction project_source(const SpaceTimeSamples& samples, const HeatConfig& config);

/// CSV rows (t, x, re_f, im_f) over the tensor grid; t < 0 rows fill the left
/// ray block, t > 0 rows the right one.
SpaceTimeSamples read_source_csv(std::istream& in, const HeatConfig& config);

/// Point-spectrum scan, mode-0 counterexample divergence, and resolvent norm
/// sweep for the reduced heat extension, bundled into one report.
ProbeBundleReport heat_probe(const HeatConfig& config, const ProbeBundleParams& params);

}  // namespace tworay

#endif  // TWORAY_HEAT_HPP
