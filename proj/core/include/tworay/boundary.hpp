// Copyright (c) the tworay developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef TWORAY_BOUNDARY_HPP
#define TWORAY_BOUNDARY_HPP

#include "tworay/ray_function.hpp"

namespace tworay {

/// Boundary values (Y1(u), Y2(u)) of a two-ray function.
struct BoundaryData {
  Vector y1;
  Vector y2;
};

/// Y1(u) = (u2(b) + u1(a)) / (i sqrt 2), Y2(u) = (u2(b) - u1(a)) / sqrt 2.
BoundaryData gamma_maps(const TwoRayFunction& u);

/// Orientation of the boundary pairing against the abstract Green identity.
///
/// `printed` pairs (y1(u), y2(v)) - (y2(u), y1(v)); `swapped` exchanges the
/// roles of y1 and y2. A one-time self-test on the witness family picks the
/// orientation under which the identity closes numerically; direct
/// computation shows the printed maps satisfy it with the roles exchanged.
enum class GreenSignConvention { printed, swapped };

GreenSignConvention greens_sign_convention();
const char* to_string(GreenSignConvention c);

/// |LHS - RHS| of the Green identity for M = -i d/dt on both rays, with
/// LHS = (Mu, v) - (u, Mv) by quadrature and RHS the boundary pairing under
/// the module's startup-selected sign convention. Both u and v must decay at
/// the truncated far ends (|values| <= 1e-8), else TruncationUnsound.
double greens_residual(const TwoRayFunction& u, const TwoRayFunction& v);

/// Surjectivity witness: u1(t) = e^{t-a} (i f - g)/sqrt2 on [a-T, a],
/// u2(t) = e^{b-t} (i f + g)/sqrt2 on [b, b+T]; gamma_maps gives back (f, g).
TwoRayFunction boundary_witness(const Vector& f, const Vector& g, double a, double b, double T,
                                int m);

}  // namespace tworay

#endif  // TWORAY_BOUNDARY_HPP
