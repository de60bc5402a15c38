// Copyright (c) the tworay developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef TWORAY_SAMPLING_HPP
#define TWORAY_SAMPLING_HPP

#include <random>

#include "tworay/spectral.hpp"

namespace tworay {

Vector random_complex_vector(int n, std::mt19937_64& rng);

/// Random unit vector in the column span of an orthonormal basis; zero vector
/// when the basis has no columns.
Vector random_unit_in(const Matrix& basis, std::mt19937_64& rng);

/// Smooth compactly supported bump centered mid-ray; vanishes at the
/// interface endpoint and at the truncated far end.
double ray_bump(double t, double endpoint, double truncation, Ray ray);

/// Decaying two-ray function with prescribed interface traces: exponential
/// profiles carrying the traces plus an interior bump that leaves them fixed.
TwoRayFunction function_with_traces(const ExtensionSpec& spec, const Vector& ua, const Vector& ub,
                                    const GridSpec& grid, std::mt19937_64& rng);

/// Random member of the extension domain: trace in K, coupled through W.
TwoRayFunction random_domain_function(const ExtensionSpec& spec, const GridSpec& grid,
                                      std::mt19937_64& rng);

/// Random decaying function with unconstrained interface traces.
TwoRayFunction random_offdomain_function(const ExtensionSpec& spec, const GridSpec& grid,
                                         std::mt19937_64& rng);

/// Random member of the adjoint domain: v1(a) = W* v2(b) with kernel traces.
TwoRayFunction random_adjoint_domain_function(const ExtensionSpec& spec, const GridSpec& grid,
                                              std::mt19937_64& rng);

}  // namespace tworay

#endif  // TWORAY_SAMPLING_HPP
