// Copyright (c) the tworay developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef TWORAY_SPECTRAL_HPP
#define TWORAY_SPECTRAL_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tworay/extension.hpp"

namespace tworay {

struct SpectralComponent {
  Ray ray;
  double eigenvalue;   // coefficient eigenvalue the candidate lives on
  bool decay_ok;       // candidate mode is square-integrable on its ray
  double exponent;     // decay rate: Re(lambda) - alpha on the left, beta - Re(lambda) right
};

/// Outcome of the eigenvalue test at one spectral point.
struct SpectralVerdict {
  Complex lambda;
  std::vector<SpectralComponent> per_component;
  bool eigenfunction_exists = false;
  std::string forcing;
};

/// Candidate eigenfunctions restricted to admissible traces are pure
/// exponentials on each ray; classify their integrability by decay exponent.
/// Admissible traces live in the kernels, so simultaneous decay would need
/// Re(lambda) > 0 and Re(lambda) < 0 at once; no point eigenvalue survives.
SpectralVerdict eigen_classify(const ExtensionSpec& spec, Complex lambda);

/// A forced boundary trace that contradicts the kernel or coupling
/// constraints; witnesses non-solvability of (L_W - lambda) u = f.
struct Obstruction {
  Ray ray;
  double eigenvalue;
  double forced_trace_norm;
};

struct ResolventRecord {
  Complex lambda;
  std::optional<TwoRayFunction> solution;
  std::vector<Obstruction> obstruction;
  double residual = 0.0;       // |(l - lambda) u - f| / |f| by quadrature
  double solution_norm = 0.0;  // |u| by quadrature
};

/// Variation-of-constants solve of (l - lambda) u = f in the coefficient
/// eigenbases, integrating each component in its stable direction. Off-axis
/// only: |Re lambda| < 1e-12 raises OnAxis. Forced trace components that
/// violate the kernel/coupling constraints beyond 1e-8 |f| are returned as
/// obstruction certificates instead of a solution.
ResolventRecord resolve(const ExtensionSpec& spec, Complex lambda, const TwoRayFunction& f);

struct SweepRow {
  Complex lambda;
  double norm_estimate = 0.0;
  int obstructed_count = 0;
  double max_residual = 0.0;  // worst relative residual among successful probes
};

struct GridSpec {
  double truncation = 40.0;
  int m = 0;  // 0: use default_grid_size(truncation)

  int size() const { return m > 0 ? m : default_grid_size(truncation); }
};

/// Randomized lower estimate of the resolvent norm at each grid point:
/// the max of |u|/|f| over probe_count random unit-norm probes supported on
/// the boundary-coupled subspace, carrier-matched to Im(lambda). Obstructed
/// probes are skipped and counted. Any on-axis grid point raises OnAxis.
std::vector<SweepRow> resolvent_norm_sweep(const ExtensionSpec& spec,
                                           const std::vector<Complex>& lambda_grid,
                                           int probe_count, const GridSpec& grid,
                                           std::uint64_t seed);

/// One random probe of the sweep family (exposed for tests and reports).
TwoRayFunction random_probe(const ExtensionSpec& spec, Complex lambda, const GridSpec& grid,
                            std::uint64_t seed);

struct DivergenceRow {
  double truncation;
  double norm_sq;
};

/// The explicit on-axis counterexample: with source f1(t) = e^{i lambda_i t}
/// e^{t-a} fstar (decaying envelope; the growing orientation is not
/// square-integrable on the left ray and is repaired here), f2 = 0, the only
/// ray-integrable candidate forces u1(a) = 0 and leaves
/// u1(t) = -e^{i lambda_i t} (1 - e^{t-a}) fstar, whose truncated squared norm
/// grows linearly in T: no L2 solution exists. Returns the truncated norms.
std::vector<DivergenceRow> counterexample_divergence(const ExtensionSpec& spec, double lambda_i,
                                                     const Vector& fstar,
                                                     const std::vector<double>& truncations,
                                                     int density = 400);

struct ProbeBundleParams {
  double re_min = -2.0, re_max = 2.0;
  double im_min = -2.0, im_max = 2.0;
  int grid_points = 41;  // per axis
  std::vector<double> divergence_truncations = {10.0, 20.0, 40.0, 80.0, 100.0};
  std::vector<Complex> sweep_lambdas = {{1.0, 0.0}, {0.5, 0.0}, {2.0, 0.0}, {1.0, 3.0}};
  int probe_count = 8;
  GridSpec sweep_grid = {60.0, 0};
  std::uint64_t seed = 42;
};

struct ProbeBundleReport {
  int lambda_points = 0;
  int eigenfunctions_found = 0;
  std::vector<DivergenceRow> divergence;
  double divergence_slope = 0.0;       // least-squares slope over T >= 20
  double divergence_max_abs_err = 0.0; // against the closed form
  std::vector<SweepRow> sweep;
  std::vector<std::string> notes;
};

/// Point-spectrum scan, counterexample divergence on the first admissible
/// basis vector, and a resolvent norm sweep, bundled into one report.
ProbeBundleReport probe_bundle(const ExtensionSpec& spec, const ProbeBundleParams& params);

/// Closed-form truncated squared norm of the counterexample candidate.
double divergence_closed_form(double truncation);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_divergence_csv(std::ostream& out, const std::vector<DivergenceRow>& rows);

}  // namespace tworay

#endif  // TWORAY_SPECTRAL_HPP
