// Copyright (c) the tworay developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "tworay/spectral.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>

namespace tworay {

namespace {

constexpr double kAxisTol = 1e-12;
constexpr double kObstructionScale = 1e-8;
constexpr double kFarDecayTol = 1e-8;

// Moments M_j(z) = int_0^1 e^{-z s} s^j ds, j = 0..3. Series for small |z|
// (the direct formulas cancel catastrophically there), recurrence otherwise.
std::array<Complex, 4> exp_moments(Complex z) {
  std::array<Complex, 4> m{};
  if (std::abs(z) < 1.0) {
    for (int j = 0; j < 4; ++j) {
      Complex term(0.0, 0.0);
      Complex zn(1.0, 0.0);
      double fact = 1.0;
      for (int n = 0; n < 26; ++n) {
        term += zn / (fact * (j + n + 1));
        zn *= -z;
        fact *= (n + 1);
      }
      m[j] = term;
    }
  } else {
    const Complex ez = std::exp(-z);
    m[0] = (1.0 - ez) / z;
    for (int j = 1; j < 4; ++j) {
      m[j] = (static_cast<double>(j) * m[j - 1] - ez) / z;
    }
  }
  return m;
}

// Coefficients of the cubic Lagrange basis on integer sigma-nodes
// {o, o+1, o+2, o+3}: row k holds the sigma-power coefficients of L_k.
Eigen::Matrix4d lagrange_coeffs(int offset) {
  Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
  for (int k = 0; k < 4; ++k) {
    double poly[4] = {1.0, 0.0, 0.0, 0.0};  // ascending powers
    int deg = 0;
    double denom = 1.0;
    for (int l = 0; l < 4; ++l) {
      if (l == k) continue;
      const double node = offset + l;
      // multiply poly by (sigma - node)
      for (int j = deg + 1; j > 0; --j) poly[j] = poly[j - 1] - node * poly[j];
      poly[0] *= -node;
      ++deg;
      denom *= (k - l);
    }
    for (int j = 0; j < 4; ++j) c(k, j) = poly[j] / denom;
  }
  return c;
}

// Weights for h * int_0^1 e^{-z sigma} f(t_i + sigma h) dsigma with f sampled
// at the four nodes t_{i+offset} .. t_{i+offset+3}. Exact in the exponential
// kernel, cubic in f.
std::array<Complex, 4> kernel_weights(Complex z, int offset, double h) {
  const Eigen::Matrix4d c = lagrange_coeffs(offset);
  const std::array<Complex, 4> m = exp_moments(z);
  std::array<Complex, 4> w{};
  for (int k = 0; k < 4; ++k) {
    Complex acc(0.0, 0.0);
    for (int j = 0; j < 4; ++j) acc += c(k, j) * m[j];
    w[k] = h * acc;
  }
  return w;
}

void require_stable(Complex z, const char* who) {
  if (z.real() < -1e-6) {
    throw Error(ErrorCode::Overflow, std::string(who) + ": unstable integration direction");
  }
}

// v_i = int_{t_i}^{t_end} e^{mu (t_i - s)} f(s) ds, marching from the upper
// end with the one-step decay factor e^{-mu h}; needs Re(mu) >= 0.
Vector march_backward(double h, const Vector& f, Complex mu) {
  const int m = static_cast<int>(f.size());
  const Complex z = mu * h;
  require_stable(z, "march_backward");
  const Complex dec = std::exp(-z);
  const auto w_int = kernel_weights(z, -1, h);
  const auto w_first = kernel_weights(z, 0, h);
  const auto w_last = kernel_weights(z, -2, h);
  Vector v = Vector::Zero(m);
  for (int i = m - 2; i >= 0; --i) {
    const std::array<Complex, 4>* w = &w_int;
    int base = i - 1;
    if (i == 0) {
      w = &w_first;
      base = 0;
    } else if (i == m - 2) {
      w = &w_last;
      base = m - 4;
    }
    const Complex local = (*w)[0] * f(base) + (*w)[1] * f(base + 1) + (*w)[2] * f(base + 2) +
                          (*w)[3] * f(base + 3);
    v(i) = dec * v(i + 1) + local;
  }
  return v;
}

// u_i = int_{t_0}^{t_i} e^{mu (t_i - s)} f(s) ds, marching from the lower end
// with the one-step factor e^{mu h}; needs Re(mu) <= 0.
Vector march_forward(double h, const Vector& f, Complex mu) {
  const int m = static_cast<int>(f.size());
  const Complex z = -mu * h;
  require_stable(z, "march_forward");
  const Complex grow = std::exp(-z);
  const auto w_int = kernel_weights(z, -1, h);
  const auto w_first = kernel_weights(z, -2, h);
  const auto w_last = kernel_weights(z, 0, h);
  Vector u = Vector::Zero(m);
  for (int i = 0; i < m - 1; ++i) {
    const std::array<Complex, 4>* w = &w_int;
    int offset = -1;
    if (i == 0) {
      w = &w_first;
      offset = -2;
    } else if (i == m - 2) {
      w = &w_last;
      offset = 0;
    }
    Complex local(0.0, 0.0);
    for (int k = 0; k < 4; ++k) local += (*w)[k] * f(i + 1 - (offset + k));
    u(i + 1) = grow * u(i) + local;
  }
  return u;
}

double kernel_cutoff(const HermitianOperator& op, double ker_tol) {
  return ker_tol * std::max(1.0, op.spectral_radius());
}

void format_double(std::string& out, double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  out += buf;
}

struct ComponentPlan {
  double eigenvalue = 0.0;      // true coefficient eigenvalue
  double effective = 0.0;       // clamped to 0 inside the kernel cutoff
  bool kernel = false;
  bool free_constant = false;   // homogeneous mode is ray-integrable
  Complex forced_trace = 0.0;   // endpoint value of the forced particular solution
};

}  // namespace

double divergence_closed_form(double truncation) {
  return truncation - 2.0 + 2.0 * std::exp(-truncation) + 0.5 -
         0.5 * std::exp(-2.0 * truncation);
}

SpectralVerdict eigen_classify(const ExtensionSpec& spec, Complex lambda) {
  SpectralVerdict verdict;
  verdict.lambda = lambda;
  const double lr = lambda.real();
  const Matrix& k = spec.k_basis();
  if (k.cols() == 0) {
    verdict.eigenfunction_exists = false;
    verdict.forcing = "admissible trace subspace is trivial; no candidate traces";
    return verdict;
  }
  const auto& a1 = spec.coeffs().a1();
  const auto& a2 = spec.coeffs().a2();
  const double cut1 = kernel_cutoff(a1, spec.ker_tol());
  const double cut2 = kernel_cutoff(a2, spec.ker_tol());
  const Matrix left_overlap = a1.eigenvectors().adjoint() * k;
  const Matrix right_overlap = a2.eigenvectors().adjoint() * (spec.w().entries() * k);
  bool left_ok = false;
  bool right_ok = false;
  for (int i = 0; i < spec.dim(); ++i) {
    if (left_overlap.row(i).norm() > 1e-12) {
      const double alpha = a1.eigenvalues()(i);
      const double eff = std::abs(alpha) <= cut1 ? 0.0 : alpha;
      SpectralComponent comp{Ray::left, alpha, lr > eff, lr - eff};
      left_ok = left_ok || comp.decay_ok;
      verdict.per_component.push_back(comp);
    }
  }
  for (int i = 0; i < spec.dim(); ++i) {
    if (right_overlap.row(i).norm() > 1e-12) {
      const double beta = a2.eigenvalues()(i);
      const double eff = std::abs(beta) <= cut2 ? 0.0 : beta;
      SpectralComponent comp{Ray::right, beta, lr < eff, eff - lr};
      right_ok = right_ok || comp.decay_ok;
      verdict.per_component.push_back(comp);
    }
  }
  verdict.eigenfunction_exists = left_ok && right_ok;
  if (lr > 0.0) {
    verdict.forcing = "right-ray candidates grow: admissible traces force Re(lambda) < 0 there";
  } else if (lr < 0.0) {
    verdict.forcing = "left-ray candidates grow: admissible traces force Re(lambda) > 0 there";
  } else {
    verdict.forcing =
        "neutral exponents on both rays: candidates keep constant magnitude and are not "
        "square-integrable";
  }
  return verdict;
}

ResolventRecord resolve(const ExtensionSpec& spec, Complex lambda, const TwoRayFunction& f) {
  if (f.dim() != spec.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "forcing dim does not match spec");
  }
  if (std::abs(f.left.endpoint() - spec.a()) > 1e-12 ||
      std::abs(f.right.endpoint() - spec.b()) > 1e-12) {
    throw Error(ErrorCode::GridMismatch, "forcing grids do not touch the interface points");
  }
  if (f.left.size() < 5 || f.right.size() < 5) {
    throw Error(ErrorCode::GridTooCoarse, "resolvent solve needs at least 5 nodes per ray");
  }
  const double lr = lambda.real();
  if (std::abs(lr) < kAxisTol) {
    throw Error(ErrorCode::OnAxis, "declines to solve on the imaginary axis");
  }
  const double far = std::max(f.left.far_value().cwiseAbs().maxCoeff(),
                              f.right.far_value().cwiseAbs().maxCoeff());
  if (far > kFarDecayTol) {
    throw Error(ErrorCode::TruncationUnsound, "forcing does not decay at the truncated ends");
  }

  ResolventRecord rec;
  rec.lambda = lambda;
  const double fnorm = std::sqrt(quad_norm_sq(f));
  const int n = spec.dim();
  const int ml = f.left.size();
  const int mr = f.right.size();

  if (fnorm == 0.0) {
    rec.solution = TwoRayFunction(
        make_zero(Ray::left, spec.a(), f.left.truncation(), ml, n),
        make_zero(Ray::right, spec.b(), f.right.truncation(), mr, n));
    return rec;
  }

  const auto& a1 = spec.coeffs().a1();
  const auto& a2 = spec.coeffs().a2();
  const double hl = f.left.uniform_step();
  const double hr = f.right.uniform_step();
  const double cut1 = kernel_cutoff(a1, spec.ker_tol());
  const double cut2 = kernel_cutoff(a2, spec.ker_tol());
  const double tol_obs = kObstructionScale * fnorm;

  // Components of f in the coefficient eigenbases (columns per eigenvector).
  const Matrix f1 = f.left.values() * a1.eigenvectors().conjugate();
  const Matrix f2 = f.right.values() * a2.eigenvectors().conjugate();

  Matrix u1 = Matrix::Zero(ml, n);
  Matrix u2 = Matrix::Zero(mr, n);
  std::vector<ComponentPlan> left(n), right(n);

  for (int i = 0; i < n; ++i) {
    ComponentPlan& plan = left[i];
    plan.eigenvalue = a1.eigenvalues()(i);
    plan.kernel = std::abs(plan.eigenvalue) <= cut1;
    plan.effective = plan.kernel ? 0.0 : plan.eigenvalue;
    const Complex mu = lambda - plan.eigenvalue;
    plan.free_constant = lr > plan.effective;
    if (plan.free_constant) {
      u1.col(i) = -march_backward(hl, f1.col(i), mu);  // trace at a vanishes
    } else {
      u1.col(i) = march_forward(hl, f1.col(i), mu);
      plan.forced_trace = u1(ml - 1, i);
      if (!plan.kernel && std::abs(plan.forced_trace) > tol_obs) {
        rec.obstruction.push_back({Ray::left, plan.eigenvalue, std::abs(plan.forced_trace)});
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    ComponentPlan& plan = right[i];
    plan.eigenvalue = a2.eigenvalues()(i);
    plan.kernel = std::abs(plan.eigenvalue) <= cut2;
    plan.effective = plan.kernel ? 0.0 : plan.eigenvalue;
    const Complex mu = lambda - plan.eigenvalue;
    plan.free_constant = lr < plan.effective;
    if (plan.free_constant) {
      u2.col(i) = march_forward(hr, f2.col(i), mu);  // trace at b vanishes
    } else {
      u2.col(i) = -march_backward(hr, f2.col(i), mu);
      plan.forced_trace = u2(0, i);
      if (!plan.kernel && std::abs(plan.forced_trace) > tol_obs) {
        rec.obstruction.push_back({Ray::right, plan.eigenvalue, std::abs(plan.forced_trace)});
      }
    }
  }

  // Couple the kernel components through the interface. Off the axis exactly
  // one side of the kernel pair is forced; the unitary parameter carries the
  // forced trace to the free side. A carried trace that leaves the kernel on
  // the free side is an obstruction.
  if (lr > 0.0) {
    Vector forced = Vector::Zero(n);  // u2(b) restricted to the kernel of A2
    for (int i = 0; i < n; ++i) {
      if (right[i].kernel) forced += right[i].forced_trace * a2.eigenvectors().col(i);
    }
    const Vector carried = spec.w().apply_inverse(forced);  // candidate u1(a)
    for (int i = 0; i < n; ++i) {
      const Complex c = a1.eigenvectors().col(i).dot(carried);
      if (left[i].kernel) {
        if (std::abs(c) > 0.0) {
          const Complex mu = lambda - left[i].eigenvalue;
          for (int r = 0; r < ml; ++r) {
            u1(r, i) += c * std::exp(mu * (f.left.nodes()(r) - spec.a()));
          }
        }
      } else if (std::abs(c) > tol_obs) {
        rec.obstruction.push_back({Ray::left, left[i].eigenvalue, std::abs(c)});
      }
    }
  } else {
    Vector forced = Vector::Zero(n);  // u1(a) restricted to the kernel of A1
    for (int i = 0; i < n; ++i) {
      if (left[i].kernel) forced += left[i].forced_trace * a1.eigenvectors().col(i);
    }
    const Vector carried = spec.w().apply(forced);  // candidate u2(b)
    for (int i = 0; i < n; ++i) {
      const Complex c = a2.eigenvectors().col(i).dot(carried);
      if (right[i].kernel) {
        if (std::abs(c) > 0.0) {
          const Complex mu = lambda - right[i].eigenvalue;
          for (int r = 0; r < mr; ++r) {
            u2(r, i) += c * std::exp(mu * (f.right.nodes()(r) - spec.b()));
          }
        }
      } else if (std::abs(c) > tol_obs) {
        rec.obstruction.push_back({Ray::right, right[i].eigenvalue, std::abs(c)});
      }
    }
  }

  if (!rec.obstruction.empty()) {
    rec.residual = std::numeric_limits<double>::quiet_NaN();
    rec.solution_norm = std::numeric_limits<double>::quiet_NaN();
    return rec;
  }

  RayFunction sol_left(Ray::left, spec.a(), f.left.truncation(), f.left.nodes(),
                       u1 * a1.eigenvectors().transpose());
  RayFunction sol_right(Ray::right, spec.b(), f.right.truncation(), f.right.nodes(),
                        u2 * a2.eigenvectors().transpose());
  TwoRayFunction solution(std::move(sol_left), std::move(sol_right));

  const TwoRayFunction lu = apply_expression(spec, solution, ExpressionVariant::direct);
  RayFunction res_left = lu.left;
  RayFunction res_right = lu.right;
  res_left.mutable_values() -= lambda * solution.left.values() + f.left.values();
  res_right.mutable_values() -= lambda * solution.right.values() + f.right.values();
  rec.residual = std::sqrt(quad_norm_sq(res_left) + quad_norm_sq(res_right)) / fnorm;
  rec.solution_norm = std::sqrt(quad_norm_sq(solution));
  rec.solution = std::move(solution);
  return rec;
}

namespace {

// Random carrier-modulated probe supported on the boundary-coupled subspace.
TwoRayFunction make_probe(const ExtensionSpec& spec, Complex lambda, const GridSpec& grid,
                          std::mt19937_64& rng) {
  const int n = spec.dim();
  const int k = spec.dim_k();
  const int m = grid.size();
  std::normal_distribution<double> gauss(0.0, 1.0);

  Vector direction = Vector::Zero(n);
  if (k > 0) {
    Vector coef(k);
    for (int i = 0; i < k; ++i) coef(i) = Complex(gauss(rng), gauss(rng));
    direction = spec.k_basis() * coef;
    direction /= direction.norm();
  }
  const Vector dir_right = spec.w().apply(direction);

  const auto envelope = [&](std::mt19937_64& r) {
    std::array<double, 8> coeffs{};
    for (double& c : coeffs) c = gauss(r);
    return [coeffs](double x) {
      double e = 1.0;
      for (int kk = 1; kk <= 4; ++kk) {
        e += 0.7 / kk *
             (coeffs[2 * kk - 2] * std::cos(M_PI * kk * x) +
              coeffs[2 * kk - 1] * std::sin(M_PI * kk * x));
      }
      const double roll =
          x < 0.85 ? 1.0 : 0.5 * (1.0 + std::cos(M_PI * (x - 0.85) / 0.15));
      return e * roll;
    };
  };
  const auto env_left = envelope(rng);
  const auto env_right = envelope(rng);
  const double li = lambda.imag();
  const double a = spec.a();
  const double b = spec.b();
  const double T = grid.truncation;

  RayFunction fl = make_uniform(Ray::left, a, T, m, [&](double t) {
    const double x = (a - t) / T;
    return (std::exp(Complex(0.0, li * (t - a))) * env_left(x) * direction).eval();
  });
  RayFunction fr = make_uniform(Ray::right, b, T, m, [&](double t) {
    const double x = (t - b) / T;
    return (std::exp(Complex(0.0, li * (t - b))) * env_right(x) * dir_right).eval();
  });
  TwoRayFunction f(std::move(fl), std::move(fr));
  const double nf = std::sqrt(quad_norm_sq(f));
  if (nf > 0.0) {
    f.left.mutable_values() /= nf;
    f.right.mutable_values() /= nf;
  }
  return f;
}

}  // namespace

TwoRayFunction random_probe(const ExtensionSpec& spec, Complex lambda, const GridSpec& grid,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return make_probe(spec, lambda, grid, rng);
}

std::vector<SweepRow> resolvent_norm_sweep(const ExtensionSpec& spec,
                                           const std::vector<Complex>& lambda_grid,
                                           int probe_count, const GridSpec& grid,
                                           std::uint64_t seed) {
  for (const Complex& lambda : lambda_grid) {
    if (std::abs(lambda.real()) < kAxisTol) {
      throw Error(ErrorCode::OnAxis, "sweep grid touches the imaginary axis");
    }
  }
  std::mt19937_64 rng(seed);
  std::vector<SweepRow> rows;
  rows.reserve(lambda_grid.size());
  for (const Complex& lambda : lambda_grid) {
    SweepRow row;
    row.lambda = lambda;
    for (int p = 0; p < probe_count; ++p) {
      const TwoRayFunction f = make_probe(spec, lambda, grid, rng);
      const ResolventRecord rec = resolve(spec, lambda, f);
      if (rec.solution.has_value()) {
        row.norm_estimate = std::max(row.norm_estimate, rec.solution_norm);
        row.max_residual = std::max(row.max_residual, rec.residual);
      } else {
        ++row.obstructed_count;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<DivergenceRow> counterexample_divergence(const ExtensionSpec& spec, double lambda_i,
                                                     const Vector& fstar,
                                                     const std::vector<double>& truncations,
                                                     int density) {
  if (fstar.size() != spec.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "fstar dim does not match spec");
  }
  if (std::abs(fstar.norm() - 1.0) > 1e-8) {
    throw Error(ErrorCode::NotInKernel, "fstar must have unit norm");
  }
  const Matrix& k = spec.k_basis();
  const Vector outside = fstar - k * (k.adjoint() * fstar);
  if (outside.norm() > 1e-8) {
    throw Error(ErrorCode::NotInKernel, "fstar is not in the admissible subspace");
  }
  const auto& a1 = spec.coeffs().a1();
  const double a = spec.a();
  const Vector coef = a1.eigenvectors().adjoint() * fstar;
  std::vector<DivergenceRow> rows;
  rows.reserve(truncations.size());
  for (const double truncation : truncations) {
    if (!(truncation > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "truncation lengths must be positive");
    }
    const int m = static_cast<int>(std::lround(density * truncation)) + 1;
    RealVector nodes(m);
    const double h = truncation / (m - 1);
    for (int i = 0; i < m; ++i) nodes(i) = (a - truncation) + h * i;
    nodes(m - 1) = a;
    // Source component samples: e^{i lambda_i t} e^{t-a} in each kernel mode.
    Vector envelope(m);
    for (int i = 0; i < m; ++i) {
      envelope(i) = std::exp(Complex(nodes(i) - a, lambda_i * nodes(i)));
    }
    Matrix u(m, spec.dim());
    for (int c = 0; c < spec.dim(); ++c) {
      const Complex mu = Complex(0.0, lambda_i) - a1.eigenvalues()(c);
      const Vector fc = coef(c) * envelope;
      u.col(c) = -march_backward(h, fc, mu);
    }
    RayFunction candidate(Ray::left, a, truncation, std::move(nodes),
                          u * a1.eigenvectors().transpose());
    rows.push_back({truncation, quad_norm_sq(candidate)});
  }
  return rows;
}

ProbeBundleReport probe_bundle(const ExtensionSpec& spec, const ProbeBundleParams& params) {
  ProbeBundleReport report;
  const int g = params.grid_points;
  report.lambda_points = g * g;
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      const double re =
          g > 1 ? params.re_min + (params.re_max - params.re_min) * i / (g - 1) : params.re_min;
      const double im =
          g > 1 ? params.im_min + (params.im_max - params.im_min) * j / (g - 1) : params.im_min;
      if (eigen_classify(spec, Complex(re, im)).eigenfunction_exists) {
        ++report.eigenfunctions_found;
      }
    }
  }

  if (spec.dim_k() > 0) {
    const Vector fstar = spec.k_basis().col(0);
    report.divergence =
        counterexample_divergence(spec, 0.7, fstar, params.divergence_truncations);
    for (const DivergenceRow& row : report.divergence) {
      report.divergence_max_abs_err =
          std::max(report.divergence_max_abs_err,
                   std::abs(row.norm_sq - divergence_closed_form(row.truncation)));
    }
    // Least-squares slope of norm_sq vs T over the tail T >= 20.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (const DivergenceRow& row : report.divergence) {
      if (row.truncation < 20.0) continue;
      sx += row.truncation;
      sy += row.norm_sq;
      sxx += row.truncation * row.truncation;
      sxy += row.truncation * row.norm_sq;
      ++count;
    }
    if (count >= 2) {
      report.divergence_slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    }
    report.notes.push_back(
        "counterexample source uses the decaying envelope exp(t-a); the growing orientation "
        "is not square-integrable on the left ray");
  } else {
    report.notes.push_back("admissible subspace is trivial; divergence scan skipped");
  }

  report.sweep = resolvent_norm_sweep(spec, params.sweep_lambdas, params.probe_count,
                                      params.sweep_grid, params.seed);
  int obstructed = 0;
  for (const SweepRow& row : report.sweep) obstructed += row.obstructed_count;
  if (obstructed > 0) {
    report.notes.push_back("sweep skipped " + std::to_string(obstructed) +
                           " obstructed probe solves");
  }
  return report;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  std::string buf = "re_lambda,im_lambda,norm_estimate,obstructed_count\n";
  for (const SweepRow& row : rows) {
    format_double(buf, row.lambda.real());
    buf += ',';
    format_double(buf, row.lambda.imag());
    buf += ',';
    format_double(buf, row.norm_estimate);
    buf += ',';
    buf += std::to_string(row.obstructed_count);
    buf += '\n';
  }
  out << buf;
}

void write_divergence_csv(std::ostream& out, const std::vector<DivergenceRow>& rows) {
  std::string buf = "T,norm_sq\n";
  for (const DivergenceRow& row : rows) {
    format_double(buf, row.truncation);
    buf += ',';
    format_double(buf, row.norm_sq);
    buf += '\n';
  }
  out << buf;
}

}  // namespace tworay
