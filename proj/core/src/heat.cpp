// Copyright (c) the tworay developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "tworay/heat.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <set>
#include <sstream>

namespace tworay {

namespace {

// Simpson weights on a uniform grid, trapezoid when the interval count is odd.
RealVector simpson_weights(int m, double h) {
  RealVector w(m);
  if ((m - 1) % 2 == 0) {
    w.setOnes();
    for (int i = 1; i < m - 1; i += 2) w(i) = 4.0;
    for (int i = 2; i < m - 1; i += 2) w(i) = 2.0;
    w *= h / 3.0;
  } else {
    w.setConstant(h);
    w(0) = w(m - 1) = h / 2.0;
  }
  return w;
}

// Orthonormal cosine mode n evaluated at x.
double cosine_mode(int n, double x) {
  return n == 0 ? 1.0 : std::sqrt(2.0) * std::cos(n * M_PI * x);
}

Matrix mode_coefficients(const Matrix& values, const RealVector& x, int modes) {
  const int mx = static_cast<int>(x.size());
  const double h = (x(mx - 1) - x(0)) / (mx - 1);
  const RealVector w = simpson_weights(mx, h);
  // rows: x-points, cols: modes; quadrature against each mode
  Eigen::MatrixXd basis(mx, modes);
  for (int j = 0; j < mx; ++j) {
    for (int n = 0; n < modes; ++n) basis(j, n) = cosine_mode(n, x(j));
  }
  return values * (w.asDiagonal() * basis);
}

}  // namespace

ExtensionSpec cosine_reduce(const HeatConfig& config) {
  if (config.modes < 1) {
    throw Error(ErrorCode::InvalidArgument, "need at least one cosine mode");
  }
  if (config.phi < 0.0 || config.phi >= 2.0 * M_PI) {
    throw Error(ErrorCode::InvalidArgument, "phi must lie in [0, 2 pi)");
  }
  const int n = config.modes;
  Eigen::VectorXd rates(n);
  for (int k = 0; k < n; ++k) rates(k) = (k * M_PI) * (k * M_PI);
  Matrix a1 = (-rates).cast<Complex>().asDiagonal();
  Matrix a2 = rates.cast<Complex>().asDiagonal();
  Matrix w = (std::exp(Complex(0.0, config.phi)) * Matrix::Identity(n, n)).eval();
  SignedCoefficientPair coeffs(spectral_decompose(a1), spectral_decompose(a2));
  return build_extension(coeffs, UnitaryMap(std::move(w)), config.a, config.b);
}

TwoRayFunction project_source(const SpaceTimeSamples& samples, const HeatConfig& config) {
  const int mx = static_cast<int>(samples.x.size());
  if (mx < 4 * config.modes) {
    throw Error(ErrorCode::GridTooCoarse,
                "need at least 4 x-points per resolved cosine mode");
  }
  if (std::abs(samples.x(0)) > 1e-12 || std::abs(samples.x(mx - 1) - 1.0) > 1e-12) {
    throw Error(ErrorCode::BadGrid, "x grid must cover [0, 1]");
  }
  if (samples.left_values.rows() != samples.t_left.size() ||
      samples.right_values.rows() != samples.t_right.size() ||
      samples.left_values.cols() != mx || samples.right_values.cols() != mx) {
    throw Error(ErrorCode::BadGrid, "sample blocks do not match the grids");
  }
  const double t_left_span = samples.t_left(samples.t_left.size() - 1) - samples.t_left(0);
  const double t_right_span = samples.t_right(samples.t_right.size() - 1) - samples.t_right(0);
  RayFunction left(Ray::left, config.a, t_left_span, samples.t_left,
                   mode_coefficients(samples.left_values, samples.x, config.modes));
  RayFunction right(Ray::right, config.b, t_right_span, samples.t_right,
                    mode_coefficients(samples.right_values, samples.x, config.modes));
  return TwoRayFunction(std::move(left), std::move(right));
}

SpaceTimeSamples read_source_csv(std::istream& in, const HeatConfig& config) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,x,re_f,im_f", 0) != 0) {
    throw Error(ErrorCode::BadGrid, "expected header t,x,re_f,im_f");
  }
  std::set<double> t_left_set, t_right_set, x_set;
  std::map<std::pair<double, double>, Complex> cells;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    double vals[4];
    for (double& v : vals) {
      if (!std::getline(row, cell, ',')) {
        throw Error(ErrorCode::BadGrid, "short CSV row");
      }
      v = std::stod(cell);
    }
    const double t = vals[0];
    if (t <= config.a) {
      t_left_set.insert(t);
    } else if (t >= config.b) {
      t_right_set.insert(t);
    } else {
      throw Error(ErrorCode::BadGrid, "sample time falls between the rays");
    }
    x_set.insert(vals[1]);
    cells[{t, vals[1]}] = Complex(vals[2], vals[3]);
  }
  SpaceTimeSamples samples;
  const auto to_vector = [](const std::set<double>& s) {
    RealVector v(static_cast<int>(s.size()));
    int i = 0;
    for (double value : s) v(i++) = value;
    return v;
  };
  samples.t_left = to_vector(t_left_set);
  samples.t_right = to_vector(t_right_set);
  samples.x = to_vector(x_set);
  const auto fill = [&](const RealVector& ts) {
    Matrix block(ts.size(), samples.x.size());
    for (int i = 0; i < ts.size(); ++i) {
      for (int j = 0; j < samples.x.size(); ++j) {
        const auto it = cells.find({ts(i), samples.x(j)});
        if (it == cells.end()) {
          throw Error(ErrorCode::BadGrid, "missing sample on the tensor grid");
        }
        block(i, j) = it->second;
      }
    }
    return block;
  };
  samples.left_values = fill(samples.t_left);
  samples.right_values = fill(samples.t_right);
  return samples;
}

ProbeBundleReport heat_probe(const HeatConfig& config, const ProbeBundleParams& params) {
  return probe_bundle(cosine_reduce(config), params);
}

}  // namespace tworay
