// Copyright (c) the tworay developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "tworay/ray_function.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace tworay {

namespace {

void format_double(std::string& out, double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  out += buf;
}

}  // namespace

RayFunction::RayFunction(Ray ray, double endpoint, double truncation, RealVector nodes,
                         Matrix values)
    : ray_(ray),
      endpoint_(endpoint),
      truncation_(truncation),
      nodes_(std::move(nodes)),
      values_(std::move(values)) {
  const int m = static_cast<int>(nodes_.size());
  if (!(truncation_ > 0.0) || m < 3) {
    throw Error(ErrorCode::BadGrid, "need T > 0 and at least 3 nodes");
  }
  if (values_.rows() != m || values_.cols() < 1) {
    throw Error(ErrorCode::BadGrid, "values shape does not match grid");
  }
  for (int i = 1; i < m; ++i) {
    if (!(nodes_(i) > nodes_(i - 1))) {
      throw Error(ErrorCode::BadGrid, "nodes must be strictly increasing");
    }
  }
  const double anchor = (ray_ == Ray::left) ? nodes_(m - 1) : nodes_(0);
  if (std::abs(anchor - endpoint_) > 1e-12 * std::max(1.0, std::abs(endpoint_))) {
    throw Error(ErrorCode::BadGrid, "grid does not touch the ray endpoint");
  }
  if (!values_.allFinite()) {
    throw Error(ErrorCode::BadGrid, "values contain NaN or Inf");
  }
}

Vector RayFunction::endpoint_value() const {
  return (ray_ == Ray::left) ? values_.row(size() - 1).transpose() : values_.row(0).transpose();
}

Vector RayFunction::far_value() const {
  return (ray_ == Ray::left) ? values_.row(0).transpose() : values_.row(size() - 1).transpose();
}

double RayFunction::uniform_step() const {
  const int m = size();
  const double h = (nodes_(m - 1) - nodes_(0)) / (m - 1);
  for (int i = 1; i < m; ++i) {
    if (std::abs(nodes_(i) - nodes_(i - 1) - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw Error(ErrorCode::BadGrid, "grid is not uniform");
    }
  }
  return h;
}

bool RayFunction::same_grid(const RayFunction& other) const {
  if (ray_ != other.ray_ || size() != other.size() || dim() != other.dim()) return false;
  return (nodes_ - other.nodes_).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, truncation_);
}

TwoRayFunction::TwoRayFunction(RayFunction l, RayFunction r)
    : left(std::move(l)), right(std::move(r)) {
  if (left.ray() != Ray::left || right.ray() != Ray::right) {
    throw Error(ErrorCode::BadGrid, "component rays are swapped");
  }
  if (left.dim() != right.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "ray components have different dim");
  }
}

int default_grid_size(double truncation) {
  return static_cast<int>(std::lround(400.0 * truncation)) + 1;
}

RayFunction make_uniform(Ray ray, double endpoint, double truncation, int m,
                         const std::function<Vector(double)>& sampler) {
  if (!(truncation > 0.0) || m < 3) {
    throw Error(ErrorCode::BadGrid, "need T > 0 and m >= 3");
  }
  const double lo = (ray == Ray::left) ? endpoint - truncation : endpoint;
  RealVector nodes(m);
  const double h = truncation / (m - 1);
  for (int i = 0; i < m; ++i) nodes(i) = lo + h * i;
  // Pin the interface node exactly.
  if (ray == Ray::left) {
    nodes(m - 1) = endpoint;
  } else {
    nodes(0) = endpoint;
  }
  Vector first = sampler(nodes(0));
  Matrix values(m, first.size());
  values.row(0) = first.transpose();
  for (int i = 1; i < m; ++i) {
    values.row(i) = sampler(nodes(i)).transpose();
  }
  return RayFunction(ray, endpoint, truncation, std::move(nodes), std::move(values));
}

RayFunction make_zero(Ray ray, double endpoint, double truncation, int m, int dim) {
  return make_uniform(ray, endpoint, truncation, m,
                      [dim](double) { return Vector::Zero(dim).eval(); });
}

namespace {

void require_same_grid(const RayFunction& u, const RayFunction& v) {
  if (!u.same_grid(v)) {
    throw Error(ErrorCode::GridMismatch, "ray grids differ");
  }
}

// Simpson weights when the interval count is even, else trapezoid.
RealVector quadrature_weights(const RealVector& nodes) {
  const int m = static_cast<int>(nodes.size());
  const double h = (nodes(m - 1) - nodes(0)) / (m - 1);
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

}  // namespace

Complex quad_inner(const RayFunction& u, const RayFunction& v) {
  require_same_grid(u, v);
  const RealVector w = quadrature_weights(u.nodes());
  Complex acc(0.0, 0.0);
  for (int i = 0; i < u.size(); ++i) {
    acc += w(i) * u.values().row(i).cwiseProduct(v.values().row(i).conjugate()).sum();
  }
  return acc;
}

Complex quad_inner(const TwoRayFunction& u, const TwoRayFunction& v) {
  return quad_inner(u.left, v.left) + quad_inner(u.right, v.right);
}

double quad_norm_sq(const RayFunction& u) { return quad_inner(u, u).real(); }

double quad_norm_sq(const TwoRayFunction& u) {
  return quad_norm_sq(u.left) + quad_norm_sq(u.right);
}

RayFunction differentiate(const RayFunction& u) {
  const int m = u.size();
  if (m < 5) {
    throw Error(ErrorCode::GridTooCoarse, "differentiation needs at least 5 nodes");
  }
  const double h = u.uniform_step();
  const Matrix& v = u.values();
  Matrix d(m, u.dim());
  const double s = 1.0 / (12.0 * h);
  d.row(0) = s * (-25.0 * v.row(0) + 48.0 * v.row(1) - 36.0 * v.row(2) + 16.0 * v.row(3) -
                  3.0 * v.row(4));
  d.row(1) =
      s * (-3.0 * v.row(0) - 10.0 * v.row(1) + 18.0 * v.row(2) - 6.0 * v.row(3) + v.row(4));
  for (int i = 2; i < m - 2; ++i) {
    d.row(i) = s * (v.row(i - 2) - 8.0 * v.row(i - 1) + 8.0 * v.row(i + 1) - v.row(i + 2));
  }
  d.row(m - 2) = s * (3.0 * v.row(m - 1) + 10.0 * v.row(m - 2) - 18.0 * v.row(m - 3) +
                      6.0 * v.row(m - 4) - v.row(m - 5));
  d.row(m - 1) = s * (25.0 * v.row(m - 1) - 48.0 * v.row(m - 2) + 36.0 * v.row(m - 3) -
                      16.0 * v.row(m - 4) + 3.0 * v.row(m - 5));
  return RayFunction(u.ray(), u.endpoint(), u.truncation(), u.nodes(), std::move(d));
}

std::pair<Vector, Vector> trace(const TwoRayFunction& u) {
  return {u.left.endpoint_value(), u.right.endpoint_value()};
}

void write_csv(std::ostream& out, const RayFunction& u) {
  std::string buf;
  buf += "ray,endpoint,T\n";
  buf += (u.ray() == Ray::left) ? "left," : "right,";
  format_double(buf, u.endpoint());
  buf += ',';
  format_double(buf, u.truncation());
  buf += "\nt";
  for (int d = 1; d <= u.dim(); ++d) {
    buf += ",re_v" + std::to_string(d) + ",im_v" + std::to_string(d);
  }
  buf += '\n';
  for (int i = 0; i < u.size(); ++i) {
    format_double(buf, u.nodes()(i));
    for (int d = 0; d < u.dim(); ++d) {
      buf += ',';
      format_double(buf, u.values()(i, d).real());
      buf += ',';
      format_double(buf, u.values()(i, d).imag());
    }
    buf += '\n';
  }
  out << buf;
}

RayFunction read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("ray,endpoint,T", 0) != 0) {
    throw Error(ErrorCode::BadGrid, "missing ray metadata header");
  }
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::BadGrid, "missing ray metadata row");
  }
  std::stringstream meta(line);
  std::string ray_name, endpoint_s, trunc_s;
  std::getline(meta, ray_name, ',');
  std::getline(meta, endpoint_s, ',');
  std::getline(meta, trunc_s, ',');
  const Ray ray = (ray_name == "left") ? Ray::left : Ray::right;
  const double endpoint = std::stod(endpoint_s);
  const double truncation = std::stod(trunc_s);
  if (!std::getline(in, line) || line.rfind("t,", 0) != 0) {
    throw Error(ErrorCode::BadGrid, "missing column header");
  }
  std::vector<double> flat;
  int cols = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    int c = 0;
    while (std::getline(row, cell, ',')) {
      flat.push_back(std::stod(cell));
      ++c;
    }
    if (cols < 0) cols = c;
    if (c != cols) throw Error(ErrorCode::BadGrid, "ragged CSV row");
  }
  if (cols < 3 || (cols - 1) % 2 != 0) {
    throw Error(ErrorCode::BadGrid, "expected columns t, re_v*, im_v*");
  }
  const int m = static_cast<int>(flat.size()) / cols;
  const int dim = (cols - 1) / 2;
  RealVector nodes(m);
  Matrix values(m, dim);
  for (int i = 0; i < m; ++i) {
    nodes(i) = flat[static_cast<size_t>(i) * cols];
    for (int d = 0; d < dim; ++d) {
      values(i, d) = Complex(flat[static_cast<size_t>(i) * cols + 1 + 2 * d],
                             flat[static_cast<size_t>(i) * cols + 2 + 2 * d]);
    }
  }
  return RayFunction(ray, endpoint, truncation, std::move(nodes), std::move(values));
}

}  // namespace tworay
