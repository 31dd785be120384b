#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "ratlas/geometry.hpp"

namespace testsupport {

using ratlas::cplx;
using ratlas::geometry::PointConfig;

inline double rel(cplx a, cplx b) {
  const double s = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / s;
}

inline PointConfig random_config(std::mt19937_64& rng, int n, bool real_strengths = false) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PointConfig c;
  for (int j = 0; j < n; ++j) {
    c.centers.push_back({u(rng), u(rng), u(rng)});
    c.strengths.push_back(real_strengths ? cplx{u(rng), 0.0} : cplx{u(rng), u(rng)});
  }
  return c;
}

inline PointConfig with_zero_strengths(std::vector<ratlas::geometry::Vec3> centers) {
  PointConfig c;
  c.centers = std::move(centers);
  c.strengths.assign(c.centers.size(), cplx{});
  return c;
}

inline PointConfig two_points(double d) { return with_zero_strengths({{0, 0, 0}, {d, 0, 0}}); }

inline PointConfig equilateral() {
  return with_zero_strengths({{0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2.0, 0}});
}

inline PointConfig collinear3() { return with_zero_strengths({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}); }

// l12 = l23 = 1, l13 = 1.5
inline PointConfig case3() {
  return with_zero_strengths({{-0.75, 0, 0}, {0, std::sqrt(1.0 - 0.5625), 0}, {0.75, 0, 0}});
}

inline PointConfig tetrahedron() {
  return with_zero_strengths({{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}});
}

inline PointConfig unit_square() { return with_zero_strengths({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}); }

// Symmetric collinear quadruple: |y1| = |y4| = c1, |y2| = |y3| = c2.
inline PointConfig nW(double c1, double c2) {
  return with_zero_strengths({{-c1, 0, 0}, {-c2, 0, 0}, {c2, 0, 0}, {c1, 0, 0}});
}

// l12 = l23 = l34 = l41 = diam > l24 = 2.2 >= l13 = 2.
inline PointConfig skew_quad() {
  return with_zero_strengths({{1, 0, 1}, {0, 1.1, -1}, {-1, 0, 1}, {0, -1.1, -1}});
}

inline ratlas::geometry::Vec3 rotate(const Eigen::Matrix3d& r, const ratlas::geometry::Vec3& p,
                                     const Eigen::Vector3d& shift) {
  const Eigen::Vector3d q = r * Eigen::Vector3d(p[0], p[1], p[2]) + shift;
  return {q[0], q[1], q[2]};
}

inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::Matrix3d a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = n(rng);
  Eigen::HouseholderQR<Eigen::Matrix3d> qr(a);
  Eigen::Matrix3d q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j);
    i = j + 1;
  }
  return r;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace testsupport
