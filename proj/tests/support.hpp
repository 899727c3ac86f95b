#pragma once

#include <Eigen/Geometry>
#include <random>
#include <vector>

#include "tensortopo/analytic_field.hpp"
#include "tensortopo/locator.hpp"
#include "tensortopo/winding.hpp"

namespace tensortopo::testing {

inline std::array<Vec3, 3> random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  const Eigen::Matrix3d m = q.toRotationMatrix();
  return {Vec3{m(0, 0), m(0, 1), m(0, 2)}, Vec3{m(1, 0), m(1, 1), m(1, 2)}, Vec3{m(2, 0), m(2, 1), m(2, 2)}};
}

inline Vec3 apply(const std::array<Vec3, 3>& rows, const Vec3& p) {
  return {dot(rows[0], p), dot(rows[1], p), dot(rows[2], p)};
}

inline Vec3 apply_transpose(const std::array<Vec3, 3>& rows, const Vec3& p) {
  return rows[0] * p.x + rows[1] * p.y + rows[2] * p.z;
}

/// Field rotated rigidly: T'(p) = R T(R^T p) R^T.
inline FieldSampler rotated_sampler(FieldSampler f, std::array<Vec3, 3> rows) {
  return [f = std::move(f), rows](const Vec3& p) -> std::optional<SymTensor3> {
    const auto t = f(apply_transpose(rows, p));
    if (!t) return std::nullopt;
    return t->rotated(rows);
  };
}

inline std::vector<Vec3> circle(const Vec3& c, const Vec3& normal, double r, int n) {
  const Vec3 a = normalized(std::abs(normal.x) < 0.9 ? cross(normal, Vec3{1, 0, 0}) : cross(normal, Vec3{0, 1, 0}));
  const Vec3 b = cross(normalized(normal), a);
  std::vector<Vec3> pts;
  for (int k = 0; k < n; ++k) {
    const double t = 2 * M_PI * k / n;
    pts.push_back(c + a * (r * std::cos(t)) + b * (r * std::sin(t)));
  }
  return pts;
}

/// Closed polygon through the corners, `per_side` samples per side.
inline std::vector<Vec3> polygon(const std::vector<Vec3>& corners, int per_side) {
  std::vector<Vec3> pts;
  for (std::size_t i = 0; i < corners.size(); ++i) {
    const Vec3 a = corners[i], b = corners[(i + 1) % corners.size()];
    for (int k = 0; k < per_side; ++k) pts.push_back(a + (b - a) * (double(k) / per_side));
  }
  return pts;
}

/// Two rectangles [-2,0]x[-1,1] and [0,2]x[-1,1] in z = 0 sharing the segment
/// x = 0, and their union.
struct TwoDisk {
  std::vector<Vec3> left, right, both;
};

inline TwoDisk two_disk(int per_unit = 24) {
  TwoDisk d;
  d.left = polygon({{-2, -1, 0}, {0, -1, 0}, {0, 1, 0}, {-2, 1, 0}}, 2 * per_unit);
  d.right = polygon({{0, -1, 0}, {2, -1, 0}, {2, 1, 0}, {0, 1, 0}}, 2 * per_unit);
  d.both = polygon({{-2, -1, 0}, {2, -1, 0}, {2, 1, 0}, {-2, 1, 0}}, 2 * per_unit);
  return d;
}

/// Degenerate lines at (-1, 0) and (1, 0) in a parallel-lines field.
struct TwoDiskCase {
  bool wedge_left, wedge_right, planar;
  double shift;
};

inline AnalyticField two_disk_field(const TwoDiskCase& c) {
  return AnalyticField::parallel_lines({{-1 + c.shift, 0.3 * c.shift, c.wedge_left}, {1 - c.shift, -0.2 * c.shift, c.wedge_right}},
                                       c.planar);
}

inline std::vector<TwoDiskCase> two_disk_cases() {
  return {{true, true, false, 0.0},  {true, false, false, 0.0}, {false, false, false, 0.0}, {true, true, true, 0.0},
          {true, false, true, 0.0},  {false, false, true, 0.0}, {true, true, false, 0.3},  {false, true, false, 0.2},
          {false, false, true, 0.4}, {true, false, true, 0.25}};
}

}  // namespace tensortopo::testing
