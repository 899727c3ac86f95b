#include "tensortopo/curve_invariants.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tensortopo {

void Polyline3::validate() const {
  if (points.size() < 3) throw ConfigError("polyline needs at least 3 points, got " + std::to_string(points.size()));
  for (std::size_t i = 0; i < num_segments(); ++i) {
    const Segment3 s = segment(i);
    if (distance(s.a, s.b) <= 1e-12) throw ConfigError("polyline has repeated point at index " + std::to_string(i));
  }
}

double Polyline3::length() const {
  double l = 0;
  for (std::size_t i = 0; i < num_segments(); ++i) l += distance(segment(i).a, segment(i).b);
  return l;
}

double segment_distance(const Segment3& s, const Segment3& t) {
  const Vec3 d1 = s.b - s.a, d2 = t.b - t.a, r = s.a - t.a;
  const double a = dot(d1, d1), e = dot(d2, d2), f = dot(d2, r);
  const double c = dot(d1, r), b = dot(d1, d2);
  const double denom = a * e - b * b;
  double u = denom > 1e-14 * a * e ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
  double v = (b * u + f) / e;
  if (v < 0) {
    v = 0;
    u = std::clamp(-c / a, 0.0, 1.0);
  } else if (v > 1) {
    v = 1;
    u = std::clamp((b - c) / a, 0.0, 1.0);
  }
  return distance(s.a + d1 * u, t.a + d2 * v);
}

namespace {

// Van Oosterom-Strackee solid angle of the spherical triangle (u, v, w).
double triangle_solid_angle(const Vec3& u, const Vec3& v, const Vec3& w) {
  const double num = dot(u, cross(v, w));
  const double den = 1.0 + dot(u, v) + dot(v, w) + dot(w, u);
  return 2.0 * std::atan2(num, den);
}

bool sharing_endpoint(std::size_t i, std::size_t j, std::size_t n, bool closed) {
  if (i == j) return true;
  const std::size_t d = i > j ? i - j : j - i;
  return d == 1 || (closed && d == n - 1);
}

template <class Body>
double row_sum(long long rows, bool parallel, Body body) {
  std::vector<double> partial(static_cast<std::size_t>(rows), 0.0);
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long long i = 0; i < rows; ++i) partial[i] = body(i);
  } else {
    for (long long i = 0; i < rows; ++i) partial[i] = body(i);
  }
  double s = 0;
  for (double p : partial) s += p;
  return s;
}

double linking_impl(const Polyline3& g, const Polyline3& r, bool parallel) {
  g.validate();
  r.validate();
  const long long n = static_cast<long long>(g.num_segments());
  const std::size_t m = r.num_segments();
  const double s = row_sum(n, parallel, [&](long long i) {
    const Segment3 a = g.segment(i);
    double acc = 0;
    for (std::size_t j = 0; j < m; ++j) acc += solid_angle_Q(a, r.segment(j));
    return acc;
  });
  return s / (4.0 * M_PI);
}

double writhe_impl(const Polyline3& g, bool parallel) {
  if (!g.closed) throw ConfigError("writhe is defined for closed curves only");
  g.validate();
  const std::size_t n = g.num_segments();
  const double s = row_sum(static_cast<long long>(n), parallel, [&](long long i) {
    const Segment3 a = g.segment(i);
    double acc = 0;
    for (std::size_t j = 0; j < static_cast<std::size_t>(i); ++j)
      if (!sharing_endpoint(i, j, n, true)) acc += solid_angle_Q(a, g.segment(j));
    return acc;
  });
  return s / (2.0 * M_PI);
}

}  // namespace

double solid_angle_Q(const Segment3& a, const Segment3& b) {
  if (segment_distance(a, b) <= 1e-12) throw TopologyError("solid_angle_Q: segments touch");
  const Vec3 u00 = normalized(b.a - a.a), u01 = normalized(b.b - a.a);
  const Vec3 u10 = normalized(b.a - a.b), u11 = normalized(b.b - a.b);
  // Sign chosen so that sum Q / 4 pi is the Gauss integral with kernel
  // (r1 - r2) . (dr1 x dr2) / |r1 - r2|^3.
  return triangle_solid_angle(u00, u10, u11) + triangle_solid_angle(u00, u11, u01);
}

double linking_integral(const Polyline3& g, const Polyline3& r) { return linking_impl(g, r, true); }
double linking_integral_serial(const Polyline3& g, const Polyline3& r) { return linking_impl(g, r, false); }
double writhe(const Polyline3& g) { return writhe_impl(g, true); }
double writhe_serial(const Polyline3& g) { return writhe_impl(g, false); }

bool is_linked(double linking, bool both_closed, double guard) {
  if (!both_closed) return std::abs(linking) > 0.9;
  const double rounded = std::round(linking);
  return std::abs(rounded) >= 1.0 && std::abs(linking - rounded) < guard;
}

bool is_linked(const Polyline3& g, const Polyline3& r, double guard) {
  return is_linked(linking_integral(g, r), g.closed && r.closed, guard);
}

}  // namespace tensortopo
