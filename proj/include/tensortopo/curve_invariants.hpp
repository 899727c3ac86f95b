#pragma once

#include <vector>

#include "tensortopo/config.hpp"
#include "tensortopo/tensor.hpp"

namespace tensortopo {

struct Segment3 {
  Vec3 a, b;
};

/// Ordered points; a closed polyline connects the last point to the first.
struct Polyline3 {
  std::vector<Vec3> points;
  bool closed = false;

  /// Throws ConfigError on fewer than 3 points or repeated consecutive points.
  void validate() const;
  std::size_t num_segments() const { return closed ? points.size() : points.size() - 1; }
  Segment3 segment(std::size_t i) const { return {points[i], points[(i + 1) % points.size()]}; }
  double length() const;
};

double segment_distance(const Segment3& s, const Segment3& t);

/// Signed solid angle of the spherical quadrilateral traced by the unit
/// vectors b(t) - a(s); the Gauss kernel integrated over both segments is
/// Q / (4 pi). Throws TopologyError for touching segments.
double solid_angle_Q(const Segment3& a, const Segment3& b);

/// Gauss linking integral, OpenMP over rows of the double sum.
double linking_integral(const Polyline3& g, const Polyline3& r);
double linking_integral_serial(const Polyline3& g, const Polyline3& r);

/// Writhe of a closed polyline; segments sharing an endpoint are skipped.
double writhe(const Polyline3& g);
double writhe_serial(const Polyline3& g);

/// Closed pairs: |round(L)| >= 1 and |L - round(L)| < guard. Otherwise |L| > 0.9.
bool is_linked(double linking, bool both_closed, double guard = 0.1);
bool is_linked(const Polyline3& g, const Polyline3& r, double guard = 0.1);

}  // namespace tensortopo
