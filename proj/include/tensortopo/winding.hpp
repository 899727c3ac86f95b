#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tensortopo/locator.hpp"
#include "tensortopo/tensor.hpp"

namespace tensortopo {

struct Quaternion {
  double w = 1, x = 0, y = 0, z = 0;

  Quaternion operator*(const Quaternion& o) const {
    return {w * o.w - x * o.x - y * o.y - z * o.z, w * o.x + x * o.w + y * o.z - z * o.y,
            w * o.y - x * o.z + y * o.w + z * o.x, w * o.z + x * o.y - y * o.x + z * o.w};
  }
  Quaternion operator-() const { return {-w, -x, -y, -z}; }
  Quaternion conj() const { return {w, -x, -y, -z}; }
  double dot(const Quaternion& o) const { return w * o.w + x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }

  static constexpr Quaternion unit(int k) {
    switch (k) {
      case 1: return {0, 1, 0, 0};
      case 2: return {0, 0, 1, 0};
      case 3: return {0, 0, 0, 1};
      default: return {1, 0, 0, 0};
    }
  }
  /// Rotation matrix columns: images of X, Y and Z.
  std::array<Vec3, 3> columns() const;
};

/// Unit quaternion of the rotation taking (X, Y, Z) to (v1, v2, v3).
Quaternion frame_quaternion(const EigenSystem& e);
/// As above, but throws Error if the tensor is too close to degenerate
/// (minimum eigenvalue gap <= gap_tol * |T|).
Quaternion frame_quaternion(const SymTensor3& t, double gap_tol);

/// Element of the quaternion group {+-1, +-i, +-j, +-k}.
struct WindingNumber {
  int sign = 1;
  int unit = 0;  // 0 = 1, 1 = i, 2 = j, 3 = k
  double snap_error = 0;

  bool operator==(const WindingNumber& o) const { return sign == o.sign && unit == o.unit; }
  Quaternion quaternion() const;
  std::string to_string() const;
};

WindingNumber snap_winding(const Quaternion& c, double snap_tol);
WindingNumber operator*(const WindingNumber& a, const WindingNumber& b);

struct TransportOptions {
  double snap_tol = 0.2;
  double gap_tol = 1e-9;
  int max_depth = 20;
  double max_step = 0.5235987755982988;  // 30 degrees
  int initial_frame = -1;                // force q0 * unit(k) when 0..3
  bool canonical = true;                 // orient +-i/+-j/+-k by the loop normal
};

/// Winding number of the eigenframe transported once around a closed loop
/// (points without the repeated end point). Throws Error when the loop comes
/// too close to a degenerate point or leaves the sampler's domain.
WindingNumber transport_winding(const FieldSampler& field, const std::vector<Vec3>& loop,
                                const TransportOptions& opt = {});

/// Raw lifted product q0^{-1} q_final before snapping and canonical orientation.
Quaternion transport_quaternion(const FieldSampler& field, const std::vector<Vec3>& loop,
                                const TransportOptions& opt = {});

/// Circle of the given radius around p in the plane perpendicular to tangent.
std::vector<Vec3> transversal_circle(const Vec3& p, const Vec3& tangent, double radius, int samples = 16);

/// Index of a degenerate point via a transversal circle; halves the radius up
/// to six times on transport failure and throws Error if all attempts fail.
WindingNumber point_index(const FieldSampler& field, const Vec3& p, const Vec3& tangent, double radius,
                          const TransportOptions& opt = {});

/// Companion loop at distance `offset` from a closed polyline, displaced along
/// a rotation-minimizing normal with the closing twist spread over the loop.
std::vector<Vec3> companion_loop(const std::vector<Vec3>& loop, double offset);

/// Winding number of a closed degenerate curve through its companion loop.
/// Tries each offset in turn; throws Error if none succeeds.
WindingNumber loop_winding(const FieldSampler& field, const std::vector<Vec3>& loop,
                           const std::vector<double>& offsets, const TransportOptions& opt = {});

}  // namespace tensortopo
