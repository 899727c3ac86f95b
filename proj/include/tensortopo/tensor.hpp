#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace tensortopo {

/// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user configuration (unknown field id, nonpositive tolerance, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Internal topological inconsistency: a result that cannot occur for a
/// correct extraction (odd Euler sum, negative Betti number, ...).
class TopologyError : public Error {
 public:
  using Error::Error;
};

struct Vec3 {
  double x = 0, y = 0, z = 0;

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
  constexpr bool operator==(const Vec3&) const = default;
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) { return a / norm(a); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

/// Symmetric 3x3 tensor; off-diagonal entries are stored once.
struct SymTensor3 {
  double xx = 0, yy = 0, zz = 0, xy = 0, yz = 0, xz = 0;

  static constexpr SymTensor3 diag(double a, double b, double c) { return {a, b, c, 0, 0, 0}; }
  static constexpr SymTensor3 identity() { return diag(1, 1, 1); }
  /// s * (u u^T)
  static constexpr SymTensor3 outer(const Vec3& u, double s = 1.0) {
    return {s * u.x * u.x, s * u.y * u.y, s * u.z * u.z,
            s * u.x * u.y, s * u.y * u.z, s * u.x * u.z};
  }
  /// s * (u v^T + v u^T)
  static constexpr SymTensor3 sym_outer(const Vec3& u, const Vec3& v, double s = 1.0) {
    return {2 * s * u.x * v.x, 2 * s * u.y * v.y, 2 * s * u.z * v.z,
            s * (u.x * v.y + u.y * v.x), s * (u.y * v.z + u.z * v.y),
            s * (u.x * v.z + u.z * v.x)};
  }

  constexpr double operator()(int i, int j) const {
    if (i == j) return i == 0 ? xx : (i == 1 ? yy : zz);
    const int k = i + j;  // 1 -> xy, 3 -> yz, 2 -> xz
    return k == 1 ? xy : (k == 3 ? yz : xz);
  }

  constexpr SymTensor3 operator+(const SymTensor3& o) const {
    return {xx + o.xx, yy + o.yy, zz + o.zz, xy + o.xy, yz + o.yz, xz + o.xz};
  }
  constexpr SymTensor3 operator-(const SymTensor3& o) const {
    return {xx - o.xx, yy - o.yy, zz - o.zz, xy - o.xy, yz - o.yz, xz - o.xz};
  }
  constexpr SymTensor3 operator*(double s) const {
    return {xx * s, yy * s, zz * s, xy * s, yz * s, xz * s};
  }
  constexpr SymTensor3& operator+=(const SymTensor3& o) { return *this = *this + o; }
  constexpr bool operator==(const SymTensor3&) const = default;

  constexpr Vec3 apply(const Vec3& v) const {
    return {xx * v.x + xy * v.y + xz * v.z,
            xy * v.x + yy * v.y + yz * v.z,
            xz * v.x + yz * v.y + zz * v.z};
  }
  constexpr double trace() const { return xx + yy + zz; }
  constexpr double determinant() const {
    return xx * (yy * zz - yz * yz) - xy * (xy * zz - yz * xz) + xz * (xy * yz - yy * xz);
  }
  /// Frobenius magnitude.
  double norm() const {
    return std::sqrt(xx * xx + yy * yy + zz * zz + 2 * (xy * xy + yz * yz + xz * xz));
  }
  /// R T R^T for a rotation given by its rows.
  SymTensor3 rotated(const std::array<Vec3, 3>& rows) const;
};

constexpr SymTensor3 operator*(double s, const SymTensor3& t) { return t * s; }

/// Eigenvalues sorted descending with a right-handed orthonormal frame.
struct EigenSystem {
  std::array<double, 3> values{};
  std::array<Vec3, 3> vectors{};  // vectors[k] pairs with values[k]
};

enum class TensorClass { Linear, Planar, Neutral, LinearDegenerate, PlanarDegenerate, TripleDegenerate };

std::string to_string(TensorClass c);

/// Sign of the mode: Linear for mode > 0, Planar for mode < 0.
enum class Linearity { Linear, Planar };

std::string to_string(Linearity l);

/// Trace-free part T - tr(T)/3 I.
SymTensor3 deviator(const SymTensor3& t);

/// Scale-aware threshold under which the deviator counts as zero.
double deviator_zero_tolerance(const SymTensor3& t);

/// Tensor mode 3*sqrt(6)*det(A)/|A|^3 of the deviator A, clamped to [-1, 1].
/// Empty when the deviator vanishes (triple degenerate tensor).
std::optional<double> mode(const SymTensor3& t);

/// Closed-form solve with a Jacobi fallback for nearly repeated eigenvalues.
EigenSystem eigen_decompose(const SymTensor3& t);

/// Cyclic Jacobi iteration; exposed for tests and as the fallback path.
EigenSystem eigen_decompose_jacobi(const SymTensor3& t);

TensorClass classify(const SymTensor3& t, double eps);

/// ((l1-l2)(l2-l3)(l1-l3))^2 evaluated from deviator invariants as 4 J2^3 - 27 J3^2.
double discriminant(const SymTensor3& t);

}  // namespace tensortopo
