#pragma once

#include <array>

#include "tensortopo/tensor.hpp"

namespace tensortopo {

/// Homogeneous polynomial of degree <= 6 in barycentric variables (u, v, w).
/// Coefficient (i, j) multiplies u^i v^j w^(d-i-j).
class HomPoly3 {
 public:
  static constexpr int kMaxDegree = 6;

  HomPoly3() = default;
  explicit HomPoly3(int degree) : degree_(degree) {}
  /// Linear form a u + b v + c w.
  static HomPoly3 linear(double a, double b, double c);

  int degree() const { return degree_; }
  double& at(int i, int j) { return c_[i * (kMaxDegree + 1) + j]; }
  double at(int i, int j) const { return c_[i * (kMaxDegree + 1) + j]; }

  HomPoly3 operator+(const HomPoly3& o) const;
  HomPoly3 operator-(const HomPoly3& o) const;
  HomPoly3 operator*(const HomPoly3& o) const;
  HomPoly3 operator*(double s) const;

  double operator()(double u, double v, double w) const;
  /// Partial derivative with respect to u (var 0), v (var 1) or w (var 2).
  HomPoly3 partial(int var) const;

  /// Coefficients in the Bernstein basis over the reference triangle.
  HomPoly3 bernstein() const;
  /// True if every Bernstein coefficient is strictly positive, which
  /// certifies the polynomial is positive on the closed triangle.
  bool bernstein_positive() const;
  double max_abs_coefficient() const;

 private:
  int degree_ = 0;
  std::array<double, (kMaxDegree + 1) * (kMaxDegree + 1)> c_{};
};

/// Discriminant 4 J2^3 - 27 J3^2 of the linear tensor family u T0 + v T1 + w T2.
HomPoly3 discriminant_poly(const SymTensor3& t0, const SymTensor3& t1, const SymTensor3& t2);

}  // namespace tensortopo
