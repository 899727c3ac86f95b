#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tensortopo/tensor.hpp"

namespace tensortopo {

enum class FieldKind {
  LinearRandom,        // T0 + x Tx + y Ty + z Tz, coefficients uniform in [-1, 1]
  AxisymLoop,          // one degenerate loop x^2 + y^2 = r0^2, z = 0
  HopfPair,            // two Hopf-linked circles of radius r0, centers `separation` apart on y
  ConstantDegenerate,  // diag(2, -1, -1) everywhere
  NeutralPlane,        // mode changes sign exactly on z = 0
  RadialShells,        // mode changes sign on concentric spheres |p| = radii[i]
  ParallelLines,       // straight degenerate lines parallel to z
};

/// A straight degenerate line through (x, y) parallel to the z-axis.
struct LineSpec {
  double x = 0, y = 0;
  bool wedge = true;
};

/// Deterministic analytic tensor field used as test substrate.
///
/// `planar` flips the linearity of every degenerate feature (T -> -T).
/// `mirrored` reverses the transverse profile so wedges become trisectors.
struct AnalyticField {
  FieldKind kind = FieldKind::ConstantDegenerate;
  std::uint64_t seed = 0;
  double r0 = 1.0;
  double tube = 0.5;        // neutral tube radius around AxisymLoop curves
  double separation = 1.0;  // HopfPair center distance
  bool planar = false;
  bool mirrored = false;
  std::vector<double> radii;    // RadialShells
  std::vector<LineSpec> lines;  // ParallelLines

  static AnalyticField linear_random(std::uint64_t seed);
  static AnalyticField axisym_loop(double r0, bool planar = false, bool mirrored = false);
  static AnalyticField hopf_pair(double r0, double separation);
  static AnalyticField constant_degenerate();
  static AnalyticField neutral_plane();
  static AnalyticField radial_shells(std::vector<double> radii);
  static AnalyticField parallel_lines(std::vector<LineSpec> lines, bool planar = false);
};

FieldKind parse_field_kind(const std::string& name);
std::string to_string(FieldKind kind);

/// Coefficient tensors of a LinearRandom field: {T0, Tx, Ty, Tz}.
std::array<SymTensor3, 4> linear_random_coefficients(std::uint64_t seed);

SymTensor3 sample_analytic(const AnalyticField& f, const Vec3& p);

}  // namespace tensortopo
