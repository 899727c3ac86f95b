#include "tensortopo/analytic_field.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

namespace tensortopo {

namespace {

// Uniform in [-1, 1) from the raw 64-bit engine output, independent of the
// standard library's distribution implementation.
double uniform_pm1(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}


// Linear-type loop of radius r0 in the plane z = 0 around the z-axis, in local
// coordinates. The swirl eigenvector e_phi carries eigenvalue 1; the (e_r, e_z)
// block is a trace-free profile of magnitude psi < 1 vanishing on the loop.
// Near the axis psi -> 1 so the field stays continuous there; a small
// constant shear splits the resulting axis degeneracy into two generic lines.
SymTensor3 loop_tensor(const Vec3& p, double r0, double tube, bool mirrored) {
  constexpr double kAxisShear = 0.05;
  const double r = std::hypot(p.x, p.y);
  const double dr = r - r0;
  const double d = std::hypot(dr, p.z);
  const double kappa = std::sqrt(8.0) * tube;  // psi0 == 1/3 exactly at d == tube
  const double psi0 = d / std::hypot(d, kappa);
  const double rb = 0.3 * r0;
  double omega = 0.0;
  if (r < rb) {
    const double s = 1.0 - (r / rb) * (r / rb);
    omega = s * s;
  }
  const double psi = psi0 + (1.0 - psi0) * omega;

  const double sgn = mirrored ? 1.0 : -1.0;
  const double at = -dr;
  const double bt = sgn * p.z * r / r0;
  const double h = std::hypot(at, bt);
  const double ca = h > 0 ? at / h : 1.0;
  const double sb = h > 0 ? bt / h : 0.0;
  // A constant rotation of the (a, b) profile keeps the loop and its index
  // but moves the zero sets of a and b off the coordinate planes. It fades
  // out towards the axis, where b must vanish for continuity.
  const double twist = 0.3 * (1.0 - omega);
  const double a = psi * (ca * std::cos(twist) - sb * std::sin(twist));
  const double b = psi * (ca * std::sin(twist) + sb * std::cos(twist));

  // e_phi e_phi = I_xy - e_r e_r; the e_r terms vanish on the axis.
  SymTensor3 t{1.0, 1.0, 0.0, 0, 0, 0};
  const Vec3 ez{0, 0, 1};
  if (r > 0) {
    const Vec3 er{p.x / r, p.y / r, 0};
    t += SymTensor3::outer(er, a - 1.0);
    t += SymTensor3::sym_outer(er, ez, b);
  }
  t += SymTensor3::outer(ez, -a);
  // Shear axes at an angle off the coordinate planes keep the split lines
  // in general position with respect to grid meshes.
  constexpr double kShearAngle = 0.74;
  const double sc = kAxisShear * omega * std::cos(kShearAngle), ss = kAxisShear * omega * std::sin(kShearAngle);
  t += SymTensor3{sc, -sc, 0, ss, 0, 0};
  return t;
}

// Two fibres z1 = +-kappa z2 of the Hopf fibration, pulled back to R^3 by
// inverse stereographic projection, are round circles that link once. They
// are the zero set of w = Z1^2 - kappa^2 Z2^2 with Z1 = 2(x + iy) and
// Z2 = 2z + i(|p|^2 - 1). With w as the (a, b) profile around a fixed z
// eigenvector the field has no other degenerate points.
SymTensor3 hopf_tensor(const AnalyticField& f, const Vec3& p) {
  const double ratio = 2.0 * f.r0 / f.separation;
  const double kappa = std::sqrt(ratio * ratio - 1.0);
  const double unit_radius = std::sqrt(1.0 + 1.0 / (kappa * kappa));
  const Vec3 q = p * (unit_radius / f.r0);
  const std::complex<double> z1{2.0 * q.x, 2.0 * q.y};
  const std::complex<double> z2{2.0 * q.z, dot(q, q) - 1.0};
  std::complex<double> w = z1 * z1 - kappa * kappa * z2 * z2;
  if (f.mirrored) w = std::conj(w);
  const std::complex<double> ab = 0.3 * w / (std::abs(w) + 1.0);
  return SymTensor3{ab.real(), -ab.real(), 1.0, ab.imag(), 0, 0};
}

SymTensor3 lines_tensor(const AnalyticField& f, const Vec3& p) {
  std::complex<double> poly{1.0, 0.0};
  for (const LineSpec& l : f.lines) {
    const std::complex<double> w{p.x - l.x, p.y - l.y};
    poly *= l.wedge ? w : std::conj(w);
  }
  const std::complex<double> ab = 0.3 * poly / (std::abs(poly) + 0.25);
  return SymTensor3{ab.real(), -ab.real(), 1.0, ab.imag(), 0, 0};
}

}  // namespace

AnalyticField AnalyticField::linear_random(std::uint64_t seed) {
  AnalyticField f;
  f.kind = FieldKind::LinearRandom;
  f.seed = seed;
  return f;
}

AnalyticField AnalyticField::axisym_loop(double r0, bool planar, bool mirrored) {
  AnalyticField f;
  f.kind = FieldKind::AxisymLoop;
  f.r0 = r0;
  f.tube = 0.5 * r0;
  f.planar = planar;
  f.mirrored = mirrored;
  return f;
}

AnalyticField AnalyticField::hopf_pair(double r0, double separation) {
  if (!(r0 > 0) || !(separation > 0) || !(separation < 2.0 * r0))
    throw ConfigError("hopf_pair: need 0 < separation < 2 r0");
  AnalyticField f;
  f.kind = FieldKind::HopfPair;
  f.r0 = r0;
  f.separation = separation;
  return f;
}

AnalyticField AnalyticField::constant_degenerate() { return AnalyticField{}; }

AnalyticField AnalyticField::neutral_plane() {
  AnalyticField f;
  f.kind = FieldKind::NeutralPlane;
  return f;
}

AnalyticField AnalyticField::radial_shells(std::vector<double> radii) {
  AnalyticField f;
  f.kind = FieldKind::RadialShells;
  f.radii = std::move(radii);
  return f;
}

AnalyticField AnalyticField::parallel_lines(std::vector<LineSpec> lines, bool planar) {
  AnalyticField f;
  f.kind = FieldKind::ParallelLines;
  f.lines = std::move(lines);
  f.planar = planar;
  return f;
}

FieldKind parse_field_kind(const std::string& name) {
  if (name == "linear-random") return FieldKind::LinearRandom;
  if (name == "axisym-loop") return FieldKind::AxisymLoop;
  if (name == "hopf-pair") return FieldKind::HopfPair;
  if (name == "constant-degenerate") return FieldKind::ConstantDegenerate;
  if (name == "neutral-plane") return FieldKind::NeutralPlane;
  if (name == "radial-shells") return FieldKind::RadialShells;
  if (name == "parallel-lines") return FieldKind::ParallelLines;
  throw ConfigError("unknown field id '" + name + "'");
}

std::string to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::LinearRandom: return "linear-random";
    case FieldKind::AxisymLoop: return "axisym-loop";
    case FieldKind::HopfPair: return "hopf-pair";
    case FieldKind::ConstantDegenerate: return "constant-degenerate";
    case FieldKind::NeutralPlane: return "neutral-plane";
    case FieldKind::RadialShells: return "radial-shells";
    case FieldKind::ParallelLines: return "parallel-lines";
  }
  return "?";
}

std::array<SymTensor3, 4> linear_random_coefficients(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::array<SymTensor3, 4> c;
  for (SymTensor3& t : c) {
    t.xx = uniform_pm1(rng);
    t.yy = uniform_pm1(rng);
    t.zz = uniform_pm1(rng);
    t.xy = uniform_pm1(rng);
    t.yz = uniform_pm1(rng);
    t.xz = uniform_pm1(rng);
  }
  return c;
}

SymTensor3 sample_analytic(const AnalyticField& f, const Vec3& p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
    throw ConfigError("sample_analytic: non-finite point");
  SymTensor3 t;
  switch (f.kind) {
    case FieldKind::LinearRandom: {
      const auto c = linear_random_coefficients(f.seed);
      return c[0] + c[1] * p.x + c[2] * p.y + c[3] * p.z;
    }
    case FieldKind::ConstantDegenerate:
      return SymTensor3::diag(2, -1, -1);
    case FieldKind::AxisymLoop:
      t = loop_tensor(p, f.r0, f.tube, f.mirrored);
      break;
    case FieldKind::HopfPair:
      t = hopf_tensor(f, p);
      break;
    case FieldKind::NeutralPlane:
      t = SymTensor3::diag(1.0, 0.5 * std::tanh(p.z), -1.0);
      break;
    case FieldKind::RadialShells: {
      const double rho = norm(p);
      double s = 1.0;
      for (double r : f.radii) s *= (rho - r);
      t = SymTensor3::diag(1.0, 0.5 * std::tanh(4.0 * s), -1.0);
      break;
    }
    case FieldKind::ParallelLines:
      t = lines_tensor(f, p);
      break;
    default:
      throw ConfigError("sample_analytic: unknown field id");
  }
  return f.planar ? t * -1.0 : t;
}

}  // namespace tensortopo
