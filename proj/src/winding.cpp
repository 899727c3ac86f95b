#include "tensortopo/winding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tensortopo {

namespace {

Vec3 rotate_about(const Vec3& x, const Vec3& axis, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return x * c + cross(axis, x) * s + axis * (dot(axis, x) * (1.0 - c));
}

// Rotation taking unit vector a to unit vector b, applied to x.
Vec3 rotate_between(const Vec3& x, const Vec3& a, const Vec3& b) {
  const Vec3 v = cross(a, b);
  const double c = dot(a, b);
  if (c < -1.0 + 1e-12) {
    const Vec3 axis = normalized(std::abs(a.x) < 0.9 ? cross(a, Vec3{1, 0, 0}) : cross(a, Vec3{0, 1, 0}));
    return rotate_about(x, axis, std::numbers::pi);
  }
  return x * c + cross(v, x) + v * (dot(v, x) / (1.0 + c));
}

Vec3 newell_normal(const std::vector<Vec3>& loop) {
  Vec3 n;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Vec3& a = loop[i];
    const Vec3& b = loop[(i + 1) % loop.size()];
    n.x += (a.y - b.y) * (a.z + b.z);
    n.y += (a.z - b.z) * (a.x + b.x);
    n.z += (a.x - b.x) * (a.y + b.y);
  }
  return n;
}

class Transporter {
 public:
  Transporter(const FieldSampler& field, const TransportOptions& opt) : field_(field), opt_(opt) {}

  Quaternion frame_at(const Vec3& p) const {
    const auto t = field_(p);
    if (!t) throw Error("transport loop leaves the field domain");
    return frame_quaternion(*t, opt_.gap_tol);
  }

  // Representative of the frame class at b closest to q_prev.
  static Quaternion match(const Quaternion& q_prev, const Quaternion& q, double& best_dot) {
    Quaternion best = q;
    best_dot = -2.0;
    for (int k = 0; k < 4; ++k) {
      Quaternion c = q * Quaternion::unit(k);
      double d = q_prev.dot(c);
      if (d < 0) {
        c = -c;
        d = -d;
      }
      if (d > best_dot) {
        best_dot = d;
        best = c;
      }
    }
    return best;
  }

  Quaternion segment(const Vec3& a, const Vec3& b, const Quaternion& qa, int depth) const {
    double d = 0;
    const Quaternion qb = match(qa, frame_at(b), d);
    if (2.0 * std::acos(std::min(1.0, d)) <= opt_.max_step) return qb;
    if (depth >= opt_.max_depth) throw Error("loop too close to degeneracy");
    const Vec3 m = (a + b) * 0.5;
    const Quaternion qm = segment(a, m, qa, depth + 1);
    return segment(m, b, qm, depth + 1);
  }

 private:
  const FieldSampler& field_;
  const TransportOptions& opt_;
};

}  // namespace

std::array<Vec3, 3> Quaternion::columns() const {
  return {Vec3{1 - 2 * (y * y + z * z), 2 * (x * y + w * z), 2 * (x * z - w * y)},
          Vec3{2 * (x * y - w * z), 1 - 2 * (x * x + z * z), 2 * (y * z + w * x)},
          Vec3{2 * (x * z + w * y), 2 * (y * z - w * x), 1 - 2 * (x * x + y * y)}};
}

Quaternion frame_quaternion(const EigenSystem& e) {
  // m[i][j] = component i of v_j
  const auto& v = e.vectors;
  const double m00 = v[0].x, m01 = v[1].x, m02 = v[2].x;
  const double m10 = v[0].y, m11 = v[1].y, m12 = v[2].y;
  const double m20 = v[0].z, m21 = v[1].z, m22 = v[2].z;
  const double tr = m00 + m11 + m22;
  Quaternion q;
  if (tr > 0) {
    const double s = 2.0 * std::sqrt(tr + 1.0);
    q = {0.25 * s, (m21 - m12) / s, (m02 - m20) / s, (m10 - m01) / s};
  } else if (m00 > m11 && m00 > m22) {
    const double s = 2.0 * std::sqrt(1.0 + m00 - m11 - m22);
    q = {(m21 - m12) / s, 0.25 * s, (m01 + m10) / s, (m02 + m20) / s};
  } else if (m11 > m22) {
    const double s = 2.0 * std::sqrt(1.0 + m11 - m00 - m22);
    q = {(m02 - m20) / s, (m01 + m10) / s, 0.25 * s, (m12 + m21) / s};
  } else {
    const double s = 2.0 * std::sqrt(1.0 + m22 - m00 - m11);
    q = {(m10 - m01) / s, (m02 + m20) / s, (m12 + m21) / s, 0.25 * s};
  }
  const double n = q.norm();
  return {q.w / n, q.x / n, q.y / n, q.z / n};
}

Quaternion frame_quaternion(const SymTensor3& t, double gap_tol) {
  const EigenSystem e = eigen_decompose(t);
  const double gap = std::min(e.values[0] - e.values[1], e.values[1] - e.values[2]);
  if (!(gap > gap_tol * t.norm())) throw Error("eigenframe undefined at a near-degenerate tensor");
  return frame_quaternion(e);
}

Quaternion WindingNumber::quaternion() const {
  const Quaternion u = Quaternion::unit(unit);
  return sign > 0 ? u : -u;
}

std::string WindingNumber::to_string() const {
  static const char* names[] = {"1", "i", "j", "k"};
  return std::string(sign > 0 ? "+" : "-") + names[unit];
}

WindingNumber snap_winding(const Quaternion& c, double snap_tol) {
  WindingNumber best;
  double best_dot = -2.0;
  for (int k = 0; k < 4; ++k)
    for (int s : {1, -1}) {
      const Quaternion u = s > 0 ? Quaternion::unit(k) : -Quaternion::unit(k);
      const double d = c.dot(u) / c.norm();
      if (d > best_dot) {
        best_dot = d;
        best.sign = s;
        best.unit = k;
      }
    }
  best.snap_error = 2.0 * std::acos(std::clamp(best_dot, -1.0, 1.0));
  if (!(best.snap_error < snap_tol)) throw Error("winding number does not snap to a unit quaternion");
  return best;
}

WindingNumber operator*(const WindingNumber& a, const WindingNumber& b) {
  WindingNumber r = snap_winding(a.quaternion() * b.quaternion(), 1e-6);
  r.snap_error = a.snap_error + b.snap_error;
  return r;
}

namespace {

WindingNumber transport_impl(const FieldSampler& field, const std::vector<Vec3>& loop, const TransportOptions& opt,
                             Quaternion* raw) {
  if (loop.size() < 3) throw Error("transport loop needs at least 3 points");
  Transporter tr(field, opt);
  Quaternion q0 = tr.frame_at(loop[0]);
  if (opt.initial_frame >= 0) q0 = q0 * Quaternion::unit(opt.initial_frame);
  Quaternion q = q0;
  std::vector<Quaternion> frames(loop.size());
  for (std::size_t i = 0; i < loop.size(); ++i) {
    frames[i] = q;
    q = tr.segment(loop[i], loop[(i + 1) % loop.size()], q, 0);
  }
  const Quaternion c = q0.conj() * q;
  if (raw) *raw = c;
  WindingNumber w = snap_winding(c, opt.snap_tol);
  if (opt.canonical && w.unit != 0) {
    // The rotation axis returns to itself, so its transported copies have a
    // consistent orientation; their mean against the loop normal does not
    // depend on the start point.
    const Vec3 n = newell_normal(loop);
    double s = 0;
    for (const Quaternion& f : frames) s += dot(f.columns()[w.unit - 1], n);
    if (s < 0) w.sign = -w.sign;
  }
  return w;
}

}  // namespace

WindingNumber transport_winding(const FieldSampler& field, const std::vector<Vec3>& loop,
                                const TransportOptions& opt) {
  return transport_impl(field, loop, opt, nullptr);
}

Quaternion transport_quaternion(const FieldSampler& field, const std::vector<Vec3>& loop,
                                const TransportOptions& opt) {
  TransportOptions raw_opt = opt;
  raw_opt.snap_tol = 4.0 * std::numbers::pi;
  Quaternion c;
  transport_impl(field, loop, raw_opt, &c);
  return c;
}

std::vector<Vec3> transversal_circle(const Vec3& p, const Vec3& tangent, double radius, int samples) {
  const Vec3 t = normalized(tangent);
  const Vec3 helper = std::abs(t.x) < 0.6 ? Vec3{1, 0, 0} : (std::abs(t.y) < 0.6 ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
  const Vec3 e1 = normalized(cross(t, helper));
  const Vec3 e2 = cross(t, e1);
  std::vector<Vec3> c(samples);
  for (int i = 0; i < samples; ++i) {
    const double a = 2.0 * std::numbers::pi * i / samples;
    c[i] = p + (e1 * std::cos(a) + e2 * std::sin(a)) * radius;
  }
  return c;
}

WindingNumber point_index(const FieldSampler& field, const Vec3& p, const Vec3& tangent, double radius,
                          const TransportOptions& opt) {
  std::string last;
  for (int attempt = 0; attempt <= 6; ++attempt, radius *= 0.5) {
    try {
      return transport_winding(field, transversal_circle(p, tangent, radius), opt);
    } catch (const Error& e) {
      last = e.what();
    }
  }
  throw Error("point index failed at all radii: " + last);
}

std::vector<Vec3> companion_loop(const std::vector<Vec3>& loop, double offset) {
  const std::size_t n = loop.size();
  if (n < 3) throw Error("companion loop needs at least 3 points");
  std::vector<Vec3> tangent(n);
  for (std::size_t i = 0; i < n; ++i) tangent[i] = normalized(loop[(i + 1) % n] - loop[(i + n - 1) % n]);
  const Vec3 t0 = tangent[0];
  const Vec3 helper = std::abs(t0.x) < 0.6 ? Vec3{1, 0, 0} : (std::abs(t0.y) < 0.6 ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
  std::vector<Vec3> normal(n + 1);
  normal[0] = normalized(cross(t0, helper));
  std::vector<double> arc(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& a = tangent[i];
    const Vec3& b = tangent[(i + 1) % n];
    Vec3 m = rotate_between(normal[i], a, b);
    normal[i + 1] = normalized(m - b * dot(m, b));
    arc[i + 1] = arc[i] + distance(loop[i], loop[(i + 1) % n]);
  }
  // Twist that closes the transported normal back onto normal[0].
  const double twist = std::atan2(dot(cross(normal[n], normal[0]), t0), dot(normal[n], normal[0]));
  std::vector<Vec3> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 ni = rotate_about(normal[i], tangent[i], twist * arc[i] / arc[n]);
    out[i] = loop[i] + ni * offset;
  }
  return out;
}

WindingNumber loop_winding(const FieldSampler& field, const std::vector<Vec3>& loop,
                           const std::vector<double>& offsets, const TransportOptions& opt) {
  std::string last = "no offsets given";
  for (double off : offsets) {
    try {
      return transport_winding(field, companion_loop(loop, off), opt);
    } catch (const Error& e) {
      last = e.what();
    }
  }
  throw Error("loop winding failed at all offsets: " + last);
}

}  // namespace tensortopo
