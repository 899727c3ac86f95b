#include "tensortopo/tensor.hpp"

#include <algorithm>
#include <numbers>
#include <utility>

namespace tensortopo {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 to_matrix(const SymTensor3& t) {
  return {{{t.xx, t.xy, t.xz}, {t.xy, t.yy, t.yz}, {t.xz, t.yz, t.zz}}};
}

// Relative eigenvalue gap below which the cross-product eigenvector route
// loses the orthogonality budget and Jacobi takes over.
constexpr double kClosedFormGap = 1e-5;

double second_invariant(const SymTensor3& a) {
  return 0.5 * (a.xx * a.xx + a.yy * a.yy + a.zz * a.zz) + a.xy * a.xy + a.yz * a.yz + a.xz * a.xz;
}

Vec3 null_vector(const SymTensor3& t, double lambda) {
  const Vec3 r0{t.xx - lambda, t.xy, t.xz};
  const Vec3 r1{t.xy, t.yy - lambda, t.yz};
  const Vec3 r2{t.xz, t.yz, t.zz - lambda};
  const std::array<Vec3, 3> c{cross(r0, r1), cross(r0, r2), cross(r1, r2)};
  int best = 0;
  double best_n = dot(c[0], c[0]);
  for (int i = 1; i < 3; ++i) {
    const double n = dot(c[i], c[i]);
    if (n > best_n) {
      best_n = n;
      best = i;
    }
  }
  return c[best] / std::sqrt(best_n);
}

void make_right_handed(EigenSystem& e) {
  if (dot(e.vectors[0], cross(e.vectors[1], e.vectors[2])) < 0) e.vectors[2] = -e.vectors[2];
}

}  // namespace

SymTensor3 SymTensor3::rotated(const std::array<Vec3, 3>& rows) const {
  // (R T R^T)_ij = r_i . T r_j
  std::array<Vec3, 3> tr{apply(rows[0]), apply(rows[1]), apply(rows[2])};
  return {dot(rows[0], tr[0]), dot(rows[1], tr[1]), dot(rows[2], tr[2]),
          dot(rows[0], tr[1]), dot(rows[1], tr[2]), dot(rows[0], tr[2])};
}

std::string to_string(TensorClass c) {
  switch (c) {
    case TensorClass::Linear: return "Linear";
    case TensorClass::Planar: return "Planar";
    case TensorClass::Neutral: return "Neutral";
    case TensorClass::LinearDegenerate: return "LinearDegenerate";
    case TensorClass::PlanarDegenerate: return "PlanarDegenerate";
    case TensorClass::TripleDegenerate: return "TripleDegenerate";
  }
  return "?";
}

std::string to_string(Linearity l) { return l == Linearity::Linear ? "linear" : "planar"; }

SymTensor3 deviator(const SymTensor3& t) {
  const double m = t.trace() / 3.0;
  return {t.xx - m, t.yy - m, t.zz - m, t.xy, t.yz, t.xz};
}

double deviator_zero_tolerance(const SymTensor3& t) { return 1e-12 * std::max(1.0, t.norm()); }

std::optional<double> mode(const SymTensor3& t) {
  const SymTensor3 a = deviator(t);
  const double n = a.norm();
  if (n <= deviator_zero_tolerance(t)) return std::nullopt;
  const double mu = 3.0 * std::sqrt(6.0) * a.determinant() / (n * n * n);
  return std::clamp(mu, -1.0, 1.0);
}

double discriminant(const SymTensor3& t) {
  const SymTensor3 a = deviator(t);
  const double j2 = second_invariant(a);
  const double j3 = a.determinant();
  return std::max(0.0, 4.0 * j2 * j2 * j2 - 27.0 * j3 * j3);
}

EigenSystem eigen_decompose_jacobi(const SymTensor3& t) {
  Mat3 a = to_matrix(t);
  Mat3 v{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  for (int sweep = 0; sweep < 50; ++sweep) {
    const double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    const double diag = a[0][0] * a[0][0] + a[1][1] * a[1][1] + a[2][2] * a[2][2];
    if (off <= 1e-36 * std::max(diag, 1e-300)) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double tn = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(tn * tn + 1.0);
        const double s = tn * c;
        for (int k = 0; k < 3; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < 3; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a[i][i] > a[j][j]; });
  EigenSystem e;
  for (int k = 0; k < 3; ++k) {
    const int c = order[k];
    e.values[k] = a[c][c];
    e.vectors[k] = normalized(Vec3{v[0][c], v[1][c], v[2][c]});
  }
  make_right_handed(e);
  return e;
}

EigenSystem eigen_decompose(const SymTensor3& t) {
  const double m = t.trace() / 3.0;
  const SymTensor3 a = deviator(t);
  const double j2 = second_invariant(a);
  const double scale = std::max(t.norm(), 1e-300);
  if (j2 <= 0.0) {
    EigenSystem e;
    e.values = {m, m, m};
    e.vectors = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    return e;
  }
  const double r = 2.0 * std::sqrt(j2 / 3.0);
  const double c3 = std::clamp(0.5 * a.determinant() * std::pow(3.0 / j2, 1.5), -1.0, 1.0);
  const double theta = std::acos(c3) / 3.0;
  const double l1 = m + r * std::cos(theta);
  const double l3 = m + r * std::cos(theta + 2.0 * std::numbers::pi / 3.0);
  const double l2 = 3.0 * m - l1 - l3;
  if (std::min(l1 - l2, l2 - l3) < kClosedFormGap * scale) return eigen_decompose_jacobi(t);

  EigenSystem e;
  e.values = {l1, l2, l3};
  const Vec3 v1 = null_vector(t, l1);
  Vec3 v3 = null_vector(t, l3);
  v3 = normalized(v3 - dot(v3, v1) * v1);
  e.vectors = {v1, cross(v3, v1), v3};
  return e;
}

TensorClass classify(const SymTensor3& t, double eps) {
  if (!(eps > 0)) throw ConfigError("classify: eps must be positive");
  const auto mu = mode(t);
  if (!mu) return TensorClass::TripleDegenerate;
  if (std::abs(*mu) <= eps) return TensorClass::Neutral;
  if (*mu >= 1.0 - eps) return TensorClass::LinearDegenerate;
  if (*mu <= -1.0 + eps) return TensorClass::PlanarDegenerate;
  return *mu > 0 ? TensorClass::Linear : TensorClass::Planar;
}

}  // namespace tensortopo
