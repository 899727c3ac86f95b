#include "tensortopo/face_poly.hpp"

#include <algorithm>
#include <cmath>

namespace tensortopo {

namespace {

constexpr double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

HomPoly3 HomPoly3::linear(double a, double b, double c) {
  HomPoly3 p(1);
  p.at(1, 0) = a;
  p.at(0, 1) = b;
  p.at(0, 0) = c;
  return p;
}

HomPoly3 HomPoly3::operator+(const HomPoly3& o) const {
  if (o.degree_ != degree_) throw Error("HomPoly3: degree mismatch");
  HomPoly3 r(degree_);
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] + o.c_[i];
  return r;
}

HomPoly3 HomPoly3::operator-(const HomPoly3& o) const { return *this + o * -1.0; }

HomPoly3 HomPoly3::operator*(double s) const {
  HomPoly3 r(*this);
  for (double& x : r.c_) x *= s;
  return r;
}

HomPoly3 HomPoly3::operator*(const HomPoly3& o) const {
  if (degree_ + o.degree_ > kMaxDegree) throw Error("HomPoly3: degree overflow");
  HomPoly3 r(degree_ + o.degree_);
  for (int i = 0; i <= degree_; ++i)
    for (int j = 0; i + j <= degree_; ++j) {
      const double a = at(i, j);
      if (a == 0.0) continue;
      for (int k = 0; k <= o.degree_; ++k)
        for (int l = 0; k + l <= o.degree_; ++l) r.at(i + k, j + l) += a * o.at(k, l);
    }
  return r;
}

double HomPoly3::operator()(double u, double v, double w) const {
  std::array<double, kMaxDegree + 1> pu{}, pv{}, pw{};
  pu[0] = pv[0] = pw[0] = 1.0;
  for (int e = 1; e <= degree_; ++e) {
    pu[e] = pu[e - 1] * u;
    pv[e] = pv[e - 1] * v;
    pw[e] = pw[e - 1] * w;
  }
  double s = 0;
  for (int i = 0; i <= degree_; ++i)
    for (int j = 0; i + j <= degree_; ++j) s += at(i, j) * pu[i] * pv[j] * pw[degree_ - i - j];
  return s;
}

HomPoly3 HomPoly3::partial(int var) const {
  HomPoly3 r(std::max(0, degree_ - 1));
  if (degree_ == 0) return r;
  for (int i = 0; i <= degree_; ++i)
    for (int j = 0; i + j <= degree_; ++j) {
      const int k = degree_ - i - j;
      const double a = at(i, j);
      if (var == 0 && i > 0) r.at(i - 1, j) += a * i;
      if (var == 1 && j > 0) r.at(i, j - 1) += a * j;
      if (var == 2 && k > 0) r.at(i, j) += a * k;
    }
  return r;
}

HomPoly3 HomPoly3::bernstein() const {
  HomPoly3 r(degree_);
  const double dfac = factorial(degree_);
  for (int i = 0; i <= degree_; ++i)
    for (int j = 0; i + j <= degree_; ++j) {
      const double multinomial = dfac / (factorial(i) * factorial(j) * factorial(degree_ - i - j));
      r.at(i, j) = at(i, j) / multinomial;
    }
  return r;
}

bool HomPoly3::bernstein_positive() const {
  const HomPoly3 b = bernstein();
  for (int i = 0; i <= degree_; ++i)
    for (int j = 0; i + j <= degree_; ++j)
      if (!(b.at(i, j) > 0.0)) return false;
  return true;
}

double HomPoly3::max_abs_coefficient() const {
  double m = 0;
  for (double x : c_) m = std::max(m, std::abs(x));
  return m;
}

HomPoly3 discriminant_poly(const SymTensor3& t0, const SymTensor3& t1, const SymTensor3& t2) {
  const SymTensor3 a0 = deviator(t0), a1 = deviator(t1), a2 = deviator(t2);
  const HomPoly3 xx = HomPoly3::linear(a0.xx, a1.xx, a2.xx);
  const HomPoly3 yy = HomPoly3::linear(a0.yy, a1.yy, a2.yy);
  const HomPoly3 zz = HomPoly3::linear(a0.zz, a1.zz, a2.zz);
  const HomPoly3 xy = HomPoly3::linear(a0.xy, a1.xy, a2.xy);
  const HomPoly3 yz = HomPoly3::linear(a0.yz, a1.yz, a2.yz);
  const HomPoly3 xz = HomPoly3::linear(a0.xz, a1.xz, a2.xz);
  const HomPoly3 j2 = (xx * xx + yy * yy + zz * zz) * 0.5 + xy * xy + yz * yz + xz * xz;
  const HomPoly3 j3 = xx * (yy * zz - yz * yz) - xy * (xy * zz - yz * xz) + xz * (xy * yz - yy * xz);
  return j2 * j2 * j2 * 4.0 - j3 * j3 * 27.0;
}

}  // namespace tensortopo
