#include "tensortopo/locator.hpp"

#include <algorithm>
#include <cmath>

namespace tensortopo {

TetLocator::TetLocator(const TensorMesh& mesh) : mesh_(&mesh) {
  const auto [lo, hi] = mesh.bbox();
  const double pad = 1e-9 * std::max(1.0, distance(lo, hi));
  origin_ = lo - Vec3{pad, pad, pad};
  const Vec3 ext = hi - lo + Vec3{2 * pad, 2 * pad, 2 * pad};
  const double target = std::max<double>(1.0, static_cast<double>(mesh.num_tets()) / 4.0);
  const double h = std::cbrt(ext.x * ext.y * ext.z / target);
  for (int a = 0; a < 3; ++a) {
    dims_[a] = std::clamp(static_cast<int>(std::ceil(ext[a] / std::max(h, 1e-300))), 1, 1024);
    step_[a] = ext[a] / dims_[a];
  }
  const std::size_t ncell = static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
  std::vector<std::array<int, 6>> ranges(mesh.num_tets());
  std::vector<int> count(ncell + 1, 0);
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    Vec3 bmin = mesh.vertices()[mesh.tets()[t][0]], bmax = bmin;
    for (int v : mesh.tets()[t])
      for (int a = 0; a < 3; ++a) {
        bmin[a] = std::min(bmin[a], mesh.vertices()[v][a]);
        bmax[a] = std::max(bmax[a], mesh.vertices()[v][a]);
      }
    const auto c0 = cell_of(bmin), c1 = cell_of(bmax);
    ranges[t] = {c0[0], c0[1], c0[2], c1[0], c1[1], c1[2]};
    for (int k = c0[2]; k <= c1[2]; ++k)
      for (int j = c0[1]; j <= c1[1]; ++j)
        for (int i = c0[0]; i <= c1[0]; ++i) ++count[cell_index(i, j, k) + 1];
  }
  for (std::size_t c = 0; c < ncell; ++c) count[c + 1] += count[c];
  start_ = count;
  items_.resize(count[ncell]);
  std::vector<int> fill(count.begin(), count.end() - 1);
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    const auto& r = ranges[t];
    for (int k = r[2]; k <= r[5]; ++k)
      for (int j = r[1]; j <= r[4]; ++j)
        for (int i = r[0]; i <= r[3]; ++i) items_[fill[cell_index(i, j, k)]++] = static_cast<int>(t);
  }
}

std::array<int, 3> TetLocator::cell_of(const Vec3& p) const {
  std::array<int, 3> c;
  for (int a = 0; a < 3; ++a)
    c[a] = std::clamp(static_cast<int>(std::floor((p[a] - origin_[a]) / step_[a])), 0, dims_[a] - 1);
  return c;
}

std::optional<BarycentricPoint> TetLocator::locate(const Vec3& p) const {
  for (int a = 0; a < 3; ++a) {
    const double u = (p[a] - origin_[a]) / step_[a];
    if (u < 0 || u > dims_[a]) return std::nullopt;
  }
  const auto c = cell_of(p);
  const int cell = cell_index(c[0], c[1], c[2]);
  BarycentricPoint best;
  double best_min = -1e-9;
  for (int i = start_[cell]; i < start_[cell + 1]; ++i) {
    const int t = items_[i];
    const auto w = barycentric(*mesh_, t, p);
    const double m = std::min({w[0], w[1], w[2], w[3]});
    if (m > best_min) {
      best_min = m;
      best.tet = t;
      best.weights = w;
    }
  }
  if (best.tet < 0) return std::nullopt;
  return best;
}

FieldSampler mesh_sampler(const TetLocator& locator) {
  return [&locator](const Vec3& p) -> std::optional<SymTensor3> {
    const auto b = locator.locate(p);
    if (!b) return std::nullopt;
    return interpolate(locator.mesh(), *b);
  };
}

FieldSampler analytic_sampler(AnalyticField f) {
  return [f = std::move(f)](const Vec3& p) -> std::optional<SymTensor3> { return sample_analytic(f, p); };
}

}  // namespace tensortopo
