#include "tensortopo/regions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

namespace tensortopo {

namespace {

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> parent;
};

using KeyTri = std::array<std::int64_t, 3>;

bool has_sign(const NeutralSurface& s, const std::array<int, 3>& face, bool positive) {
  return std::any_of(face.begin(), face.end(), [&](int v) { return s.positive[v] == positive; });
}

// Deterministic, roughly uniform ray directions on the sphere.
Vec3 golden_direction(int k) {
  constexpr int n = 16;
  const double z = 1.0 - (2.0 * k + 1.0) / n;
  const double phi = k * M_PI * (3.0 - std::sqrt(5.0));
  const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {rho * std::cos(phi), rho * std::sin(phi), z};
}

// Crossings of the ray p + s d (s > 0) with the triangles; nullopt when a hit
// is too close to an edge or the ray origin to be counted reliably.
std::optional<int> ray_crossings(const Vec3& p, const Vec3& d, const std::vector<Vec3>& verts,
                                 const std::vector<Triangle>& tris, const std::vector<int>& subset) {
  int count = 0;
  for (int ti : subset) {
    const Vec3& a = verts[tris[ti][0]];
    const Vec3 e1 = verts[tris[ti][1]] - a, e2 = verts[tris[ti][2]] - a;
    const Vec3 pv = cross(d, e2);
    const double det = dot(e1, pv);
    const double scale = norm(e1) * norm(e2);
    const Vec3 tv = p - a;
    if (std::abs(det) <= 1e-12 * scale) {
      // Parallel: only a problem when the ray runs inside the triangle's plane.
      if (std::abs(dot(tv, cross(e1, e2))) <= 1e-12 * scale * (norm(tv) + 1e-300)) return std::nullopt;
      continue;
    }
    const double u = dot(tv, pv) / det;
    const Vec3 qv = cross(tv, e1);
    const double v = dot(d, qv) / det;
    const double s = dot(e2, qv) / det;
    constexpr double edge = 1e-9;
    if (u < -edge || v < -edge || u + v > 1 + edge || s < 0) continue;
    if (u < edge || v < edge || u + v > 1 - edge) return std::nullopt;
    if (s < 1e-12) return std::nullopt;
    ++count;
  }
  return count;
}

}  // namespace

std::vector<Region> segment_regions(const TensorMesh& mesh, const NeutralSurface& surface,
                                    std::vector<int>* cell_region_out) {
  const std::size_t nt = mesh.num_tets();
  const std::int64_t nv = static_cast<std::int64_t>(mesh.num_vertices());
  if (surface.positive.size() != mesh.num_vertices())
    throw TopologyError("segment_regions: surface was extracted from another mesh");

  std::vector<bool> cell_exists(2 * nt, false);
  for (std::size_t t = 0; t < nt; ++t)
    for (int v : mesh.tets()[t]) cell_exists[2 * t + (surface.positive[v] ? 0 : 1)] = true;

  UnionFind uf(2 * nt);
  for (const Face& f : mesh.faces()) {
    if (f.boundary()) continue;
    for (int side = 0; side < 2; ++side) {
      if (!has_sign(surface, f.v, side == 0)) continue;
      const int c0 = 2 * f.tets[0] + side, c1 = 2 * f.tets[1] + side;
      if (!cell_exists[c0] || !cell_exists[c1]) throw TopologyError("segment_regions: sign mismatch across a shared face");
      uf.unite(c0, c1);
    }
  }

  std::vector<int> cell_region(2 * nt, -1);
  std::vector<int> root_region(2 * nt, -1);
  std::vector<Region> regions;
  for (std::size_t c = 0; c < 2 * nt; ++c) {
    if (!cell_exists[c]) continue;
    const int r = uf.find(static_cast<int>(c));
    if (root_region[r] < 0) {
      root_region[r] = static_cast<int>(regions.size());
      Region reg;
      reg.id = root_region[r];
      reg.linearity = c % 2 == 0 ? Linearity::Linear : Linearity::Planar;
      regions.push_back(std::move(reg));
    }
    cell_region[c] = root_region[r];
    regions[root_region[r]].cells.push_back(static_cast<int>(c));
  }

  // Boundary triangles per region, as key triples.
  std::vector<std::vector<KeyTri>> tris(regions.size());
  for (std::size_t i = 0; i < surface.triangles.size(); ++i) {
    const int t = surface.triangle_tet[i];
    const Triangle& tri = surface.triangles[i];
    const KeyTri k{nv + tri[0], nv + tri[1], nv + tri[2]};
    // Triangles face the positive side: outward for the planar cell.
    tris[cell_region[2 * t + 1]].push_back(k);
    tris[cell_region[2 * t]].push_back({k[0], k[2], k[1]});
  }
  for (const Face& f : mesh.faces()) {
    if (!f.boundary()) continue;
    const int t = f.tets[0];
    int opposite = -1;
    for (int v : mesh.tets()[t])
      if (std::find(f.v.begin(), f.v.end(), v) == f.v.end()) opposite = v;
    const Vec3& a = mesh.vertices()[f.v[0]];
    const Vec3 n = cross(mesh.vertices()[f.v[1]] - a, mesh.vertices()[f.v[2]] - a);
    const bool reverse = dot(n, mesh.vertices()[opposite] - a) > 0;
    for (int side = 0; side < 2; ++side) {
      const bool pos = side == 0;
      if (!has_sign(surface, f.v, pos)) continue;
      // Clip the face to one sign: vertices of that sign plus edge crossings.
      std::vector<std::int64_t> poly;
      for (int k = 0; k < 3; ++k) {
        const int v0 = f.v[k], v1 = f.v[(k + 1) % 3];
        if (surface.positive[v0] == pos) poly.push_back(v0);
        if (surface.positive[v0] != surface.positive[v1]) {
          const int sv = surface.vertex_on_edge(v0, v1);
          if (sv < 0) throw TopologyError("segment_regions: missing edge crossing");
          poly.push_back(nv + sv);
        }
      }
      if (reverse) std::reverse(poly.begin(), poly.end());
      // The clipped polygon is convex, so ear clipping reduces to a fan; start
      // at the smallest key so neighbouring cells would agree.
      std::rotate(poly.begin(), std::min_element(poly.begin(), poly.end()), poly.end());
      auto& out = tris[cell_region[2 * t + side]];
      for (std::size_t k = 1; k + 1 < poly.size(); ++k) out.push_back({poly[0], poly[k], poly[k + 1]});
    }
  }

  for (std::size_t r = 0; r < regions.size(); ++r) {
    BoundaryMesh& b = regions[r].boundary;
    std::unordered_map<std::int64_t, int> local;
    auto index = [&](std::int64_t key) {
      const auto [it, inserted] = local.emplace(key, static_cast<int>(b.keys.size()));
      if (inserted) {
        b.keys.push_back(key);
        b.vertices.push_back(key < nv ? mesh.vertices()[key] : surface.vertices[key - nv]);
      }
      return it->second;
    };
    b.triangles.reserve(tris[r].size());
    for (const KeyTri& k : tris[r]) b.triangles.push_back({index(k[0]), index(k[1]), index(k[2])});
  }
  if (cell_region_out) *cell_region_out = std::move(cell_region);
  return regions;
}

std::vector<std::array<std::int64_t, 2>> open_edges(const BoundaryMesh& b) {
  std::map<std::pair<int, int>, int> half;
  for (const Triangle& t : b.triangles)
    for (int k = 0; k < 3; ++k) {
      const int u = t[k], v = t[(k + 1) % 3];
      half[{std::min(u, v), std::max(u, v)}] += u < v ? 1 : -1;
    }
  std::vector<std::array<std::int64_t, 2>> out;
  for (const auto& [e, balance] : half)
    if (balance != 0) out.push_back({b.keys[e.first], b.keys[e.second]});
  return out;
}

double region_volume(const Region& r) {
  const auto open = open_edges(r.boundary);
  if (!open.empty()) {
    std::string msg = "region " + std::to_string(r.id) + " boundary is not watertight; open edges:";
    for (std::size_t i = 0; i < std::min<std::size_t>(open.size(), 8); ++i)
      msg += " (" + std::to_string(open[i][0]) + "," + std::to_string(open[i][1]) + ")";
    if (open.size() > 8) msg += " ... " + std::to_string(open.size()) + " total";
    throw TopologyError(msg);
  }
  double v = 0;
  const auto& p = r.boundary.vertices;
  for (const Triangle& t : r.boundary.triangles) v += dot(p[t[0]], cross(p[t[1]], p[t[2]]));
  return v / 6.0;
}

int euler_characteristic(const Region& r) {
  std::set<std::pair<int, int>> edges;
  std::vector<bool> used(r.boundary.vertices.size(), false);
  for (const Triangle& t : r.boundary.triangles)
    for (int k = 0; k < 3; ++k) {
      used[t[k]] = true;
      edges.emplace(std::min(t[k], t[(k + 1) % 3]), std::max(t[k], t[(k + 1) % 3]));
    }
  const long long v = std::count(used.begin(), used.end(), true);
  const long long chi = v - static_cast<long long>(edges.size()) + static_cast<long long>(r.boundary.triangles.size());
  if (chi % 2 != 0)
    throw TopologyError("region " + std::to_string(r.id) + ": odd boundary Euler characteristic " + std::to_string(chi));
  return static_cast<int>(chi / 2);
}

std::vector<RegionRelation> compute_relations(std::vector<Region>& regions, const NeutralSurface& surface,
                                              const std::vector<int>& cell_region) {
  std::vector<std::vector<int>> sheet_tris(surface.num_sheets());
  for (std::size_t i = 0; i < surface.triangles.size(); ++i) sheet_tris[surface.sheet[i]].push_back(static_cast<int>(i));
  for (Region& r : regions) r.sheets.clear();

  std::map<std::tuple<int, int, int>, std::size_t> index;
  std::vector<RegionRelation> rel;
  auto add = [&](RegionRelation::Kind kind, int a, int b, int sheet) {
    const auto key = std::make_tuple(static_cast<int>(kind), a, b);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, rel.size()).first;
      rel.push_back({kind, a, b, {}});
    }
    rel[it->second].sheets.push_back(sheet);
  };

  for (std::size_t s = 0; s < surface.num_sheets(); ++s) {
    const auto& st = sheet_tris[s];
    const int t = surface.triangle_tet[st.front()];
    const int lin = cell_region[2 * t], pla = cell_region[2 * t + 1];
    const bool closed = surface.sheet_closed[s];
    add(RegionRelation::Kind::Adjacent, lin, pla, static_cast<int>(s));
    if (!closed) {
      regions[lin].sheets.push_back({static_cast<int>(s), false, SheetSide::Outer});
      regions[pla].sheets.push_back({static_cast<int>(s), false, SheetSide::Outer});
      continue;
    }
    // Probe point just off the largest triangle on the linear side.
    int best = st.front();
    double best_area = -1;
    for (int ti : st) {
      const auto& tr = surface.triangles[ti];
      const auto& v = surface.vertices;
      const double area = norm(cross(v[tr[1]] - v[tr[0]], v[tr[2]] - v[tr[0]]));
      if (area > best_area) {
        best_area = area;
        best = ti;
      }
    }
    const auto& tr = surface.triangles[best];
    const auto& v = surface.vertices;
    const Vec3 n = cross(v[tr[1]] - v[tr[0]], v[tr[2]] - v[tr[0]]);
    const Vec3 c = (v[tr[0]] + v[tr[1]] + v[tr[2]]) / 3.0;
    const Vec3 probe = c + normalized(n) * (1e-3 * std::sqrt(0.5 * best_area));
    std::optional<int> crossings;
    for (int k = 0; k < 16 && !crossings; ++k) crossings = ray_crossings(probe, golden_direction(k), v, surface.triangles, st);
    if (!crossings) throw TopologyError("compute_relations: ray parity undecided for sheet " + std::to_string(s));
    const bool linear_inside = *crossings % 2 == 1;
    const int outer = linear_inside ? pla : lin, inner = linear_inside ? lin : pla;
    add(RegionRelation::Kind::Contains, outer, inner, static_cast<int>(s));
    regions[outer].sheets.push_back({static_cast<int>(s), true, SheetSide::Outer});
    regions[inner].sheets.push_back({static_cast<int>(s), true, SheetSide::Inner});
  }
  return rel;
}

std::pair<int, int> betti(const Region& r) {
  // Each closed sheet with r outside encloses one complementary component.
  const int b2 = static_cast<int>(std::count_if(r.sheets.begin(), r.sheets.end(), [](const BoundarySheet& s) {
    return s.closed && s.side == SheetSide::Outer;
  }));
  const int b1 = 1 + b2 - r.euler_char;
  if (b1 < 0)
    throw TopologyError("region " + std::to_string(r.id) + ": negative beta1 (chi " + std::to_string(r.euler_char) +
                        ", beta2 " + std::to_string(b2) + ")");
  return {b1, b2};
}

Segmentation analyze_regions(const TensorMesh& mesh, const NeutralSurface& surface) {
  Segmentation seg;
  seg.regions = segment_regions(mesh, surface, &seg.cell_region);
  for (Region& r : seg.regions) {
    r.volume = region_volume(r);
    r.euler_char = euler_characteristic(r);
  }
  seg.relations = compute_relations(seg.regions, surface, seg.cell_region);
  for (Region& r : seg.regions) std::tie(r.beta1, r.beta2) = betti(r);
  return seg;
}

int assign_curve_region(const DegenerateCurve& curve, const Segmentation& seg) {
  std::vector<int> found;
  for (int t : curve.tets) {
    if (t < 0) continue;
    const std::size_t c = static_cast<std::size_t>(cell_index(t, curve.linearity));
    if (c < seg.cell_region.size() && seg.cell_region[c] >= 0) found.push_back(seg.cell_region[c]);
  }
  if (found.empty()) throw TopologyError("assign_curve_region: no sample lies in a cell of the curve's linearity");
  const int r = found.front();
  if (found[found.size() / 2] != r || found.back() != r)
    throw TopologyError("assign_curve_region: samples lie in different regions");
  return r;
}

}  // namespace tensortopo
