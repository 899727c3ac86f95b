#include "tensortopo/neutral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>

namespace tensortopo {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

int NeutralSurface::vertex_on_edge(int a, int b) const {
  const auto it = edge_vertex.find(edge_key(a, b));
  return it == edge_vertex.end() ? -1 : it->second;
}

bool positive_mode(const SymTensor3& t) {
  const auto mu = mode(t);
  return !mu || *mu >= 0.0;
}

namespace {

// Mode with the vertex perturbation applied at the endpoints.
double perturbed_mode(const SymTensor3& t, double mode_tol) {
  const auto mu = mode(t);
  if (!mu) return mode_tol;
  if (std::abs(*mu) < mode_tol) return *mu < 0 ? -mode_tol : mode_tol;
  return *mu;
}

// Bisection for the sign change of mode along edge a -> b (a < b).
Vec3 edge_crossing(const TensorMesh& mesh, int a, int b, double mode_tol) {
  const SymTensor3 ta = mesh.tensors()[a], tb = mesh.tensors()[b];
  const bool pos_a = perturbed_mode(ta, mode_tol) > 0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 64; ++it) {
    const double s = 0.5 * (lo + hi);
    const SymTensor3 t = ta * (1.0 - s) + tb * s;
    const auto mu = mode(t);
    if (mu && std::abs(*mu) <= 0.5 * mode_tol) {
      lo = hi = s;
      break;
    }
    const bool pos = !mu || *mu >= 0;
    (pos == pos_a ? lo : hi) = s;
  }
  const double s = 0.5 * (lo + hi);
  return mesh.vertices()[a] * (1.0 - s) + mesh.vertices()[b] * s;
}

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

NeutralSurface extract(const TensorMesh& mesh, const Config& cfg, bool parallel) {
  NeutralSurface s;
  const std::size_t nv = mesh.num_vertices();
  s.positive.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) s.positive[v] = perturbed_mode(mesh.tensors()[v], cfg.mode_tol) > 0;

  // Unique cut edges in sorted order.
  std::vector<std::uint64_t> cut;
  for (const Tet& t : mesh.tets())
    for (const auto& e : kTetEdges)
      if (s.positive[t[e[0]]] != s.positive[t[e[1]]]) cut.push_back(edge_key(t[e[0]], t[e[1]]));
  std::sort(cut.begin(), cut.end());
  cut.erase(std::unique(cut.begin(), cut.end()), cut.end());

  const long long nc = static_cast<long long>(cut.size());
  s.vertices.resize(cut.size());
  s.vertex_edge.resize(cut.size());
  auto solve = [&](long long i) {
    const int a = static_cast<int>(cut[i] >> 32), b = static_cast<int>(cut[i] & 0xffffffffu);
    s.vertex_edge[i] = {a, b};
    s.vertices[i] = edge_crossing(mesh, a, b, cfg.mode_tol);
  };
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < nc; ++i) solve(i);
  } else {
    for (long long i = 0; i < nc; ++i) solve(i);
  }
  s.edge_vertex.reserve(cut.size());
  for (std::size_t i = 0; i < cut.size(); ++i) s.edge_vertex.emplace(cut[i], static_cast<int>(i));

  // Per-tet triangles.
  for (std::size_t ti = 0; ti < mesh.num_tets(); ++ti) {
    const Tet& t = mesh.tets()[ti];
    std::vector<int> pos, neg;
    for (int v : t) (s.positive[v] ? pos : neg).push_back(v);
    if (pos.empty() || neg.empty()) continue;
    std::vector<int> poly;
    if (pos.size() == 1 || neg.size() == 1) {
      const int apex = pos.size() == 1 ? pos[0] : neg[0];
      const auto& others = pos.size() == 1 ? neg : pos;
      for (int o : others) poly.push_back(s.vertex_on_edge(apex, o));
    } else {
      const int a = pos[0], b = pos[1], c = neg[0], d = neg[1];
      poly = {s.vertex_on_edge(a, c), s.vertex_on_edge(a, d), s.vertex_on_edge(b, d), s.vertex_on_edge(b, c)};
    }
    Vec3 pos_c;
    for (int v : pos) pos_c += mesh.vertices()[v];
    pos_c = pos_c / static_cast<double>(pos.size());
    Vec3 neg_c;
    for (int v : neg) neg_c += mesh.vertices()[v];
    neg_c = neg_c / static_cast<double>(neg.size());
    const Vec3 toward_pos = pos_c - neg_c;

    std::vector<Triangle> tris;
    if (poly.size() == 3) {
      tris.push_back({poly[0], poly[1], poly[2]});
    } else {
      // Diagonal from the polygon vertex with the smallest edge key.
      std::size_t m = 0;
      for (std::size_t k = 1; k < 4; ++k)
        if (cut[poly[k]] < cut[poly[m]]) m = k;
      tris.push_back({poly[m], poly[(m + 1) % 4], poly[(m + 2) % 4]});
      tris.push_back({poly[m], poly[(m + 2) % 4], poly[(m + 3) % 4]});
    }
    // Orientation from the combinatorial polygon (independent of crossing positions).
    const Vec3 p0 = mesh.vertices()[s.vertex_edge[poly[0]][0]] + mesh.vertices()[s.vertex_edge[poly[0]][1]];
    Vec3 n;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const auto& e0 = s.vertex_edge[poly[k]];
      const auto& e1 = s.vertex_edge[poly[(k + 1) % poly.size()]];
      const Vec3 a = (mesh.vertices()[e0[0]] + mesh.vertices()[e0[1]]) - p0;
      const Vec3 b = (mesh.vertices()[e1[0]] + mesh.vertices()[e1[1]]) - p0;
      n += cross(a, b);
    }
    const bool flip = dot(n, toward_pos) < 0;
    for (Triangle tri : tris) {
      if (flip) std::swap(tri[1], tri[2]);
      s.triangles.push_back(tri);
      s.triangle_tet.push_back(static_cast<int>(ti));
    }
  }

  // Sheets: triangles sharing an edge.
  std::map<std::uint64_t, std::vector<int>> edge_tris;
  for (std::size_t i = 0; i < s.triangles.size(); ++i)
    for (int k = 0; k < 3; ++k) edge_tris[edge_key(s.triangles[i][k], s.triangles[i][(k + 1) % 3])].push_back(int(i));
  UnionFind uf(s.triangles.size());
  for (const auto& [key, tris] : edge_tris)
    for (std::size_t k = 1; k < tris.size(); ++k) uf.unite(tris[0], tris[k]);
  std::vector<int> root_sheet(s.triangles.size(), -1);
  s.sheet.resize(s.triangles.size());
  for (std::size_t i = 0; i < s.triangles.size(); ++i) {
    const int r = uf.find(static_cast<int>(i));
    if (root_sheet[r] < 0) {
      root_sheet[r] = static_cast<int>(s.sheet_closed.size());
      s.sheet_closed.push_back(true);
    }
    s.sheet[i] = root_sheet[r];
  }
  for (const auto& [key, tris] : edge_tris)
    if (tris.size() != 2) s.sheet_closed[s.sheet[tris[0]]] = false;
  return s;
}

}  // namespace

NeutralSurface extract_neutral_surface(const TensorMesh& mesh, const Config& cfg) { return extract(mesh, cfg, true); }

NeutralSurface extract_neutral_surface_serial(const TensorMesh& mesh, const Config& cfg) {
  return extract(mesh, cfg, false);
}

TensorMesh subdivide_mesh(const TensorMesh& mesh) {
  std::vector<Vec3> vertices = mesh.vertices();
  std::vector<SymTensor3> tensors = mesh.tensors();
  std::map<std::uint64_t, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = edge_key(a, b);
    const auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = static_cast<int>(vertices.size());
    vertices.push_back((vertices[a] + vertices[b]) * 0.5);
    tensors.push_back((tensors[a] + tensors[b]) * 0.5);
    midpoint.emplace(key, id);
    return id;
  };
  std::vector<Tet> tets;
  tets.reserve(mesh.num_tets() * 8);
  for (const Tet& t : mesh.tets()) {
    const int v0 = t[0], v1 = t[1], v2 = t[2], v3 = t[3];
    const int m01 = mid(v0, v1), m02 = mid(v0, v2), m03 = mid(v0, v3);
    const int m12 = mid(v1, v2), m13 = mid(v1, v3), m23 = mid(v2, v3);
    tets.push_back({v0, m01, m02, m03});
    tets.push_back({m01, v1, m12, m13});
    tets.push_back({m02, m12, v2, m23});
    tets.push_back({m03, m13, m23, v3});
    // Inner octahedron split along its shortest diagonal.
    const std::array<std::array<int, 2>, 3> diag{{{m01, m23}, {m02, m13}, {m03, m12}}};
    int best = 0;
    for (int k = 1; k < 3; ++k)
      if (distance(vertices[diag[k][0]], vertices[diag[k][1]]) < distance(vertices[diag[best][0]], vertices[diag[best][1]]))
        best = k;
    const int a = diag[best][0], b = diag[best][1];
    // The four remaining octahedron vertices form a cycle around the diagonal.
    std::vector<int> ring;
    for (int k = 0; k < 3; ++k)
      if (k != best) {
        ring.push_back(diag[k][0]);
        ring.push_back(diag[k][1]);
      }
    // ring = {p, p', q, q'} where p/p' are opposite; cycle p, q, p', q'.
    const std::array<int, 4> cycle{ring[0], ring[2], ring[1], ring[3]};
    for (int k = 0; k < 4; ++k) tets.push_back({a, b, cycle[k], cycle[(k + 1) % 4]});
  }
  return TensorMesh(std::move(vertices), std::move(tensors), std::move(tets));
}

void write_obj(const std::filesystem::path& path, const std::vector<Vec3>& vertices,
               const std::vector<Triangle>& triangles) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  char buf[128];
  for (const Vec3& v : vertices) {
    std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", v.x, v.y, v.z);
    out << buf;
  }
  for (const Triangle& t : triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace tensortopo
