#include "tensortopo/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace tensortopo {

double signed_tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return dot(b - a, cross(c - a, d - a)) / 6.0;
}

TensorMesh::TensorMesh(std::vector<Vec3> vertices, std::vector<SymTensor3> tensors, std::vector<Tet> tets)
    : vertices_(std::move(vertices)), tensors_(std::move(tensors)), tets_(std::move(tets)) {
  if (tensors_.size() != vertices_.size())
    throw ParseError("tensor count " + std::to_string(tensors_.size()) + " != vertex count " +
                         std::to_string(vertices_.size()),
                     0);
  const int nv = static_cast<int>(vertices_.size());
  for (std::size_t t = 0; t < tets_.size(); ++t) {
    Tet& tet = tets_[t];
    for (int v : tet)
      if (v < 0 || v >= nv) throw ParseError("tet " + std::to_string(t) + ": index out of range", 0);
    const double vol = signed_tet_volume(vertices_[tet[0]], vertices_[tet[1]], vertices_[tet[2]], vertices_[tet[3]]);
    if (vol == 0.0 || !std::isfinite(vol)) throw ParseError("tet " + std::to_string(t) + ": degenerate tet", 0);
    if (vol < 0) std::swap(tet[2], tet[3]);
  }

  struct Entry {
    std::array<int, 3> key;
    int tet;
    int local;
  };
  std::vector<Entry> entries;
  entries.reserve(tets_.size() * 4);
  for (std::size_t t = 0; t < tets_.size(); ++t) {
    for (int k = 0; k < 4; ++k) {
      std::array<int, 3> key{tets_[t][kTetFaces[k][0]], tets_[t][kTetFaces[k][1]], tets_[t][kTetFaces[k][2]]};
      std::sort(key.begin(), key.end());
      entries.push_back({key, static_cast<int>(t), k});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.key != b.key ? a.key < b.key : a.tet < b.tet;
  });
  tet_faces_.assign(tets_.size(), {-1, -1, -1, -1});
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i;
    while (j < entries.size() && entries[j].key == entries[i].key) ++j;
    if (j - i > 2) throw ParseError("face shared by more than two tets", 0);
    Face f;
    f.v = entries[i].key;
    const int id = static_cast<int>(faces_.size());
    for (std::size_t k = i; k < j; ++k) {
      f.tets[k - i] = entries[k].tet;
      tet_faces_[entries[k].tet][entries[k].local] = id;
    }
    faces_.push_back(f);
    i = j;
  }

  if (!vertices_.empty()) {
    bbox_min_ = bbox_max_ = vertices_[0];
    for (const Vec3& p : vertices_) {
      for (int a = 0; a < 3; ++a) {
        bbox_min_[a] = std::min(bbox_min_[a], p[a]);
        bbox_max_[a] = std::max(bbox_max_[a], p[a]);
      }
    }
  }
  double sum = 0;
  for (const Tet& tet : tets_)
    for (const auto& e : kTetEdges) sum += distance(vertices_[tet[e[0]]], vertices_[tet[e[1]]]);
  cell_size_ = tets_.empty() ? 0.0 : sum / (6.0 * static_cast<double>(tets_.size()));
}

TensorMesh TensorMesh::with_tensors(std::vector<SymTensor3> tensors) const {
  if (tensors.size() != vertices_.size()) throw Error("with_tensors: tensor count mismatch");
  TensorMesh m(*this);
  m.tensors_ = std::move(tensors);
  return m;
}

int TensorMesh::neighbor(int t, int k) const {
  const Face& f = faces_[tet_faces_[t][k]];
  return f.tets[0] == t ? f.tets[1] : f.tets[0];
}

double TensorMesh::tet_volume(int t) const {
  const Tet& v = tets_[t];
  return signed_tet_volume(vertices_[v[0]], vertices_[v[1]], vertices_[v[2]], vertices_[v[3]]);
}

double TensorMesh::total_volume() const {
  double s = 0;
  for (std::size_t t = 0; t < tets_.size(); ++t) s += tet_volume(static_cast<int>(t));
  return s;
}

double TensorMesh::bbox_diagonal() const { return distance(bbox_min_, bbox_max_); }

std::array<SymTensor3, 3> TensorMesh::tet_gradient(int t) const {
  const Tet& v = tets_[t];
  const Vec3 p0 = vertices_[v[0]];
  const std::array<Vec3, 3> e{vertices_[v[1]] - p0, vertices_[v[2]] - p0, vertices_[v[3]] - p0};
  // Rows of E^{-1}^T are the dual basis: g_k = (e_{k+1} x e_{k+2}) / det.
  const double det = dot(e[0], cross(e[1], e[2]));
  const std::array<Vec3, 3> dual{cross(e[1], e[2]) / det, cross(e[2], e[0]) / det, cross(e[0], e[1]) / det};
  const SymTensor3 t0 = tensors_[v[0]];
  std::array<SymTensor3, 3> d{tensors_[v[1]] - t0, tensors_[v[2]] - t0, tensors_[v[3]] - t0};
  std::array<SymTensor3, 3> grad;
  for (int axis = 0; axis < 3; ++axis)
    grad[axis] = d[0] * dual[0][axis] + d[1] * dual[1][axis] + d[2] * dual[2][axis];
  return grad;
}

std::array<double, 4> barycentric(const TensorMesh& mesh, int t, const Vec3& p) {
  const Tet& v = mesh.tets()[t];
  const auto& x = mesh.vertices();
  const double vol = signed_tet_volume(x[v[0]], x[v[1]], x[v[2]], x[v[3]]);
  std::array<double, 4> w{
      signed_tet_volume(p, x[v[1]], x[v[2]], x[v[3]]) / vol,
      signed_tet_volume(x[v[0]], p, x[v[2]], x[v[3]]) / vol,
      signed_tet_volume(x[v[0]], x[v[1]], p, x[v[3]]) / vol,
      0.0,
  };
  w[3] = 1.0 - w[0] - w[1] - w[2];
  return w;
}

SymTensor3 interpolate(const TensorMesh& mesh, const BarycentricPoint& p) {
  if (p.tet < 0 || p.tet >= static_cast<int>(mesh.num_tets()))
    throw Error("interpolate: invalid tet id " + std::to_string(p.tet));
  const Tet& v = mesh.tets()[p.tet];
  const auto& t = mesh.tensors();
  return t[v[0]] * p.weights[0] + t[v[1]] * p.weights[1] + t[v[2]] * p.weights[2] + t[v[3]] * p.weights[3];
}

Vec3 position(const TensorMesh& mesh, const BarycentricPoint& p) {
  const Tet& v = mesh.tets()[p.tet];
  const auto& x = mesh.vertices();
  return x[v[0]] * p.weights[0] + x[v[1]] * p.weights[1] + x[v[2]] * p.weights[2] + x[v[3]] * p.weights[3];
}

// ---------------------------------------------------------------------------
// TFT text format

namespace {

class LineReader {
 public:
  explicit LineReader(const std::string& text) : in_(text) {}

  // Next non-empty line split into whitespace tokens; false at end of input.
  bool next(std::vector<std::string_view>& tokens) {
    while (std::getline(in_, line_)) {
      ++number_;
      if (!line_.empty() && line_.back() == '\r') line_.pop_back();
      tokens.clear();
      std::size_t i = 0;
      while (i < line_.size()) {
        while (i < line_.size() && std::isspace(static_cast<unsigned char>(line_[i]))) ++i;
        std::size_t j = i;
        while (j < line_.size() && !std::isspace(static_cast<unsigned char>(line_[j]))) ++j;
        if (j > i) tokens.emplace_back(line_.data() + i, j - i);
        i = j;
      }
      if (!tokens.empty()) return true;
    }
    return false;
  }
  int number() const { return number_; }

 private:
  std::istringstream in_;
  std::string line_;
  int number_ = 0;
};

double parse_real(std::string_view s, int line) {
  double v = 0;
  const char* b = s.data();
  if (!s.empty() && s[0] == '+') ++b;
  const auto [ptr, ec] = std::from_chars(b, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("bad number '" + std::string(s) + "'", line);
  return v;
}

long long parse_int(std::string_view s, int line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("bad integer '" + std::string(s) + "'", line);
  return v;
}

std::size_t parse_count(LineReader& r, std::vector<std::string_view>& tok, std::string_view keyword) {
  if (!r.next(tok)) throw ParseError("missing '" + std::string(keyword) + "' header", r.number() + 1);
  if (tok.size() != 2 || tok[0] != keyword)
    throw ParseError("expected '" + std::string(keyword) + " <count>'", r.number());
  const long long n = parse_int(tok[1], r.number());
  if (n < 0) throw ParseError("negative count", r.number());
  return static_cast<std::size_t>(n);
}

}  // namespace

TensorMesh parse_tft(const std::string& text) {
  LineReader r(text);
  std::vector<std::string_view> tok;
  if (!r.next(tok) || tok.size() != 2 || tok[0] != "TFT" || tok[1] != "1")
    throw ParseError("malformed header, expected 'TFT 1'", std::max(1, r.number()));

  const std::size_t nv = parse_count(r, tok, "vertices");
  std::vector<Vec3> vertices(nv);
  std::vector<SymTensor3> tensors(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    if (!r.next(tok)) throw ParseError("count mismatch: expected " + std::to_string(nv) + " vertices", r.number() + 1);
    if (tok.size() != 9) throw ParseError("vertex line needs 9 values", r.number());
    double v[9];
    for (int k = 0; k < 9; ++k) v[k] = parse_real(tok[k], r.number());
    vertices[i] = {v[0], v[1], v[2]};
    tensors[i] = {v[3], v[4], v[5], v[6], v[7], v[8]};
  }

  const std::size_t nt = parse_count(r, tok, "tets");
  std::vector<Tet> tets(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    if (!r.next(tok)) throw ParseError("count mismatch: expected " + std::to_string(nt) + " tets", r.number() + 1);
    if (tok.size() != 4) throw ParseError("tet line needs 4 indices", r.number());
    for (int k = 0; k < 4; ++k) {
      const long long idx = parse_int(tok[k], r.number());
      if (idx < 0 || idx >= static_cast<long long>(nv))
        throw ParseError("index out of range: " + std::to_string(idx), r.number());
      tets[i][k] = static_cast<int>(idx);
    }
    const double vol =
        signed_tet_volume(vertices[tets[i][0]], vertices[tets[i][1]], vertices[tets[i][2]], vertices[tets[i][3]]);
    if (vol == 0.0) throw ParseError("degenerate (zero-volume) tet", r.number());
  }
  if (r.next(tok)) throw ParseError("count mismatch: trailing content", r.number());
  return TensorMesh(std::move(vertices), std::move(tensors), std::move(tets));
}

TensorMesh read_tft(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_tft(ss.str());
}

std::string format_tft(const TensorMesh& mesh) {
  std::string out = "TFT 1\nvertices " + std::to_string(mesh.num_vertices()) + "\n";
  char buf[512];
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
    const Vec3& p = mesh.vertices()[i];
    const SymTensor3& t = mesh.tensors()[i];
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n", p.x, p.y, p.z, t.xx,
                  t.yy, t.zz, t.xy, t.yz, t.xz);
    out += buf;
  }
  out += "tets " + std::to_string(mesh.num_tets()) + "\n";
  for (const Tet& t : mesh.tets()) {
    std::snprintf(buf, sizeof buf, "%d %d %d %d\n", t[0], t[1], t[2], t[3]);
    out += buf;
  }
  return out;
}

void write_tft(const TensorMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << format_tft(mesh);
  if (!out) throw Error("write failed: " + path.string());
}

// ---------------------------------------------------------------------------
// Generation

namespace {

constexpr std::array<std::array<int, 3>, 6> kAxisOrders{
    {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

// Freudenthal/Kuhn split: walk from corner (0,0,0) to (1,1,1) one axis at a time.
template <typename Index>
void split_cell(const Index& index, int i, int j, int k, std::vector<Tet>& tets) {
  for (const auto& order : kAxisOrders) {
    std::array<int, 3> c{i, j, k};
    Tet t;
    t[0] = index(c[0], c[1], c[2]);
    for (int s = 0; s < 3; ++s) {
      ++c[order[s]];
      t[s + 1] = index(c[0], c[1], c[2]);
    }
    const std::set<int> distinct(t.begin(), t.end());
    if (distinct.size() == 4) tets.push_back(t);
  }
}

void orient(MeshGeometry& g) {
  for (Tet& t : g.tets)
    if (signed_tet_volume(g.vertices[t[0]], g.vertices[t[1]], g.vertices[t[2]], g.vertices[t[3]]) < 0)
      std::swap(t[2], t[3]);
}

MeshGeometry box_mesh(const BoxDomain& box, int n) {
  for (int a = 0; a < 3; ++a)
    if (!(box.max[a] > box.min[a])) throw ConfigError("box domain: nonpositive dimension");
  MeshGeometry g;
  const int m = n + 1;
  g.vertices.reserve(static_cast<std::size_t>(m) * m * m);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) {
        const Vec3 f{double(i) / n, double(j) / n, double(k) / n};
        g.vertices.push_back({box.min.x + f.x * (box.max.x - box.min.x), box.min.y + f.y * (box.max.y - box.min.y),
                              box.min.z + f.z * (box.max.z - box.min.z)});
      }
  auto index = [m](int i, int j, int k) { return i + m * (j + m * k); };
  g.tets.reserve(static_cast<std::size_t>(n) * n * n * 6);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) split_cell(index, i, j, k, g.tets);
  orient(g);
  return g;
}

MeshGeometry torus_mesh(const TorusDomain& torus, int n) {
  if (!(torus.major > 0) || !(torus.minor > 0) || torus.minor >= torus.major)
    throw ConfigError("torus domain: need 0 < minor < major");
  const int nl = 2 * n, nm = 2 * n, nr = std::max(1, n / 4);
  MeshGeometry g;
  // Core ring first (radial index 0 collapses the meridian index).
  for (int w = 0; w < nl; ++w) {
    const double phi = 2 * std::numbers::pi * w / nl;
    g.vertices.push_back({torus.major * std::cos(phi), torus.major * std::sin(phi), 0});
  }
  for (int u = 1; u <= nr; ++u)
    for (int w = 0; w < nl; ++w)
      for (int v = 0; v < nm; ++v) {
        const double rho = torus.minor * u / nr;
        const double phi = 2 * std::numbers::pi * w / nl;
        const double th = 2 * std::numbers::pi * v / nm;
        const double ring = torus.major + rho * std::cos(th);
        g.vertices.push_back({ring * std::cos(phi), ring * std::sin(phi), rho * std::sin(th)});
      }
  auto index = [&](int u, int v, int w) {
    w %= nl;
    v %= nm;
    if (u == 0) return w;
    return nl + ((u - 1) * nl + w) * nm + v;
  };
  for (int w = 0; w < nl; ++w)
    for (int v = 0; v < nm; ++v)
      for (int u = 0; u < nr; ++u) split_cell(index, u, v, w, g.tets);
  orient(g);
  return g;
}

}  // namespace

MeshGeometry generate_mesh(const Domain& domain, int resolution) {
  if (resolution < 1) throw ConfigError("generate_mesh: resolution must be >= 1");
  if (const auto* box = std::get_if<BoxDomain>(&domain)) return box_mesh(*box, resolution);
  return torus_mesh(std::get<TorusDomain>(domain), resolution);
}

TensorMesh sample_field_onto_mesh(const MeshGeometry& geometry, const AnalyticField& f) {
  const long long n = static_cast<long long>(geometry.vertices.size());
  std::vector<SymTensor3> tensors(geometry.vertices.size());
  // Throwing inside a parallel region is undefined; validate the field id first.
  (void)sample_analytic(f, Vec3{});
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) tensors[i] = sample_analytic(f, geometry.vertices[i]);
  return TensorMesh(geometry.vertices, std::move(tensors), geometry.tets);
}

}  // namespace tensortopo
