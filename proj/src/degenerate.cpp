#include "tensortopo/degenerate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "tensortopo/face_poly.hpp"

namespace tensortopo {

std::string to_string(PointClass c) {
  switch (c) {
    case PointClass::Wedge: return "wedge";
    case PointClass::Trisector: return "trisector";
    case PointClass::Transition: return "transition";
    case PointClass::Unresolved: return "unresolved";
  }
  return "?";
}

double DegenerateCurve::length() const {
  double s = 0;
  for (std::size_t i = 1; i < samples.size(); ++i) s += distance(samples[i - 1], samples[i]);
  return s;
}

std::vector<Vec3> DegenerateCurve::loop_points() const {
  if (closed && samples.size() > 1) return {samples.begin(), samples.end() - 1};
  return samples;
}

// ---------------------------------------------------------------------------
// Face scan

namespace {

using Bary = std::array<double, 3>;
using SubTri = std::array<Bary, 3>;

Bary mid(const Bary& a, const Bary& b) { return {(a[0] + b[0]) / 2, (a[1] + b[1]) / 2, (a[2] + b[2]) / 2}; }

// Damped Newton minimization of the nonnegative polynomial over (u, v), w = 1 - u - v.
struct FaceMinimizer {
  explicit FaceMinimizer(const HomPoly3& p) : p(p) {
    pu = p.partial(0), pv = p.partial(1), pw = p.partial(2);
    puu = pu.partial(0), puv = pu.partial(1), puw = pu.partial(2);
    pvv = pv.partial(1), pvw = pv.partial(2), pww = pw.partial(2);
  }

  std::optional<Bary> run(double u, double v) const {
    for (int it = 0; it < 80; ++it) {
      const double w = 1.0 - u - v;
      const double f = p(u, v, w);
      const double du = pu(u, v, w), dv = pv(u, v, w), dw = pw(u, v, w);
      const double gu = du - dw, gv = dv - dw;
      const double huu = puu(u, v, w) - 2 * puw(u, v, w) + pww(u, v, w);
      const double huv = puv(u, v, w) - puw(u, v, w) - pvw(u, v, w) + pww(u, v, w);
      const double hvv = pvv(u, v, w) - 2 * pvw(u, v, w) + pww(u, v, w);
      // Shift to positive definite if needed.
      const double tr = huu + hvv;
      const double det = huu * hvv - huv * huv;
      const double disc = std::sqrt(std::max(0.0, tr * tr / 4 - det));
      const double min_eig = tr / 2 - disc;
      const double scale = std::max({std::abs(huu), std::abs(hvv), std::abs(huv), 1e-300});
      const double lambda = min_eig > 1e-10 * scale ? 0.0 : (-min_eig + 1e-6 * scale);
      const double a = huu + lambda, c = hvv + lambda;
      const double dd = a * c - huv * huv;
      if (!(dd > 0)) return std::nullopt;
      double su = -(c * gu - huv * gv) / dd;
      double sv = -(a * gv - huv * gu) / dd;
      double t = 1.0;
      while (t > 1e-10 && p(u + t * su, v + t * sv, 1.0 - u - v - t * (su + sv)) > f) t *= 0.5;
      if (t <= 1e-10) break;
      u += t * su;
      v += t * sv;
      if (u < -0.25 || v < -0.25 || u + v > 1.25) return std::nullopt;
      if (t * std::hypot(su, sv) < 1e-15) break;
    }
    return Bary{u, v, 1.0 - u - v};
  }

  HomPoly3 p, pu, pv, pw, puu, puv, puw, pvv, pvw, pww;
};

}  // namespace

FaceScan face_degenerate_points(const TensorMesh& mesh, int face, std::optional<Linearity> linearity,
                                const FaceScanOptions& opt) {
  const Face& f = mesh.faces()[face];
  const std::array<SymTensor3, 3> t{mesh.tensors()[f.v[0]], mesh.tensors()[f.v[1]], mesh.tensors()[f.v[2]]};
  const std::array<Vec3, 3> x{mesh.vertices()[f.v[0]], mesh.vertices()[f.v[1]], mesh.vertices()[f.v[2]]};
  auto tensor_at = [&](const Bary& w) { return t[0] * w[0] + t[1] * w[1] + t[2] * w[2]; };
  auto point_at = [&](const Bary& w) { return x[0] * w[0] + x[1] * w[1] + x[2] * w[2]; };

  FaceScan out;
  std::vector<SubTri> level{SubTri{Bary{1, 0, 0}, Bary{0, 1, 0}, Bary{0, 0, 1}}};
  std::vector<SubTri> leaves;
  for (int d = 0;; ++d) {
    std::vector<SubTri> survivors;
    for (const SubTri& s : level) {
      const HomPoly3 poly = discriminant_poly(tensor_at(s[0]), tensor_at(s[1]), tensor_at(s[2]));
      if (!poly.bernstein_positive()) survivors.push_back(s);
    }
    if (static_cast<int>(survivors.size()) > opt.budget) {
      out.budget_exhausted = true;
      const Bary c{1.0 / 3, 1.0 / 3, 1.0 / 3};
      out.points.push_back({point_at(c), c, Linearity::Linear, true});
      return out;
    }
    if (survivors.empty()) return out;
    if (d == opt.depth) {
      leaves = std::move(survivors);
      break;
    }
    level.clear();
    for (const SubTri& s : survivors) {
      const Bary m01 = mid(s[0], s[1]), m12 = mid(s[1], s[2]), m02 = mid(s[0], s[2]);
      level.push_back({s[0], m01, m02});
      level.push_back({m01, s[1], m12});
      level.push_back({m02, m12, s[2]});
      level.push_back({m01, m12, m02});
    }
  }

  HomPoly3 poly = discriminant_poly(t[0], t[1], t[2]);
  const double cmax = poly.max_abs_coefficient();
  if (cmax == 0.0) {
    out.budget_exhausted = true;
    const Bary c{1.0 / 3, 1.0 / 3, 1.0 / 3};
    out.points.push_back({point_at(c), c, Linearity::Linear, true});
    return out;
  }
  const FaceMinimizer minimizer(poly * (1.0 / cmax));
  for (const SubTri& s : leaves) {
    const double u = (s[0][0] + s[1][0] + s[2][0]) / 3, v = (s[0][1] + s[1][1] + s[2][1]) / 3;
    auto w = minimizer.run(u, v);
    if (!w) continue;
    if (std::min({(*w)[0], (*w)[1], (*w)[2]}) < -1e-7) continue;
    for (double& c : *w) c = std::max(c, 0.0);
    const double sum = (*w)[0] + (*w)[1] + (*w)[2];
    for (double& c : *w) c /= sum;
    const SymTensor3 tw = tensor_at(*w);
    const auto mu = mode(tw);
    const Vec3 p = point_at(*w);
    bool accept = false, unresolved = false;
    Linearity lin = Linearity::Linear;
    if (!mu) {
      unresolved = true;
    } else {
      lin = *mu > 0 ? Linearity::Linear : Linearity::Planar;
      accept = 1.0 - std::abs(*mu) <= opt.mode_tol && (!linearity || *linearity == lin);
    }
    if (!accept && !unresolved) continue;
    const bool dup = std::any_of(out.points.begin(), out.points.end(), [&](const FacePoint& q) {
      return q.linearity == lin && distance(q.position, p) <= opt.dedupe;
    });
    if (!dup) out.points.push_back({p, *w, lin, unresolved});
  }
  return out;
}

std::vector<FaceScan> scan_faces(const TensorMesh& mesh, const FaceScanOptions& opt) {
  const long long n = static_cast<long long>(mesh.faces().size());
  std::vector<FaceScan> out(mesh.faces().size());
#pragma omp parallel for schedule(dynamic, 256)
  for (long long i = 0; i < n; ++i) out[i] = face_degenerate_points(mesh, static_cast<int>(i), std::nullopt, opt);
  return out;
}

std::vector<FaceScan> scan_faces_serial(const TensorMesh& mesh, const FaceScanOptions& opt) {
  std::vector<FaceScan> out(mesh.faces().size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = face_degenerate_points(mesh, static_cast<int>(i), std::nullopt, opt);
  return out;
}

FaceScanOptions face_scan_options(const TensorMesh& mesh, const Config& cfg) {
  FaceScanOptions o;
  o.mode_tol = cfg.mode_tol;
  o.depth = cfg.face_subdiv_depth;
  o.dedupe = 1e-4 * mesh.cell_size();
  return o;
}

// ---------------------------------------------------------------------------
// Tracing

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

struct Node {
  Vec3 position;
  bool boundary = false;
};

struct Segment {
  int a, b;
  int tet;
  std::vector<Vec3> interior;  // samples strictly between a and b
};

// Local degenerate-set constraints (a, b) = 0 inside one tet.
class TetConstraint {
 public:
  TetConstraint(const TensorMesh& mesh, int tet, Linearity lin)
      : mesh_(mesh), tet_(tet), lin_(lin), grad_(mesh.tet_gradient(tet)) {}

  SymTensor3 tensor(const Vec3& p) const {
    BarycentricPoint b{tet_, barycentric(mesh_, tet_, p)};
    return interpolate(mesh_, b);
  }

  // Residual, constraint gradients and tangent at p.
  void eval(const Vec3& p, double r[2], Vec3 g[2], Vec3& tangent) const {
    const EigenSystem e = eigen_decompose(tensor(p));
    const Vec3 u = lin_ == Linearity::Linear ? e.vectors[0] : e.vectors[2];
    const Vec3 helper = std::abs(u.x) < 0.6 ? Vec3{1, 0, 0} : (std::abs(u.y) < 0.6 ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
    const Vec3 e1 = normalized(cross(u, helper));
    const Vec3 e2 = cross(u, e1);
    const SymTensor3 t = tensor(p);
    r[0] = 0.5 * (dot(e1, t.apply(e1)) - dot(e2, t.apply(e2)));
    r[1] = dot(e1, t.apply(e2));
    for (int a = 0; a < 3; ++a) {
      g[0][a] = 0.5 * (dot(e1, grad_[a].apply(e1)) - dot(e2, grad_[a].apply(e2)));
      g[1][a] = dot(e1, grad_[a].apply(e2));
    }
    tangent = cross(g[0], g[1]);
  }

  // Newton projection onto the degenerate set (minimum-norm steps).
  Vec3 project(Vec3 p) const {
    for (int it = 0; it < 8; ++it) {
      double r[2];
      Vec3 g[2], t;
      eval(p, r, g, t);
      const double m00 = dot(g[0], g[0]), m01 = dot(g[0], g[1]), m11 = dot(g[1], g[1]);
      const double det = m00 * m11 - m01 * m01;
      if (!(det > 0)) break;
      const double y0 = (m11 * r[0] - m01 * r[1]) / det;
      const double y1 = (m00 * r[1] - m01 * r[0]) / det;
      const Vec3 step = g[0] * y0 + g[1] * y1;
      p -= step;
      if (norm(step) < 1e-14 * mesh_.cell_size()) break;
    }
    return p;
  }

  double min_weight(const Vec3& p) const {
    const auto w = barycentric(mesh_, tet_, p);
    return std::min({w[0], w[1], w[2], w[3]});
  }

 private:
  const TensorMesh& mesh_;
  int tet_;
  Linearity lin_;
  std::array<SymTensor3, 3> grad_;
};

// Predictor-corrector path from a face point into the tet until it exits.
std::optional<std::vector<Vec3>> trace_in_tet(const TetConstraint& c, const Vec3& start, double h) {
  double r[2];
  Vec3 g[2], tangent;
  c.eval(start, r, g, tangent);
  if (norm(tangent) == 0) return std::nullopt;
  Vec3 dir = normalized(tangent);
  if (c.min_weight(start + dir * (0.1 * h)) < c.min_weight(start - dir * (0.1 * h))) dir = -dir;
  std::vector<Vec3> path{start};
  Vec3 p = start;
  for (int step = 0; step < 400; ++step) {
    Vec3 q = c.project(p + dir * h);
    if (c.min_weight(q) < 0) {
      // Exit: bisect on the chord for the boundary crossing.
      double lo = 0, hi = 1;
      for (int k = 0; k < 50; ++k) {
        const double m = 0.5 * (lo + hi);
        (c.min_weight(p + (q - p) * m) < 0 ? hi : lo) = m;
      }
      path.push_back(p + (q - p) * lo);
      return path;
    }
    c.eval(q, r, g, tangent);
    if (norm(tangent) == 0) return std::nullopt;
    Vec3 nd = normalized(tangent);
    if (dot(nd, dir) < 0) nd = -nd;
    dir = nd;
    path.push_back(q);
    p = q;
  }
  return std::nullopt;
}

}  // namespace

std::vector<DegenerateCurve> trace_from_scans(const TensorMesh& mesh, const std::vector<FaceScan>& scans,
                                              Linearity linearity, const Config& cfg, ExtractStats* stats) {
  const double tol = std::max(1e-4 * mesh.cell_size(), cfg.point_tol * mesh.bbox_diagonal());

  // Gather resolved face points.
  std::vector<Vec3> pts;
  std::vector<int> pt_face;
  for (std::size_t f = 0; f < scans.size(); ++f) {
    for (const FacePoint& p : scans[f].points) {
      if (p.unresolved || p.linearity != linearity) continue;
      pts.push_back(p.position);
      pt_face.push_back(static_cast<int>(f));
    }
  }

  // Merge points shared by several faces (curve through an edge or vertex).
  UnionFind uf(pts.size());
  std::vector<int> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return pts[a].x != pts[b].x ? pts[a].x < pts[b].x : a < b; });
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size() && pts[order[j]].x - pts[order[i]].x <= tol; ++j)
      if (distance(pts[order[i]], pts[order[j]]) <= tol) uf.unite(order[i], order[j]);

  std::vector<int> node_of(pts.size(), -1);
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const int root = uf.find(static_cast<int>(i));
    if (node_of[root] < 0) {
      node_of[root] = static_cast<int>(nodes.size());
      nodes.push_back({pts[root], false});
    }
    node_of[i] = node_of[root];
    if (mesh.faces()[pt_face[i]].boundary()) nodes[node_of[i]].boundary = true;
  }
  std::vector<std::vector<int>> face_nodes(mesh.faces().size());
  for (std::size_t i = 0; i < pts.size(); ++i) face_nodes[pt_face[i]].push_back(node_of[i]);

  // Pair the nodes of each tet.
  std::vector<Segment> segs;
  const double h = 0.1 * mesh.cell_size();
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    std::vector<int> ids;
    for (int k = 0; k < 4; ++k)
      for (int n : face_nodes[mesh.tet_face(static_cast<int>(t), k)]) ids.push_back(n);
    if (ids.empty()) continue;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.size() < 2) continue;
    if (ids.size() == 2) {
      segs.push_back({ids[0], ids[1], static_cast<int>(t), {}});
      continue;
    }
    const TetConstraint c(mesh, static_cast<int>(t), linearity);
    std::vector<bool> used(ids.size(), false);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (used[i]) continue;
      const Vec3 start = nodes[ids[i]].position;
      auto path = trace_in_tet(c, start, h);
      const Vec3 target = path ? path->back() : start;
      int best = -1;
      double best_d = 0;
      for (std::size_t j = 0; j < ids.size(); ++j) {
        if (j == i || used[j]) continue;
        const double d = distance(nodes[ids[j]].position, target);
        if (best < 0 || d < best_d) {
          best = static_cast<int>(j);
          best_d = d;
        }
      }
      if (best < 0) break;
      used[i] = used[best] = true;
      Segment s{ids[i], ids[best], static_cast<int>(t), {}};
      if (path && best_d <= 0.5 * mesh.cell_size() && path->size() > 2)
        s.interior.assign(path->begin() + 1, path->end() - 1);
      if (s.a > s.b) {
        std::swap(s.a, s.b);
        std::reverse(s.interior.begin(), s.interior.end());
      }
      segs.push_back(std::move(s));
    }
  }

  // A segment inside a shared face is found by both incident tets.
  std::stable_sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  });
  segs.erase(std::unique(segs.begin(), segs.end(),
                         [](const Segment& x, const Segment& y) { return x.a == y.a && x.b == y.b; }),
             segs.end());

  // Chain segments into curves.
  std::vector<std::vector<int>> incident(nodes.size());
  for (std::size_t s = 0; s < segs.size(); ++s) {
    incident[segs[s].a].push_back(static_cast<int>(s));
    incident[segs[s].b].push_back(static_cast<int>(s));
  }
  std::vector<bool> seg_used(segs.size(), false);
  std::vector<DegenerateCurve> curves;

  auto walk = [&](int start, int first_seg) {
    DegenerateCurve c;
    c.linearity = linearity;
    int node = start, seg = first_seg;
    c.samples.push_back(nodes[node].position);
    c.tets.push_back(segs[seg].tet);
    while (seg >= 0 && !seg_used[seg]) {
      seg_used[seg] = true;
      const Segment& s = segs[seg];
      const bool forward = s.a == node;
      std::vector<Vec3> interior = s.interior;
      if (!forward) std::reverse(interior.begin(), interior.end());
      for (const Vec3& p : interior) {
        c.samples.push_back(p);
        c.tets.push_back(s.tet);
      }
      node = forward ? s.b : s.a;
      c.samples.push_back(nodes[node].position);
      c.tets.push_back(s.tet);
      seg = -1;
      if (incident[node].size() == 2)
        for (int nxt : incident[node])
          if (!seg_used[nxt]) seg = nxt;
    }
    c.closed = node == start && incident[start].size() == 2;
    if (!c.closed) {
      auto dangling = [&](int n) { return incident[n].size() != 2 && !(incident[n].size() == 1 && nodes[n].boundary); };
      c.unresolved_start = dangling(start);
      c.unresolved_end = dangling(node);
    }
    c.classes.assign(c.samples.size(), PointClass::Unresolved);
    return c;
  };

  for (std::size_t n = 0; n < nodes.size(); ++n) {
    if (incident[n].size() == 2) continue;
    for (int s : incident[n])
      if (!seg_used[s]) curves.push_back(walk(static_cast<int>(n), s));
  }
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    if (incident[n].size() != 2) continue;
    const int s0 = incident[n][0], s1 = incident[n][1];
    if (seg_used[s0] || seg_used[s1]) continue;
    const int o0 = segs[s0].a == static_cast<int>(n) ? segs[s0].b : segs[s0].a;
    const int o1 = segs[s1].a == static_cast<int>(n) ? segs[s1].b : segs[s1].a;
    curves.push_back(walk(static_cast<int>(n), o0 <= o1 ? s0 : s1));
  }

  std::vector<DegenerateCurve> out;
  for (DegenerateCurve& c : curves) {
    if (stats) stats->unresolved_endpoints += int(c.unresolved_start) + int(c.unresolved_end);
    if (cfg.min_curve_length > 0 && c.length() < cfg.min_curve_length) continue;
    if (c.samples.size() < 2) continue;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<SymTensor3> perturb_degenerate_vertices(const TensorMesh& mesh, double rel, int* count) {
  constexpr double kNearDegenerate = 1e-6;  // normalized discriminant 1 - mode^2
  std::vector<SymTensor3> out = mesh.tensors();
  int n = 0;
  for (SymTensor3& t : out) {
    const auto mu = mode(t);
    if (!mu || 1.0 - (*mu) * (*mu) >= kNearDegenerate) continue;
    const EigenSystem e = eigen_decompose(t);
    const Vec3 u = *mu > 0 ? e.vectors[0] : e.vectors[2];
    const Vec3 helper = std::abs(u.x) < 0.6 ? Vec3{1, 0, 0} : (std::abs(u.y) < 0.6 ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
    const Vec3 e1 = normalized(cross(u, helper));
    const Vec3 e2 = cross(u, e1);
    const double s = rel * deviator(t).norm();
    t += SymTensor3::outer(e1, s) + SymTensor3::outer(e2, -s);
    ++n;
  }
  if (count) *count = n;
  return out;
}

std::vector<DegenerateCurve> trace_degenerate_curves(const TensorMesh& input, const Config& cfg, ExtractStats* stats) {
  constexpr double kVertexSplit = 1e-2;
  int perturbed = 0;
  const TensorMesh mesh = input.with_tensors(perturb_degenerate_vertices(input, kVertexSplit, &perturbed));
  if (stats) stats->perturbed_vertices += perturbed;
  const FaceScanOptions opt = face_scan_options(mesh, cfg);
  const std::vector<FaceScan> scans = scan_faces(mesh, opt);
  if (stats) {
    stats->faces_scanned += static_cast<int>(scans.size());
    for (const FaceScan& s : scans) stats->faces_exhausted += s.budget_exhausted;
  }
  std::vector<DegenerateCurve> out;
  for (Linearity lin : {Linearity::Linear, Linearity::Planar}) {
    auto curves = trace_from_scans(mesh, scans, lin, cfg, stats);
    for (auto& c : curves) out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Classification

Vec3 curve_tangent(const DegenerateCurve& c, std::size_t i) {
  const std::size_t n = c.samples.size();
  if (n < 2) throw Error("curve_tangent: curve has fewer than 2 samples");
  std::size_t prev = i, next = i;
  if (c.closed) {
    const std::size_t m = n - 1;  // distinct samples
    const std::size_t k = i % m;
    prev = (k + m - 1) % m;
    next = (k + 1) % m;
  } else {
    prev = i > 0 ? i - 1 : i;
    next = i + 1 < n ? i + 1 : i;
  }
  return normalized(c.samples[next] - c.samples[prev]);
}

namespace {

PointClass classify_at(const FieldSampler& field, Linearity lin, const Vec3& p, const Vec3& tangent, double radius,
                       const TransportOptions& opt) {
  const int expected = lin == Linearity::Linear ? 1 : 3;
  for (int attempt = 0; attempt <= 6; ++attempt, radius *= 0.5) {
    try {
      const WindingNumber w = transport_winding(field, transversal_circle(p, tangent, radius), opt);
      if (w.unit == expected) return w.sign > 0 ? PointClass::Wedge : PointClass::Trisector;
    } catch (const Error&) {
    }
  }
  return PointClass::Unresolved;
}

}  // namespace

PointClass classify_point(const FieldSampler& field, const DegenerateCurve& curve, std::size_t i, double radius,
                          const TransportOptions& opt) {
  return classify_at(field, curve.linearity, curve.samples[i], curve_tangent(curve, i), radius, opt);
}

void classify_curve(const FieldSampler& field, DegenerateCurve& curve, double radius, const TransportOptions& opt) {
  const long long n = static_cast<long long>(curve.samples.size());
  curve.classes.assign(curve.samples.size(), PointClass::Unresolved);
  const long long m = curve.closed ? n - 1 : n;
#pragma omp parallel for schedule(dynamic, 4)
  for (long long i = 0; i < m; ++i) curve.classes[i] = classify_point(field, curve, static_cast<std::size_t>(i), radius, opt);
  if (curve.closed && n > 1) curve.classes[n - 1] = curve.classes[0];
}

std::vector<double> find_transition_points(const FieldSampler& field, const TetLocator& locator,
                                           DegenerateCurve& curve, double radius, double tol,
                                           const TransportOptions& opt) {
  const std::size_t n = curve.samples.size();
  const std::size_t m = curve.closed ? n - 1 : n;
  std::vector<double> arc(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) arc[i] = arc[i - 1] + distance(curve.samples[i - 1], curve.samples[i]);
  const double total = arc[n - 1];

  // Point and chord direction at arc length s (wrapping for closed curves).
  auto at = [&](double s, Vec3& p, Vec3& dir, int& seg) {
    if (curve.closed) s = std::fmod(std::fmod(s, total) + total, total);
    s = std::clamp(s, 0.0, total);
    std::size_t k = std::upper_bound(arc.begin(), arc.end(), s) - arc.begin();
    k = std::clamp<std::size_t>(k, 1, n - 1);
    const double len = arc[k] - arc[k - 1];
    const double f = len > 0 ? (s - arc[k - 1]) / len : 0.0;
    p = curve.samples[k - 1] + (curve.samples[k] - curve.samples[k - 1]) * f;
    dir = normalized(curve.samples[k] - curve.samples[k - 1]);
    seg = static_cast<int>(k - 1);
  };

  std::vector<std::size_t> resolved;
  for (std::size_t i = 0; i < m; ++i)
    if (curve.classes[i] == PointClass::Wedge || curve.classes[i] == PointClass::Trisector) resolved.push_back(i);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t k = 0; k + 1 < resolved.size(); ++k) pairs.push_back({resolved[k], resolved[k + 1]});
  if (curve.closed && resolved.size() > 1) pairs.push_back({resolved.back(), resolved.front()});

  std::vector<double> positions;
  for (const auto& [i, j] : pairs) {
    if (curve.classes[i] == curve.classes[j]) continue;
    double lo = arc[i], hi = arc[j];
    if (hi <= lo) hi += total;
    const PointClass lo_class = curve.classes[i];
    while (hi - lo > tol) {
      const double s = 0.5 * (lo + hi);
      Vec3 p, dir;
      int seg;
      at(s, p, dir, seg);
      const PointClass c = classify_at(field, curve.linearity, p, dir, radius, opt);
      if (c == PointClass::Unresolved) break;
      (c == lo_class ? lo : hi) = s;
    }
    double s = 0.5 * (lo + hi);
    if (curve.closed) s = std::fmod(s, total);
    positions.push_back(s);
  }
  std::sort(positions.begin(), positions.end());

  // Insert Transition samples, back to front so indices stay valid.
  for (auto it = positions.rbegin(); it != positions.rend(); ++it) {
    Vec3 p, dir;
    int seg;
    at(*it, p, dir, seg);
    const auto loc = locator.locate(p);
    const int tet = loc ? loc->tet : curve.tets[seg];
    const std::size_t pos = static_cast<std::size_t>(seg) + 1;
    curve.samples.insert(curve.samples.begin() + pos, p);
    curve.tets.insert(curve.tets.begin() + pos, tet);
    curve.classes.insert(curve.classes.begin() + pos, PointClass::Transition);
  }
  return positions;
}

}  // namespace tensortopo
