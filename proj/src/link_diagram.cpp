#include "tensortopo/link_diagram.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>

namespace tensortopo {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
Vec2 sub(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
double len2(const Vec2& a) { return std::hypot(a.x, a.y); }

Vec3 rotate(const Vec3& v, const Vec3& axis, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return v * c + cross(axis, v) * s + axis * (dot(axis, v) * (1.0 - c));
}

struct Projected {
  std::vector<std::vector<Vec2>> xy;
  std::vector<std::vector<double>> depth;
};

// Crossings of one projection, or nullopt if it is not regular.
std::optional<std::vector<Crossing>> find_crossings(const Projected& p, double tol) {
  struct Seg {
    int strand, index;
    Vec2 a, b;
    double za, zb;
  };
  std::vector<Seg> segs;
  for (std::size_t s = 0; s < p.xy.size(); ++s) {
    const std::size_t n = p.xy[s].size();
    for (std::size_t i = 0; i < n; ++i)
      segs.push_back({int(s), int(i), p.xy[s][i], p.xy[s][(i + 1) % n], p.depth[s][i], p.depth[s][(i + 1) % n]});
  }
  std::vector<Crossing> out;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Seg& u = segs[i];
    const Vec2 du = sub(u.b, u.a);
    const double lu = len2(du);
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      const Seg& v = segs[j];
      const Vec2 dv = sub(v.b, v.a);
      const double lv = len2(dv);
      // Quick reject on bounding boxes.
      if (std::max(u.a.x, u.b.x) + tol < std::min(v.a.x, v.b.x) || std::max(v.a.x, v.b.x) + tol < std::min(u.a.x, u.b.x) ||
          std::max(u.a.y, u.b.y) + tol < std::min(v.a.y, v.b.y) || std::max(v.a.y, v.b.y) + tol < std::min(u.a.y, u.b.y))
        continue;
      const std::size_t n = p.xy[u.strand].size();
      const bool adjacent = u.strand == v.strand &&
                            (std::abs(u.index - v.index) == 1 || std::abs(u.index - v.index) == int(n) - 1);
      const double den = cross2(du, dv);
      if (adjacent) {
        // Only a fold back onto the previous segment is irregular.
        if (std::abs(den) <= 1e-12 * lu * lv && du.x * dv.x + du.y * dv.y < 0) return std::nullopt;
        continue;
      }
      const Vec2 w = sub(v.a, u.a);
      if (std::abs(den) <= 1e-12 * lu * lv) {
        if (std::abs(cross2(w, du)) <= tol * lu) return std::nullopt;  // collinear overlap candidate
        continue;
      }
      const double s = cross2(w, dv) / den;
      const double t = cross2(w, du) / den;
      const double eu = tol / lu, ev = tol / lv;
      if (s < -eu || s > 1 + eu || t < -ev || t > 1 + ev) continue;
      if (s < eu || s > 1 - eu || t < ev || t > 1 - ev) return std::nullopt;  // endpoint on a crossing
      const double zu = u.za + (u.zb - u.za) * s, zv = v.za + (v.zb - v.za) * t;
      if (std::abs(zu - zv) <= tol) return std::nullopt;
      const bool u_over = zu > zv;
      Crossing c;
      c.over = u_over ? Passage{u.strand, u.index, s} : Passage{v.strand, v.index, t};
      c.under = u_over ? Passage{v.strand, v.index, t} : Passage{u.strand, u.index, s};
      const Vec2 o = u_over ? du : dv, un = u_over ? dv : du;
      c.sign = cross2(o, un) > 0 ? 1 : -1;
      c.position = {u.a.x + du.x * s, u.a.y + du.y * s};
      out.push_back(c);
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (len2(sub(out[i].position, out[j].position)) <= tol) return std::nullopt;
  return out;
}

}  // namespace

int LinkDiagram::writhe() const {
  int w = 0;
  for (const Crossing& c : crossings) w += c.sign;
  return w;
}

std::vector<std::vector<int>> LinkDiagram::strand_sequences() const {
  std::vector<std::vector<std::pair<std::pair<int, double>, int>>> ev(strands.size());
  for (std::size_t k = 0; k < crossings.size(); ++k) {
    const Crossing& c = crossings[k];
    ev[c.over.strand].push_back({{c.over.segment, c.over.param}, int(k)});
    ev[c.under.strand].push_back({{c.under.segment, c.under.param}, int(k)});
  }
  std::vector<std::vector<int>> seq(strands.size());
  for (std::size_t s = 0; s < strands.size(); ++s) {
    std::sort(ev[s].begin(), ev[s].end());
    for (const auto& e : ev[s]) seq[s].push_back(e.second);
  }
  return seq;
}

LinkDiagram project_to_diagram(const std::vector<Polyline3>& curves, std::uint64_t seed) {
  if (curves.empty()) return {};
  Vec3 centroid;
  std::size_t count = 0;
  for (const Polyline3& c : curves) {
    if (!c.closed) throw ConfigError("project_to_diagram: curves must be closed");
    c.validate();
    for (const Vec3& p : c.points) centroid += p;
    count += c.points.size();
  }
  centroid = centroid / static_cast<double>(count);
  SymTensor3 cov;
  double extent = 0;
  for (const Polyline3& c : curves)
    for (const Vec3& p : c.points) {
      const Vec3 d = p - centroid;
      cov += SymTensor3::outer(d);
      extent = std::max(extent, norm(d));
    }
  const EigenSystem pca = eigen_decompose(cov);
  const double tol = 1e-9 * std::max(extent, 1e-300);

  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::array<Vec3, 3> frame = pca.vectors;
    if (attempt > 0) {
      Vec3 axis;
      do axis = {2 * uniform() - 1, 2 * uniform() - 1, 2 * uniform() - 1};
      while (norm(axis) < 0.1 || norm(axis) > 1.0);
      axis = normalized(axis);
      const double angle = (1.0 - uniform()) * 2.0 * M_PI / 180.0;
      for (Vec3& e : frame) e = rotate(e, axis, angle);
    }
    Projected p;
    LinkDiagram d;
    for (const Polyline3& c : curves) {
      std::vector<Vec2> xy;
      std::vector<double> z;
      for (const Vec3& q : c.points) {
        const Vec3 r = q - centroid;
        xy.push_back({dot(r, frame[0]), dot(r, frame[1])});
        z.push_back(dot(r, frame[2]));
      }
      p.xy.push_back(xy);
      p.depth.push_back(std::move(z));
      d.strands.push_back(std::move(xy));
    }
    auto crossings = find_crossings(p, tol);
    if (!crossings) continue;
    d.crossings = std::move(*crossings);
    return d;
  }
  throw TopologyError("project_to_diagram: no regular projection after 64 attempts");
}

LinkDiagram simplify_diagram(LinkDiagram d) {
  for (;;) {
    const auto seq = d.strand_sequences();
    std::set<int> remove;
    // Reidemeister I: a crossing met twice in a row along a strand.
    for (const auto& s : seq) {
      for (std::size_t i = 0; i < s.size() && remove.empty(); ++i)
        if (s.size() > 1 && s[i] == s[(i + 1) % s.size()]) remove.insert(s[i]);
      if (!remove.empty()) break;
    }
    if (remove.empty()) {
      // Reidemeister II: two crossings adjacent along one strand where it is
      // over at both, and adjacent along another stretch where it is under at both.
      std::map<std::pair<int, int>, std::array<bool, 2>> adj;  // {over-over seen, under-under seen}
      for (std::size_t si = 0; si < seq.size(); ++si) {
        const auto& s = seq[si];
        if (s.size() < 2) continue;
        for (std::size_t i = 0; i < s.size(); ++i) {
          const int a = s[i], b = s[(i + 1) % s.size()];
          if (a == b) continue;
          auto on_over = [&](int k, std::size_t pos) {
            // Which passage of crossing k sits at this position: match by strand order.
            const Crossing& c = d.crossings[k];
            if (c.over.strand != c.under.strand) return c.over.strand == int(si);
            // Same strand: the earlier passage in sorted order is the first occurrence.
            const auto key = [](const Passage& p) { return std::make_pair(p.segment, p.param); };
            const bool over_first = key(c.over) < key(c.under);
            std::size_t first = 0;
            while (s[first] != k) ++first;
            return (pos == first) == over_first;
          };
          const bool oa = on_over(a, i), ob = on_over(b, (i + 1) % s.size());
          if (oa != ob) continue;
          auto& e = adj[{std::min(a, b), std::max(a, b)}];
          e[oa ? 0 : 1] = true;
          if (e[0] && e[1]) {
            remove = {a, b};
            break;
          }
        }
        if (!remove.empty()) break;
      }
    }
    if (remove.empty()) return d;
    std::vector<Crossing> kept;
    for (std::size_t k = 0; k < d.crossings.size(); ++k)
      if (!remove.count(int(k))) kept.push_back(d.crossings[k]);
    d.crossings = std::move(kept);
  }
}

PdCode pd_code(const LinkDiagram& d) {
  PdCode pd;
  struct Ends {
    int under_in = -1, under_out = -1, over_in = -1, over_out = -1;
  };
  std::vector<Ends> ends(d.crossings.size());
  int offset = 0;
  std::vector<std::vector<std::pair<std::pair<int, double>, std::pair<int, bool>>>> ev(d.strands.size());
  for (std::size_t k = 0; k < d.crossings.size(); ++k) {
    const Crossing& c = d.crossings[k];
    ev[c.over.strand].push_back({{c.over.segment, c.over.param}, {int(k), true}});
    ev[c.under.strand].push_back({{c.under.segment, c.under.param}, {int(k), false}});
  }
  for (auto& e : ev) {
    if (e.empty()) {
      ++pd.free_loops;
      continue;
    }
    std::sort(e.begin(), e.end());
    const int n = static_cast<int>(e.size());
    for (int j = 0; j < n; ++j) {
      const int in = offset + (j + n - 1) % n, out = offset + j;
      const auto [k, over] = e[j].second;
      if (over) {
        ends[k].over_in = in;
        ends[k].over_out = out;
      } else {
        ends[k].under_in = in;
        ends[k].under_out = out;
      }
    }
    offset += n;
  }
  for (std::size_t k = 0; k < d.crossings.size(); ++k) {
    const Ends& e = ends[k];
    if (d.crossings[k].sign > 0)
      pd.crossings.push_back({e.under_in, e.over_out, e.under_out, e.over_in});
    else
      pd.crossings.push_back({e.under_in, e.over_in, e.under_out, e.over_out});
  }
  return pd;
}

}  // namespace tensortopo
