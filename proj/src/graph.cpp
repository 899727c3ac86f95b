#include "tensortopo/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

namespace tensortopo {

using ojson = nlohmann::ordered_json;

std::string to_string(NodeKind k) { return k == NodeKind::Region ? "region" : "curve"; }

std::string to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::Adjacency: return "adjacency";
    case EdgeKind::Containment: return "containment";
    case EdgeKind::Membership: return "membership";
    case EdgeKind::Link: return "link";
  }
  return "?";
}

std::vector<ClassFraction> class_fractions(const DegenerateCurve& c) {
  static const std::array<PointClass, 4> order{PointClass::Wedge, PointClass::Trisector, PointClass::Transition,
                                               PointClass::Unresolved};
  std::array<double, 4> len{};
  auto slot = [](PointClass k) { return static_cast<std::size_t>(std::find(order.begin(), order.end(), k) - order.begin()); };
  double total = 0;
  for (std::size_t i = 0; i + 1 < c.samples.size(); ++i) {
    const double l = distance(c.samples[i], c.samples[i + 1]);
    total += l;
    if (c.classes.size() != c.samples.size()) {
      len[3] += l;
      continue;
    }
    len[slot(c.classes[i])] += 0.5 * l;
    len[slot(c.classes[i + 1])] += 0.5 * l;
  }
  std::vector<ClassFraction> out;
  if (total <= 0) return out;
  for (std::size_t k = 0; k < 4; ++k)
    if (len[k] > 0) out.push_back({to_string(order[k]), len[k] / total});
  return out;
}

TopoGraph build_graph(const std::vector<Region>& regions, const std::vector<RegionRelation>& relations,
                      const std::vector<CurveRecord>& curves, const std::vector<std::vector<double>>& linking,
                      double link_round_guard) {
  TopoGraph g;
  const int nr = static_cast<int>(regions.size());
  for (const Region& r : regions) {
    if (r.id < 0 || r.id >= nr) throw Error("build_graph: region id out of range");
    GraphNode n;
    n.id = r.id;
    n.kind = NodeKind::Region;
    n.linearity = r.linearity;
    n.betti = std::array<int, 2>{r.beta1, r.beta2};
    n.volume = r.volume;
    n.geometry = "regions/" + std::to_string(r.id) + ".obj";
    g.nodes.push_back(std::move(n));
  }
  std::sort(g.nodes.begin(), g.nodes.end(), [](const GraphNode& a, const GraphNode& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < curves.size(); ++i) {
    GraphNode n;
    n.id = nr + static_cast<int>(i);
    n.kind = NodeKind::Curve;
    n.linearity = curves[i].linearity;
    n.curve = curves[i].summary;
    n.geometry = "curves/" + std::to_string(n.id) + ".json";
    g.nodes.push_back(std::move(n));
  }
  for (const RegionRelation& rel : relations) {
    if (rel.a < 0 || rel.a >= nr || rel.b < 0 || rel.b >= nr) throw Error("build_graph: relation references a missing region");
    GraphEdge e;
    e.a = rel.a;
    e.b = rel.b;
    if (rel.kind == RegionRelation::Kind::Adjacent) {
      e.kind = EdgeKind::Adjacency;
    } else {
      e.kind = EdgeKind::Containment;
      e.contained = rel.b;
    }
    g.edges.push_back(e);
  }
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const int r = curves[i].region;
    if (r < 0 || r >= nr) throw Error("build_graph: curve " + std::to_string(i) + " has no container region");
    g.edges.push_back({EdgeKind::Membership, nr + static_cast<int>(i), r, std::nullopt, std::nullopt});
  }
  if (linking.size() != curves.size()) throw Error("build_graph: linking matrix size mismatch");
  for (std::size_t i = 0; i < curves.size(); ++i)
    for (std::size_t j = i + 1; j < curves.size(); ++j) {
      const double l = linking[i][j];
      const bool both_closed = curves[i].polyline.closed && curves[j].polyline.closed;
      if (!is_linked(l, both_closed, link_round_guard)) continue;
      g.edges.push_back({EdgeKind::Link, nr + static_cast<int>(i), nr + static_cast<int>(j),
                         both_closed ? std::round(l) : l, std::nullopt});
    }
  return g;
}

void layout(TopoGraph& g) {
  std::map<int, std::size_t> at;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) at[g.nodes[i].id] = i;
  std::map<int, double> link_sum;
  std::map<int, int> container;
  for (const GraphEdge& e : g.edges) {
    if (e.kind == EdgeKind::Link) {
      link_sum[e.a] += std::abs(e.linking.value_or(0));
      link_sum[e.b] += std::abs(e.linking.value_or(0));
    } else if (e.kind == EdgeKind::Membership) {
      container[e.a] = e.b;
    }
  }
  auto region_rank = [](const GraphNode& n) {
    return std::make_pair(n.betti ? (*n.betti)[0] + (*n.betti)[1] : 0, n.volume.value_or(0));
  };
  std::map<int, int> region_col;
  for (Linearity lin : {Linearity::Planar, Linearity::Linear}) {
    std::vector<GraphNode*> row;
    for (GraphNode& n : g.nodes)
      if (n.kind == NodeKind::Region && n.linearity == lin) row.push_back(&n);
    std::sort(row.begin(), row.end(), [&](const GraphNode* a, const GraphNode* b) {
      const auto ra = region_rank(*a), rb = region_rank(*b);
      if (ra != rb) return lin == Linearity::Linear ? ra < rb : ra > rb;
      return a->id < b->id;
    });
    for (std::size_t c = 0; c < row.size(); ++c) {
      row[c]->row = lin == Linearity::Planar ? 1 : 2;
      row[c]->col = static_cast<int>(c);
      region_col[row[c]->id] = static_cast<int>(c);
    }
  }
  for (Linearity lin : {Linearity::Planar, Linearity::Linear}) {
    std::vector<GraphNode*> row;
    for (GraphNode& n : g.nodes)
      if (n.kind == NodeKind::Curve && n.linearity == lin) row.push_back(&n);
    auto key = [&](const GraphNode* n) {
      const auto it = container.find(n->id);
      const int col = it == container.end() ? -1 : region_col[it->second];
      const double w = n->curve && n->curve->writhe ? std::abs(*n->curve->writhe) : 0.0;
      const double len = n->curve ? n->curve->length : 0.0;
      return std::make_tuple(col, w, link_sum[n->id], len);
    };
    std::sort(row.begin(), row.end(), [&](const GraphNode* a, const GraphNode* b) {
      const auto ka = key(a), kb = key(b);
      if (std::get<0>(ka) != std::get<0>(kb)) return std::get<0>(ka) < std::get<0>(kb);
      const auto ta = std::make_tuple(std::get<1>(ka), std::get<2>(ka), std::get<3>(ka));
      const auto tb = std::make_tuple(std::get<1>(kb), std::get<2>(kb), std::get<3>(kb));
      if (ta != tb) return ta > tb;
      return a->id < b->id;
    });
    for (std::size_t c = 0; c < row.size(); ++c) {
      row[c]->row = lin == Linearity::Planar ? 0 : 3;
      row[c]->col = static_cast<int>(c);
    }
  }
}

std::vector<std::string> check_graph(const TopoGraph& g) {
  std::vector<std::string> errors;
  std::map<int, const GraphNode*> by_id;
  for (const GraphNode& n : g.nodes)
    if (!by_id.emplace(n.id, &n).second) errors.push_back("duplicate node id " + std::to_string(n.id));
  std::map<int, int> membership;
  for (const GraphEdge& e : g.edges) {
    const auto a = by_id.find(e.a), b = by_id.find(e.b);
    if (a == by_id.end() || b == by_id.end()) {
      errors.push_back("edge references a missing node");
      continue;
    }
    const GraphNode &na = *a->second, &nb = *b->second;
    switch (e.kind) {
      case EdgeKind::Adjacency:
        if (na.kind != NodeKind::Region || nb.kind != NodeKind::Region || na.linearity == nb.linearity)
          errors.push_back("adjacency edge " + std::to_string(e.a) + "-" + std::to_string(e.b) + " is not between opposite regions");
        break;
      case EdgeKind::Containment:
        if (na.kind != NodeKind::Region || nb.kind != NodeKind::Region || e.contained != e.b)
          errors.push_back("malformed containment edge");
        break;
      case EdgeKind::Membership:
        if (na.kind != NodeKind::Curve || nb.kind != NodeKind::Region || na.linearity != nb.linearity)
          errors.push_back("membership edge " + std::to_string(e.a) + " has wrong endpoints");
        ++membership[e.a];
        break;
      case EdgeKind::Link:
        if (na.kind != NodeKind::Curve || nb.kind != NodeKind::Curve || !e.linking || *e.linking == 0)
          errors.push_back("malformed link edge");
        break;
    }
  }
  for (const GraphNode& n : g.nodes) {
    if (n.kind == NodeKind::Curve && membership[n.id] != 1)
      errors.push_back("curve node " + std::to_string(n.id) + " has " + std::to_string(membership[n.id]) + " membership edges");
    const int want = n.kind == NodeKind::Region ? (n.linearity == Linearity::Planar ? 1 : 2)
                                                : (n.linearity == Linearity::Planar ? 0 : 3);
    if (n.row != want) errors.push_back("node " + std::to_string(n.id) + " is on row " + std::to_string(n.row));
  }
  return errors;
}

namespace {

template <class T>
ojson opt(const std::optional<T>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

[[noreturn]] void bad(const std::string& what) { throw ParseError("graph.json: " + what, 0); }

const ojson& field(const ojson& o, const char* key) {
  if (!o.is_object() || !o.contains(key)) bad(std::string("missing key '") + key + "'");
  return o.at(key);
}

int get_int(const ojson& o, const char* key) {
  const ojson& v = field(o, key);
  if (!v.is_number_integer()) bad(std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

double get_number(const ojson& v, const char* key) {
  if (!v.is_number()) bad(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::string get_string(const ojson& o, const char* key) {
  const ojson& v = field(o, key);
  if (!v.is_string()) bad(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

Linearity parse_linearity(const std::string& s) {
  if (s == "linear") return Linearity::Linear;
  if (s == "planar") return Linearity::Planar;
  bad("unknown linearity '" + s + "'");
}

ojson polyline_json(const Polyline3& p) {
  ojson pts = ojson::array();
  for (const Vec3& v : p.points) pts.push_back({v.x, v.y, v.z});
  ojson o;
  o["points"] = pts;
  o["closed"] = p.closed;
  return o;
}

Polyline3 polyline_from(const ojson& o) {
  Polyline3 p;
  if (!o.is_object() || !o.contains("points") || !o.at("points").is_array())
    throw ParseError("curve file: expected {\"points\": [...], \"closed\": bool}", 0);
  for (const ojson& q : o.at("points")) {
    if (!q.is_array() || q.size() != 3 || !q[0].is_number() || !q[1].is_number() || !q[2].is_number())
      throw ParseError("curve file: points must be [x, y, z]", 0);
    p.points.push_back({q[0].get<double>(), q[1].get<double>(), q[2].get<double>()});
  }
  if (o.contains("closed")) {
    if (!o.at("closed").is_boolean()) throw ParseError("curve file: 'closed' must be a boolean", 0);
    p.closed = o.at("closed").get<bool>();
  }
  return p;
}

}  // namespace

std::string graph_to_json(const TopoGraph& g) {
  ojson root;
  root["version"] = "1";
  ojson nodes = ojson::array();
  for (const GraphNode& n : g.nodes) {
    ojson o;
    o["id"] = n.id;
    o["kind"] = to_string(n.kind);
    o["row"] = n.row;
    o["col"] = n.col;
    o["linearity"] = to_string(n.linearity);
    o["betti"] = n.betti ? ojson::array({(*n.betti)[0], (*n.betti)[1]}) : ojson(nullptr);
    o["volume"] = opt(n.volume);
    if (n.curve) {
      const CurveSummary& c = *n.curve;
      ojson co;
      co["closed"] = c.closed;
      co["writhe"] = opt(c.writhe);
      co["jones"] = opt(c.jones);
      co["knotted"] = opt(c.knotted);
      co["index"] = opt(c.index);
      ojson segs = ojson::array();
      for (const ClassFraction& f : c.segments) segs.push_back({{"class", f.cls}, {"fraction", f.fraction}});
      co["segments"] = segs;
      co["length"] = c.length;
      o["curve"] = co;
    } else {
      o["curve"] = nullptr;
    }
    o["geometry"] = n.geometry;
    nodes.push_back(o);
  }
  ojson edges = ojson::array();
  for (const GraphEdge& e : g.edges) {
    ojson o;
    o["kind"] = to_string(e.kind);
    o["a"] = e.a;
    o["b"] = e.b;
    o["linking"] = opt(e.linking);
    o["containedNode"] = opt(e.contained);
    edges.push_back(o);
  }
  root["nodes"] = nodes;
  root["edges"] = edges;
  return root.dump(2) + "\n";
}

TopoGraph graph_from_json(const std::string& text) {
  ojson root;
  try {
    root = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad(e.what());
  }
  if (get_string(root, "version") != "1") bad("unsupported version");
  const ojson& nodes = field(root, "nodes");
  const ojson& edges = field(root, "edges");
  if (!nodes.is_array() || !edges.is_array()) bad("'nodes' and 'edges' must be arrays");
  TopoGraph g;
  for (const ojson& o : nodes) {
    GraphNode n;
    n.id = get_int(o, "id");
    const std::string kind = get_string(o, "kind");
    if (kind == "region")
      n.kind = NodeKind::Region;
    else if (kind == "curve")
      n.kind = NodeKind::Curve;
    else
      bad("unknown node kind '" + kind + "'");
    n.row = get_int(o, "row");
    n.col = get_int(o, "col");
    n.linearity = parse_linearity(get_string(o, "linearity"));
    const ojson& betti = field(o, "betti");
    if (!betti.is_null()) {
      if (!betti.is_array() || betti.size() != 2 || !betti[0].is_number_integer() || !betti[1].is_number_integer())
        bad("'betti' must be [b1, b2] or null");
      n.betti = std::array<int, 2>{betti[0].get<int>(), betti[1].get<int>()};
    }
    const ojson& vol = field(o, "volume");
    if (!vol.is_null()) n.volume = get_number(vol, "volume");
    const ojson& c = field(o, "curve");
    if (!c.is_null()) {
      CurveSummary s;
      const ojson& closed = field(c, "closed");
      if (!closed.is_boolean()) bad("'closed' must be a boolean");
      s.closed = closed.get<bool>();
      if (const ojson& w = field(c, "writhe"); !w.is_null()) s.writhe = get_number(w, "writhe");
      if (const ojson& j = field(c, "jones"); !j.is_null()) s.jones = get_string(c, "jones");
      if (const ojson& k = field(c, "knotted"); !k.is_null()) {
        if (!k.is_boolean()) bad("'knotted' must be a boolean or null");
        s.knotted = k.get<bool>();
      }
      if (const ojson& i = field(c, "index"); !i.is_null()) s.index = get_string(c, "index");
      const ojson& segs = field(c, "segments");
      if (!segs.is_array()) bad("'segments' must be an array");
      for (const ojson& f : segs) s.segments.push_back({get_string(f, "class"), get_number(field(f, "fraction"), "fraction")});
      s.length = get_number(field(c, "length"), "length");
      n.curve = s;
    }
    n.geometry = get_string(o, "geometry");
    g.nodes.push_back(std::move(n));
  }
  for (const ojson& o : edges) {
    GraphEdge e;
    const std::string kind = get_string(o, "kind");
    if (kind == "adjacency")
      e.kind = EdgeKind::Adjacency;
    else if (kind == "containment")
      e.kind = EdgeKind::Containment;
    else if (kind == "membership")
      e.kind = EdgeKind::Membership;
    else if (kind == "link")
      e.kind = EdgeKind::Link;
    else
      bad("unknown edge kind '" + kind + "'");
    e.a = get_int(o, "a");
    e.b = get_int(o, "b");
    const int nn = static_cast<int>(g.nodes.size());
    if (e.a < 0 || e.a >= nn || e.b < 0 || e.b >= nn) bad("edge endpoint out of range");
    if (const ojson& l = field(o, "linking"); !l.is_null()) e.linking = get_number(l, "linking");
    if (const ojson& c = field(o, "containedNode"); !c.is_null()) e.contained = get_int(o, "containedNode");
    g.edges.push_back(e);
  }
  return g;
}

std::string polylines_to_json(const std::vector<Polyline3>& curves) {
  ojson arr = ojson::array();
  for (const Polyline3& p : curves) arr.push_back(polyline_json(p));
  return arr.dump(2) + "\n";
}

std::vector<Polyline3> polylines_from_json(const std::string& text) {
  ojson root;
  try {
    root = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("curve file: ") + e.what(), 0);
  }
  std::vector<Polyline3> out;
  if (root.is_object()) root = ojson::array({root});
  if (!root.is_array()) throw ParseError("curve file: expected a list of curves", 0);
  for (const ojson& o : root) out.push_back(polyline_from(o));
  return out;
}

void serialize(const TopoGraph& g, const std::vector<Region>& regions, const std::vector<CurveRecord>& curves,
               const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir / "curves");
  fs::create_directories(out_dir / "regions");
  auto write = [](const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) throw Error("cannot write " + p.string());
  };
  write(out_dir / "graph.json", graph_to_json(g));
  for (const Region& r : regions)
    write_obj(out_dir / "regions" / (std::to_string(r.id) + ".obj"), r.boundary.vertices, r.boundary.triangles);
  const int nr = static_cast<int>(regions.size());
  for (std::size_t i = 0; i < curves.size(); ++i)
    write(out_dir / "curves" / (std::to_string(nr + static_cast<int>(i)) + ".json"), polyline_json(curves[i].polyline).dump(2) + "\n");
}

}  // namespace tensortopo
