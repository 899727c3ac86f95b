#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "schema.hpp"
#include "tensortopo/graph.hpp"

using namespace tensortopo;
using namespace tensortopo::testing;
using nlohmann::ordered_json;

namespace {

Region region(int id, Linearity lin, double volume, int b1 = 0, int b2 = 0) {
  Region r;
  r.id = id;
  r.linearity = lin;
  r.volume = volume;
  r.beta1 = b1;
  r.beta2 = b2;
  return r;
}

CurveRecord curve(Linearity lin, int region, Polyline3 p, double writhe = 0) {
  CurveRecord c;
  c.linearity = lin;
  c.region = region;
  c.polyline = std::move(p);
  c.summary.closed = c.polyline.closed;
  c.summary.length = c.polyline.length();
  if (c.polyline.closed) c.summary.writhe = writhe;
  c.summary.segments = {{"wedge", 0.75}, {"trisector", 0.25}};
  return c;
}

std::vector<std::vector<double>> zeros(std::size_t n) { return std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)); }

std::vector<std::string> schema_errors(const TopoGraph& g) { return check_graph_schema(ordered_json::parse(graph_to_json(g))); }

std::map<int, std::pair<int, int>> positions(const TopoGraph& g) {
  std::map<int, std::pair<int, int>> p;
  for (const GraphNode& n : g.nodes) p[n.id] = {n.row, n.col};
  return p;
}

// Pocket: planar solid torus inside a linear box, one linear curve in the
// box, one planar curve in the torus, and a pair of Hopf circles.
struct Fixture {
  std::vector<Region> regions;
  std::vector<RegionRelation> relations;
  std::vector<CurveRecord> curves;
  std::vector<std::vector<double>> linking;
};

Fixture pocket() {
  Fixture f;
  f.regions = {region(0, Linearity::Linear, 60, 1, 1), region(1, Linearity::Planar, 4, 1, 0)};
  f.relations = {{RegionRelation::Kind::Adjacent, 0, 1, {0}}, {RegionRelation::Kind::Contains, 0, 1, {0}}};
  const auto [a, b] = hopf_circles(64);
  f.curves = {curve(Linearity::Linear, 0, a, -0.1), curve(Linearity::Planar, 1, b, 0.2)};
  f.curves[0].summary.jones = "1";
  f.curves[0].summary.knotted = false;
  f.curves[0].summary.index = "+1";
  f.linking = zeros(2);
  f.linking[0][1] = f.linking[1][0] = -0.9996;
  return f;
}

}  // namespace

TEST(BuildGraph, EmptyAndSingleRegion) {
  TopoGraph empty = build_graph({}, {}, {}, {});
  layout(empty);
  const ordered_json j = ordered_json::parse(graph_to_json(empty));
  EXPECT_EQ(j["nodes"], ordered_json::array());
  EXPECT_EQ(j["edges"], ordered_json::array());
  EXPECT_TRUE(check_graph_schema(j).empty());

  TopoGraph one = build_graph({region(0, Linearity::Linear, 8)}, {}, {}, {});
  layout(one);
  EXPECT_EQ(one.nodes.size(), 1u);
  EXPECT_TRUE(one.edges.empty());
  EXPECT_TRUE(schema_errors(one).empty());
}

TEST(BuildGraph, PocketWithLinkedCurves) {
  const Fixture f = pocket();
  TopoGraph g = build_graph(f.regions, f.relations, f.curves, f.linking);
  layout(g);
  ASSERT_EQ(g.nodes.size(), 4u);
  std::map<EdgeKind, int> count;
  for (const GraphEdge& e : g.edges) ++count[e.kind];
  EXPECT_EQ(count[EdgeKind::Adjacency], 1);
  EXPECT_EQ(count[EdgeKind::Containment], 1);
  EXPECT_EQ(count[EdgeKind::Membership], 2);
  EXPECT_EQ(count[EdgeKind::Link], 1);
  for (const GraphEdge& e : g.edges) {
    if (e.kind == EdgeKind::Link) EXPECT_EQ(e.linking, -1.0);
    if (e.kind == EdgeKind::Containment) EXPECT_EQ(e.contained, 1);
  }
  EXPECT_TRUE(check_graph(g).empty());
  const auto errs = schema_errors(g);
  EXPECT_TRUE(errs.empty()) << errs.front();
  EXPECT_EQ(g.nodes[2].row, 3);
  EXPECT_EQ(g.nodes[3].row, 0);
}

TEST(BuildGraph, OpenPairsKeepRawLinking) {
  Fixture f = pocket();
  f.curves[1].polyline.closed = false;
  f.curves[1].summary.closed = false;
  f.curves[1].summary.writhe.reset();
  f.linking[0][1] = f.linking[1][0] = 0.93;
  const TopoGraph g = build_graph(f.regions, f.relations, f.curves, f.linking);
  const auto link = std::find_if(g.edges.begin(), g.edges.end(), [](const GraphEdge& e) { return e.kind == EdgeKind::Link; });
  ASSERT_NE(link, g.edges.end());
  EXPECT_EQ(link->linking, 0.93);
  f.linking[0][1] = f.linking[1][0] = 0.5;
  const TopoGraph h = build_graph(f.regions, f.relations, f.curves, f.linking);
  EXPECT_TRUE(std::none_of(h.edges.begin(), h.edges.end(), [](const GraphEdge& e) { return e.kind == EdgeKind::Link; }));
}

TEST(BuildGraph, DanglingReferencesAreErrors) {
  Fixture f = pocket();
  f.curves[0].region = 7;
  EXPECT_THROW(build_graph(f.regions, f.relations, f.curves, f.linking), Error);
  f = pocket();
  f.relations.push_back({RegionRelation::Kind::Adjacent, 0, 5, {}});
  EXPECT_THROW(build_graph(f.regions, f.relations, f.curves, f.linking), Error);
  f = pocket();
  EXPECT_THROW(build_graph(f.regions, f.relations, f.curves, zeros(3)), Error);
}

TEST(CheckGraph, FindsViolations) {
  Fixture f = pocket();
  TopoGraph g = build_graph(f.regions, f.relations, f.curves, f.linking);
  layout(g);
  TopoGraph bad = g;
  bad.edges.push_back({EdgeKind::Adjacency, 0, 0, std::nullopt, std::nullopt});
  EXPECT_FALSE(check_graph(bad).empty());
  bad = g;
  bad.edges.push_back({EdgeKind::Membership, 2, 1, std::nullopt, std::nullopt});
  EXPECT_FALSE(check_graph(bad).empty());
  bad = g;
  bad.nodes[2].linearity = Linearity::Planar;
  EXPECT_FALSE(check_graph(bad).empty());
}

TEST(Layout, RegionOrdering) {
  TopoGraph lin = build_graph({region(0, Linearity::Linear, 2), region(1, Linearity::Linear, 1)}, {}, {}, {});
  layout(lin);
  EXPECT_EQ(lin.nodes[1].col, 0);
  EXPECT_EQ(lin.nodes[0].col, 1);
  TopoGraph pl = build_graph({region(0, Linearity::Planar, 1), region(1, Linearity::Planar, 2)}, {}, {}, {});
  layout(pl);
  EXPECT_EQ(pl.nodes[1].col, 0);
  EXPECT_EQ(pl.nodes[0].col, 1);
  // Betti sum dominates volume.
  TopoGraph b = build_graph({region(0, Linearity::Linear, 1, 1, 0), region(1, Linearity::Linear, 5)}, {}, {}, {});
  layout(b);
  EXPECT_EQ(b.nodes[1].col, 0);
  for (const GraphNode& n : pl.nodes) EXPECT_EQ(n.row, 1);
  for (const GraphNode& n : lin.nodes) EXPECT_EQ(n.row, 2);
}

TEST(Layout, CurvesSortedWithinContainer) {
  std::vector<Region> regions{region(0, Linearity::Linear, 10), region(1, Linearity::Linear, 3)};
  std::vector<CurveRecord> curves;
  for (int i = 0; i < 4; ++i)
    curves.push_back(curve(Linearity::Linear, i % 2, circle_curve({3.0 * i, 0, 0}, {1, 0, 0}, {0, 1, 0}, 1, 16), 0.1 * i));
  TopoGraph g = build_graph(regions, {}, curves, zeros(4));
  layout(g);
  // Region 1 (smaller) comes first; its curves (ids 3, 5) precede region 0's
  // (ids 2, 4), each group by |writhe| descending.
  std::vector<int> order(4);
  for (const GraphNode& n : g.nodes)
    if (n.kind == NodeKind::Curve) order[n.col] = n.id;
  EXPECT_EQ(order, (std::vector<int>{5, 3, 4, 2}));
}

TEST(Layout, PermutationInvariant) {
  const Fixture f = pocket();
  TopoGraph g = build_graph(f.regions, f.relations, f.curves, f.linking);
  TopoGraph h = g;
  layout(g);
  std::mt19937_64 rng(4);
  std::shuffle(h.nodes.begin(), h.nodes.end(), rng);
  std::shuffle(h.edges.begin(), h.edges.end(), rng);
  layout(h);
  EXPECT_EQ(positions(g), positions(h));
}

TEST(GraphJson, RoundTrip) {
  Fixture f = pocket();
  f.curves[1].summary.jones = "-t^-4 + t^-3 + t^-1";
  f.curves[1].summary.knotted = true;
  f.curves[1].summary.index = "-j";
  TopoGraph g = build_graph(f.regions, f.relations, f.curves, f.linking);
  layout(g);
  const std::string text = graph_to_json(g);
  EXPECT_EQ(graph_from_json(text), g);
  EXPECT_EQ(graph_to_json(graph_from_json(text)), text);
  EXPECT_NE(text.find("\n  \"nodes\": ["), std::string::npos);
}

TEST(GraphJson, RejectsSchemaViolations) {
  const Fixture f = pocket();
  TopoGraph g = build_graph(f.regions, f.relations, f.curves, f.linking);
  layout(g);
  ordered_json j = ordered_json::parse(graph_to_json(g));
  auto broken = [&](auto edit) {
    ordered_json k = j;
    edit(k);
    EXPECT_THROW(graph_from_json(k.dump()), ParseError);
  };
  broken([](ordered_json& k) { k.erase("version"); });
  broken([](ordered_json& k) { k["version"] = "2"; });
  broken([](ordered_json& k) { k["nodes"][0]["kind"] = "blob"; });
  broken([](ordered_json& k) { k["nodes"][0].erase("betti"); });
  broken([](ordered_json& k) { k["edges"][0]["a"] = 99; });
  broken([](ordered_json& k) { k["edges"][0]["kind"] = 3; });
  EXPECT_THROW(graph_from_json("{"), ParseError);
}

TEST(Serialize, WritesGeometry) {
  const auto dir = std::filesystem::temp_directory_path() / "tensortopo_graph_test";
  std::filesystem::remove_all(dir);
  Fixture f = pocket();
  f.regions[1].boundary.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  f.regions[1].boundary.triangles = {Triangle{0, 2, 1}, Triangle{0, 1, 3}, Triangle{0, 3, 2}, Triangle{1, 2, 3}};
  TopoGraph g = build_graph(f.regions, f.relations, f.curves, f.linking);
  layout(g);
  serialize(g, f.regions, f.curves, dir);
  std::ifstream in(dir / "graph.json");
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(graph_from_json(ss.str()), g);
  for (const GraphNode& n : g.nodes) EXPECT_TRUE(std::filesystem::exists(dir / n.geometry)) << n.geometry;
  std::ifstream cin(dir / "curves/2.json");
  std::stringstream cs;
  cs << cin.rdbuf();
  const auto loaded = polylines_from_json(cs.str());
  ASSERT_EQ(loaded.size(), 1u);
  EXPECT_EQ(loaded[0].points.size(), f.curves[0].polyline.points.size());
  EXPECT_TRUE(loaded[0].closed);
  std::filesystem::remove_all(dir);
}

TEST(Polylines, JsonRoundTripAndErrors) {
  const std::vector<Polyline3> curves{torus_curve(2, 3, 30), Polyline3{{{0, 0, 0}, {1, 0.1, 0}, {2, 0, 0.3}}, false}};
  const auto back = polylines_from_json(polylines_to_json(curves));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].points, curves[0].points);
  EXPECT_FALSE(back[1].closed);
  EXPECT_THROW(polylines_from_json(R"([{"points": [[0, 0]], "closed": true}])"), ParseError);
  EXPECT_THROW(polylines_from_json(R"([{"points": [], "closed": 1}])"), ParseError);
  EXPECT_THROW(polylines_from_json("[1"), ParseError);
}
