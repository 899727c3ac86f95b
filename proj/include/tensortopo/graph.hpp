#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tensortopo/curve_invariants.hpp"
#include "tensortopo/regions.hpp"

namespace tensortopo {

struct ClassFraction {
  std::string cls;  // wedge | trisector | transition | unresolved
  double fraction = 0;
  bool operator==(const ClassFraction&) const = default;
};

struct CurveSummary {
  bool closed = false;
  std::optional<double> writhe;
  std::optional<std::string> jones;  // canonical text; "intractable" past the crossing budget
  std::optional<bool> knotted;
  std::optional<std::string> index;  // loop winding, e.g. "+i"
  std::vector<ClassFraction> segments;
  double length = 0;
  bool operator==(const CurveSummary&) const = default;
};

enum class NodeKind { Region, Curve };
enum class EdgeKind { Adjacency, Containment, Membership, Link };
std::string to_string(NodeKind k);
std::string to_string(EdgeKind k);

struct GraphNode {
  int id = -1;
  NodeKind kind = NodeKind::Region;
  int row = -1, col = -1;
  Linearity linearity = Linearity::Linear;
  std::optional<std::array<int, 2>> betti;
  std::optional<double> volume;
  std::optional<CurveSummary> curve;
  std::string geometry;
  bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
  EdgeKind kind = EdgeKind::Adjacency;
  int a = -1, b = -1;
  std::optional<double> linking;
  std::optional<int> contained;
  bool operator==(const GraphEdge&) const = default;
};

struct TopoGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  bool operator==(const TopoGraph&) const = default;
};

/// A processed degenerate curve as the graph sees it.
struct CurveRecord {
  Linearity linearity = Linearity::Linear;
  Polyline3 polyline;
  CurveSummary summary;
  int region = -1;
};

/// Fraction of arc length per sample class.
std::vector<ClassFraction> class_fractions(const DegenerateCurve& c);

/// Node ids: regions first (by region id), then curves. `linking` is the
/// symmetric matrix of Gauss integrals between curves.
TopoGraph build_graph(const std::vector<Region>& regions, const std::vector<RegionRelation>& relations,
                      const std::vector<CurveRecord>& curves, const std::vector<std::vector<double>>& linking,
                      double link_round_guard = 0.1);

/// Rows 0..3 = planar curves, planar regions, linear regions, linear curves.
void layout(TopoGraph& g);

/// Structural checks (bipartite adjacency, one membership per curve, ...);
/// returns the violations.
std::vector<std::string> check_graph(const TopoGraph& g);

std::string graph_to_json(const TopoGraph& g);
/// Throws ParseError on schema violations.
TopoGraph graph_from_json(const std::string& text);

/// graph.json plus curves/<id>.json and regions/<id>.obj.
void serialize(const TopoGraph& g, const std::vector<Region>& regions, const std::vector<CurveRecord>& curves,
               const std::filesystem::path& out_dir);

std::string polylines_to_json(const std::vector<Polyline3>& curves);
std::vector<Polyline3> polylines_from_json(const std::string& text);

}  // namespace tensortopo
