#include "tensortopo/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "tensortopo/jones.hpp"
#include "tensortopo/locator.hpp"
#include "tensortopo/winding.hpp"

namespace tensortopo {

void Config::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive");
  };
  positive(mode_tol, "mode_tol");
  positive(point_tol, "point_tol");
  positive(eigen_gap_tol, "eigen_gap_tol");
  positive(snap_tol, "snap_tol");
  positive(link_round_guard, "link_round_guard");
  positive(eps, "eps");
  if (mode_tol >= 0.5) throw ConfigError("mode_tol must be below 0.5");
  if (face_subdiv_depth < 1 || face_subdiv_depth > 10) throw ConfigError("face_subdiv_depth must be in [1, 10]");
  if (max_crossings < 0) throw ConfigError("max_crossings must be non-negative");
  if (subdivide_level < 0 || subdivide_level > 4) throw ConfigError("subdivide_level must be in [0, 4]");
  if (!(min_curve_length >= 0)) throw ConfigError("min_curve_length must be non-negative");
}

std::string config_to_json(const Config& cfg) {
  nlohmann::ordered_json j;
  j["mode_tol"] = cfg.mode_tol;
  j["point_tol"] = cfg.point_tol;
  j["face_subdiv_depth"] = cfg.face_subdiv_depth;
  j["eigen_gap_tol"] = cfg.eigen_gap_tol;
  j["snap_tol"] = cfg.snap_tol;
  j["max_crossings"] = cfg.max_crossings;
  j["link_round_guard"] = cfg.link_round_guard;
  j["seed"] = cfg.seed;
  j["subdivide_level"] = cfg.subdivide_level;
  j["min_curve_length"] = cfg.min_curve_length;
  j["eps"] = cfg.eps;
  return j.dump(2) + "\n";
}

void log_message(int level, const std::string& msg) {
  static const int threshold = [] {
    const char* env = std::getenv("TENSORTOPO_LOG");
    return env ? std::atoi(env) : 0;
  }();
  if (level <= threshold) std::cerr << "[tensortopo] " << msg << '\n';
}

namespace {

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

Polyline3 to_polyline(const DegenerateCurve& c) {
  Polyline3 p;
  p.closed = c.closed;
  for (const Vec3& v : c.closed ? c.loop_points() : c.samples)
    if (p.points.empty() || distance(p.points.back(), v) > 1e-12) p.points.push_back(v);
  if (p.closed && p.points.size() > 1 && distance(p.points.front(), p.points.back()) <= 1e-12) p.points.pop_back();
  return p;
}

bool usable(const Polyline3& p) {
  try {
    p.validate();
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

Analysis analyze(const TensorMesh& input, const Config& cfg) {
  cfg.validate();
  Analysis a;
  Stopwatch clock;
  a.mesh = input;
  for (int k = 0; k < cfg.subdivide_level; ++k) a.mesh = subdivide_mesh(a.mesh);
  const TensorMesh& mesh = a.mesh;
  if (cfg.subdivide_level > 0) a.stage_seconds.emplace_back("subdivide", clock.lap());

  a.curves = trace_degenerate_curves(mesh, cfg, &a.stats);
  if (2 * a.stats.perturbed_vertices > static_cast<int>(mesh.num_vertices()) ||
      2 * a.stats.faces_exhausted > a.stats.faces_scanned)
    throw Error("field is degenerate almost everywhere (" + std::to_string(a.stats.perturbed_vertices) + " of " +
                std::to_string(mesh.num_vertices()) + " vertices degenerate, " + std::to_string(a.stats.faces_exhausted) +
                " of " + std::to_string(a.stats.faces_scanned) + " faces exhausted)");
  if (a.stats.faces_exhausted > 0)
    a.warnings.push_back(std::to_string(a.stats.faces_exhausted) + " faces exceeded the subdivision budget");
  if (a.stats.unresolved_endpoints > 0)
    a.warnings.push_back(std::to_string(a.stats.unresolved_endpoints) + " unresolved curve endpoints");
  a.stage_seconds.emplace_back("degenerate curves", clock.lap());
  log_message(1, std::to_string(a.curves.size()) + " degenerate curves");

  a.surface = extract_neutral_surface(mesh, cfg);
  a.stage_seconds.emplace_back("neutral surface", clock.lap());
  a.segmentation = analyze_regions(mesh, a.surface);
  a.stage_seconds.emplace_back("regions", clock.lap());
  log_message(1, std::to_string(a.segmentation.regions.size()) + " regions");

  const TetLocator locator(mesh);
  const FieldSampler field = mesh_sampler(locator);
  TransportOptions topt;
  topt.snap_tol = cfg.snap_tol;
  topt.gap_tol = cfg.eigen_gap_tol;
  const double cell = mesh.cell_size();
  const double radius = 0.5 * cell;
  const double arc_tol = cfg.point_tol * mesh.bbox_diagonal();
  for (std::size_t i = 0; i < a.curves.size(); ++i) {
    DegenerateCurve& c = a.curves[i];
    classify_curve(field, c, radius, topt);
    find_transition_points(field, locator, c, radius, arc_tol, topt);
    CurveRecord rec;
    rec.linearity = c.linearity;
    rec.polyline = to_polyline(c);
    rec.summary.closed = c.closed;
    rec.summary.length = c.length();
    rec.summary.segments = class_fractions(c);
    const std::string name = "curve " + std::to_string(i);
    if (c.unresolved_start || c.unresolved_end) a.warnings.push_back(name + " has an unresolved endpoint");
    rec.region = assign_curve_region(c, a.segmentation);
    if (c.closed && usable(rec.polyline)) {
      rec.summary.writhe = writhe(rec.polyline);
      const KnotAnalysis k = is_knotted(rec.polyline, cfg.seed, cfg.max_crossings);
      if (k.jones) {
        rec.summary.jones = k.jones->to_string();
        rec.summary.knotted = k.state == KnotState::Knotted;
      } else {
        rec.summary.jones = "intractable";
        a.warnings.push_back(name + ": " + std::to_string(k.crossings) + " crossings exceed the Jones budget");
      }
      try {
        const WindingNumber w = loop_winding(field, c.loop_points(), {0.5 * cell, 0.25 * cell, cell, 0.125 * cell}, topt);
        rec.summary.index = w.to_string();
        if (w.unit == 2) a.warnings.push_back(name + ": loop winding " + w.to_string() + " (medium eigenvector flip)");
      } catch (const Error& e) {
        a.warnings.push_back(name + ": loop winding failed: " + e.what());
      }
    }
    a.records.push_back(std::move(rec));
  }
  a.stage_seconds.emplace_back("curve processing", clock.lap());

  const std::size_t nc = a.records.size();
  a.linking.assign(nc, std::vector<double>(nc, 0.0));
  for (std::size_t i = 0; i < nc; ++i)
    for (std::size_t j = i + 1; j < nc; ++j) {
      if (!usable(a.records[i].polyline) || !usable(a.records[j].polyline)) continue;
      try {
        a.linking[i][j] = a.linking[j][i] = linking_integral(a.records[i].polyline, a.records[j].polyline);
      } catch (const TopologyError&) {
        a.warnings.push_back("curves " + std::to_string(i) + " and " + std::to_string(j) + " touch; linking skipped");
      }
    }
  a.stage_seconds.emplace_back("linking", clock.lap());

  a.graph = build_graph(a.segmentation.regions, a.segmentation.relations, a.records, a.linking, cfg.link_round_guard);
  layout(a.graph);
  const auto problems = check_graph(a.graph);
  if (!problems.empty()) throw TopologyError("inconsistent graph: " + problems.front());
  a.stage_seconds.emplace_back("graph", clock.lap());
  return a;
}

std::string format_report(const Analysis& a) {
  std::ostringstream out;
  int counts[4] = {0, 0, 0, 0};
  for (const GraphEdge& e : a.graph.edges) ++counts[static_cast<int>(e.kind)];
  std::size_t regions = a.segmentation.regions.size();
  out << "mesh: " << a.mesh.num_vertices() << " vertices, " << a.mesh.num_tets() << " tets\n";
  out << "nodes: " << a.graph.nodes.size() << " (" << regions << " regions, " << a.records.size() << " curves)\n";
  out << "edges: " << a.graph.edges.size() << " (adjacency " << counts[0] << ", containment " << counts[1]
      << ", membership " << counts[2] << ", link " << counts[3] << ")\n";
  out << "neutral sheets: " << a.surface.num_sheets() << "\n";
  out << "perturbed vertices: " << a.stats.perturbed_vertices << "\n";
  out << "timing:\n";
  char buf[96];
  for (const auto& [stage, s] : a.stage_seconds) {
    std::snprintf(buf, sizeof buf, "  %-18s %.3f s\n", stage.c_str(), s);
    out << buf;
  }
  out << "warnings: " << a.warnings.size() << "\n";
  for (const std::string& w : a.warnings) out << "  " << w << "\n";
  return out.str();
}

void write_analysis(const Analysis& a, const Config& cfg, const std::filesystem::path& out_dir) {
  serialize(a.graph, a.segmentation.regions, a.records, out_dir);
  write_obj(out_dir / "neutral.obj", a.surface.vertices, a.surface.triangles);
  nlohmann::ordered_json surf;
  surf["vertices"] = nlohmann::ordered_json::array();
  for (const Vec3& v : a.surface.vertices) surf["vertices"].push_back({v.x, v.y, v.z});
  surf["triangles"] = nlohmann::ordered_json::array();
  for (const Triangle& t : a.surface.triangles) surf["triangles"].push_back({t[0], t[1], t[2]});
  surf["sheet"] = a.surface.sheet;
  std::vector<bool> closed(a.surface.sheet_closed.begin(), a.surface.sheet_closed.end());
  surf["sheetClosed"] = closed;
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) throw Error("cannot write " + p.string());
  };
  write(out_dir / "neutral.json", surf.dump() + "\n");
  write(out_dir / "config.json", config_to_json(cfg));
  write(out_dir / "report.txt", format_report(a));
}

}  // namespace tensortopo
