#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "tensortopo/degenerate.hpp"
#include "tensortopo/graph.hpp"
#include "tensortopo/neutral.hpp"
#include "tensortopo/regions.hpp"

namespace tensortopo {

std::string config_to_json(const Config& cfg);

/// Messages at or below the level in TENSORTOPO_LOG (0 = quiet, 1 = info,
/// 2 = debug) go to stderr.
void log_message(int level, const std::string& msg);

struct Analysis {
  TensorMesh mesh;  // after optional subdivision
  ExtractStats stats;
  NeutralSurface surface;
  Segmentation segmentation;
  std::vector<DegenerateCurve> curves;
  std::vector<CurveRecord> records;
  std::vector<std::vector<double>> linking;
  TopoGraph graph;
  std::vector<std::string> warnings;
  std::vector<std::pair<std::string, double>> stage_seconds;
};

/// Extraction, regions, curve invariants, winding and graph. Throws Error on
/// hard failures (e.g. a field that is degenerate almost everywhere).
Analysis analyze(const TensorMesh& mesh, const Config& cfg);

std::string format_report(const Analysis& a);

/// graph.json, curves/, regions/, neutral.obj, neutral.json, config.json, report.txt.
void write_analysis(const Analysis& a, const Config& cfg, const std::filesystem::path& out_dir);

}  // namespace tensortopo
