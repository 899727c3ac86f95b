#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tensortopo/analytic_field.hpp"
#include "tensortopo/jones.hpp"
#include "tensortopo/pipeline.hpp"

using namespace tensortopo;

namespace {

constexpr int kOk = 0;
constexpr int kHardError = 1;
constexpr int kUsage = 2;

struct GenArgs {
  std::string field;
  std::uint64_t seed = 0;
  double r0 = 1.0;
  double separation = 1.0;
  bool planar = false;
  bool mirrored = false;
  std::vector<double> radii;
  std::vector<std::string> domain;
  int res = 16;
  std::string out;
};

Domain parse_domain(const std::vector<std::string>& d) {
  if (d.size() != 3) throw ConfigError("--domain expects: box MIN MAX | torus MAJOR MINOR");
  const double a = std::stod(d[1]), b = std::stod(d[2]);
  if (d[0] == "box") {
    if (!(a < b)) throw ConfigError("box domain needs MIN < MAX");
    return BoxDomain{{a, a, a}, {b, b, b}};
  }
  if (d[0] == "torus") {
    if (!(a > b && b > 0)) throw ConfigError("torus domain needs MAJOR > MINOR > 0");
    return TorusDomain{a, b};
  }
  throw ConfigError("unknown domain '" + d[0] + "'");
}

int run_gen(const GenArgs& g) {
  AnalyticField f;
  switch (parse_field_kind(g.field)) {
    case FieldKind::LinearRandom: f = AnalyticField::linear_random(g.seed); break;
    case FieldKind::AxisymLoop: f = AnalyticField::axisym_loop(g.r0, g.planar, g.mirrored); break;
    case FieldKind::HopfPair: f = AnalyticField::hopf_pair(g.r0, g.separation); break;
    case FieldKind::ConstantDegenerate: f = AnalyticField::constant_degenerate(); break;
    case FieldKind::NeutralPlane: f = AnalyticField::neutral_plane(); break;
    case FieldKind::RadialShells: f = AnalyticField::radial_shells(g.radii.empty() ? std::vector<double>{1.0} : g.radii); break;
    case FieldKind::ParallelLines: f = AnalyticField::parallel_lines({{0.0, 0.0, !g.mirrored}}, g.planar); break;
  }
  f.planar = g.planar;
  f.mirrored = g.mirrored;
  if (g.res < 1 || g.res > 512) throw ConfigError("--res must be in [1, 512]");
  const TensorMesh mesh = sample_field_onto_mesh(generate_mesh(parse_domain(g.domain), g.res), f);
  write_tft(mesh, g.out);
  std::cout << "wrote " << g.out << ": " << mesh.num_vertices() << " vertices, " << mesh.num_tets() << " tets\n";
  return kOk;
}

int run_analyze(const std::string& input, const std::string& out, const Config& cfg) {
  if (!std::filesystem::is_regular_file(input)) throw ConfigError("cannot open " + input);
  const TensorMesh mesh = read_tft(input);
  const Analysis a = analyze(mesh, cfg);
  write_analysis(a, cfg, out);
  std::cout << format_report(a);
  return kOk;
}

int run_invariants(const std::string& path, bool jones, const Config& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::vector<Polyline3> curves = polylines_from_json(ss.str());
  for (const Polyline3& c : curves) c.validate();
  char buf[64];
  for (std::size_t i = 0; i < curves.size(); ++i) {
    std::cout << "curve " << i << ": " << (curves[i].closed ? "closed" : "open") << ", " << curves[i].points.size()
              << " points, writhe ";
    if (curves[i].closed) {
      std::snprintf(buf, sizeof buf, "%.6f", writhe(curves[i]));
      std::cout << buf;
    } else {
      std::cout << "n/a";
    }
    std::cout << '\n';
  }
  if (curves.size() > 1) {
    std::cout << "linking matrix:\n";
    for (std::size_t i = 0; i < curves.size(); ++i) {
      for (std::size_t j = 0; j < curves.size(); ++j) {
        const double l = i == j ? 0.0 : linking_integral(curves[i], curves[j]);
        std::snprintf(buf, sizeof buf, "%s%10.6f", j ? " " : "  ", l);
        std::cout << buf;
      }
      std::cout << '\n';
    }
  }
  if (jones) {
    for (std::size_t i = 0; i < curves.size(); ++i) {
      std::cout << "jones " << i << ": ";
      if (!curves[i].closed) {
        std::cout << "n/a\n";
        continue;
      }
      const KnotAnalysis k = is_knotted(curves[i], cfg.seed, cfg.max_crossings);
      std::cout << (k.jones ? k.jones->to_string() : "intractable") << " (" << to_string(k.state) << ")\n";
    }
  }
  return kOk;
}

void add_config_flags(CLI::App* cmd, Config& cfg, int& jobs) {
  cmd->add_option("--mode-tol", cfg.mode_tol, "Mode tolerance for degenerate and neutral points");
  cmd->add_option("--point-tol", cfg.point_tol, "Point tolerance relative to the bounding-box diagonal");
  cmd->add_option("--subdiv", cfg.face_subdiv_depth, "Face subdivision depth");
  cmd->add_option("--subdivide", cfg.subdivide_level, "1:8 tet refinement passes before extraction");
  cmd->add_option("--eps", cfg.eps, "Classification tolerance");
  cmd->add_option("--snap-tol", cfg.snap_tol, "Winding snap tolerance in radians");
  cmd->add_option("--max-crossings", cfg.max_crossings, "Crossing budget for Jones polynomials");
  cmd->add_option("--seed", cfg.seed, "Seed for projection perturbations");
  cmd->add_option("--min-curve-length", cfg.min_curve_length, "Drop curves shorter than this (0 = keep all)");
  cmd->add_option("--jobs", jobs, "Worker threads (0 = OpenMP default)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topology of 3D symmetric tensor fields on tetrahedral meshes"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Sample an analytic field onto a generated mesh");
  g->add_option("--field", gen.field, "linear-random | axisym-loop | hopf-pair | constant-degenerate | neutral-plane | radial-shells | parallel-lines")->required();
  g->add_option("--seed", gen.seed, "Seed for linear-random");
  g->add_option("--r0", gen.r0, "Loop radius");
  g->add_option("--separation", gen.separation, "Hopf pair center distance");
  g->add_option("--radii", gen.radii, "Shell radii for radial-shells")->delimiter(',');
  g->add_flag("--planar", gen.planar, "Flip linearity (T -> -T)");
  g->add_flag("--mirrored", gen.mirrored, "Mirror the loop profile (trisector)");
  g->add_option("--domain", gen.domain, "box MIN MAX | torus MAJOR MINOR")->expected(3)->required();
  g->add_option("--res", gen.res, "Mesh resolution");
  g->add_option("-o,--out", gen.out, "Output TFT file")->required();

  Config cfg;
  int jobs = 0;
  std::string input, out_dir;
  auto* an = app.add_subcommand("analyze", "Build the topological graph of a TFT mesh");
  an->add_option("input", input, "Input TFT file")->required();
  an->add_option("-o,--out", out_dir, "Output directory")->required();
  add_config_flags(an, cfg, jobs);

  std::string curves_path;
  bool jones = false;
  auto* inv = app.add_subcommand("invariants", "Writhe, linking and Jones polynomials of polyline curves");
  inv->add_option("curves", curves_path, "JSON list of {points, closed}")->required();
  inv->add_flag("--jones", jones, "Also compute Jones polynomials of closed curves");
  inv->add_option("--seed", cfg.seed, "Seed for projection perturbations");
  inv->add_option("--max-crossings", cfg.max_crossings, "Crossing budget for Jones polynomials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (jobs < 0) throw ConfigError("--jobs must be non-negative");
    if (jobs > 0) omp_set_num_threads(jobs);
    if (*g) return run_gen(gen);
    cfg.validate();
    if (*an) return run_analyze(input, out_dir, cfg);
    if (*inv) return run_invariants(curves_path, jones, cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid number: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kHardError;
  }
  return kUsage;
}
