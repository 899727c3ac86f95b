#pragma once

#include <optional>
#include <vector>

#include "tensortopo/config.hpp"
#include "tensortopo/locator.hpp"
#include "tensortopo/mesh.hpp"
#include "tensortopo/winding.hpp"

namespace tensortopo {

enum class PointClass { Wedge, Trisector, Transition, Unresolved };

std::string to_string(PointClass c);

struct FacePoint {
  Vec3 position;
  std::array<double, 3> weights{};  // with respect to the face's sorted vertices
  Linearity linearity = Linearity::Linear;
  bool unresolved = false;
};

struct FaceScan {
  std::vector<FacePoint> points;
  bool budget_exhausted = false;
};

struct FaceScanOptions {
  double mode_tol = 1e-6;
  int depth = 5;
  int budget = 64;         // surviving subtriangles allowed per level
  double dedupe = 0.0;     // absolute merge radius
};

/// Isolated zeros of the discriminant on one mesh face whose mode sign
/// matches `linearity` (both kinds when empty). Subdivision-budget
/// exhaustion yields one Unresolved point at the face centroid and sets
/// budget_exhausted.
FaceScan face_degenerate_points(const TensorMesh& mesh, int face, std::optional<Linearity> linearity,
                                const FaceScanOptions& opt);

/// All faces and both linearities, OpenMP-parallel over faces.
std::vector<FaceScan> scan_faces(const TensorMesh& mesh, const FaceScanOptions& opt);
/// Serial reference for scan_faces.
std::vector<FaceScan> scan_faces_serial(const TensorMesh& mesh, const FaceScanOptions& opt);

struct DegenerateCurve {
  std::vector<Vec3> samples;  // closed curves repeat the first sample at the end
  std::vector<int> tets;      // tet containing each sample
  std::vector<PointClass> classes;
  Linearity linearity = Linearity::Linear;
  bool closed = false;
  bool unresolved_start = false;
  bool unresolved_end = false;

  double length() const;
  /// Points without the closing duplicate.
  std::vector<Vec3> loop_points() const;
};

struct ExtractStats {
  int faces_exhausted = 0;
  int unresolved_endpoints = 0;
  int faces_scanned = 0;
  int perturbed_vertices = 0;
};

/// Vertex tensors with every (nearly) degenerate vertex split along its
/// repeating plane by `rel` times its deviator magnitude. A degenerate vertex
/// makes the piecewise-linear degenerate set branch at that vertex; the split
/// restores general position. Returns the count of perturbed vertices.
std::vector<SymTensor3> perturb_degenerate_vertices(const TensorMesh& mesh, double rel, int* count = nullptr);

FaceScanOptions face_scan_options(const TensorMesh& mesh, const Config& cfg);

/// Degenerate curves of both linearities, canonically ordered and oriented.
/// Curves shorter than cfg.min_curve_length are dropped when it is positive.
std::vector<DegenerateCurve> trace_degenerate_curves(const TensorMesh& mesh, const Config& cfg,
                                                     ExtractStats* stats = nullptr);

/// Curves of one linearity from precomputed face scans (points of the other
/// linearity are ignored).
std::vector<DegenerateCurve> trace_from_scans(const TensorMesh& mesh, const std::vector<FaceScan>& scans,
                                              Linearity linearity, const Config& cfg, ExtractStats* stats = nullptr);

/// Local tangent of the curve at a sample.
Vec3 curve_tangent(const DegenerateCurve& c, std::size_t i);

/// Wedge or Trisector from the index of a transversal circle of the given
/// radius; retries with halved radius, Unresolved after six retries.
PointClass classify_point(const FieldSampler& field, const DegenerateCurve& curve, std::size_t i, double radius,
                          const TransportOptions& opt = {});

/// Classifies every sample in place (parallel over samples).
void classify_curve(const FieldSampler& field, DegenerateCurve& curve, double radius, const TransportOptions& opt = {});

/// Refines every adjacent (Wedge, Trisector) sample pair by bisection to
/// `tol` in arc length, inserts a Transition sample there and returns the
/// arc-length positions. Unresolved samples are skipped when pairing.
std::vector<double> find_transition_points(const FieldSampler& field, const TetLocator& locator,
                                           DegenerateCurve& curve, double radius, double tol,
                                           const TransportOptions& opt = {});

}  // namespace tensortopo
