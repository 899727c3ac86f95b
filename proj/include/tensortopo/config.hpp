#pragma once

#include <cstdint>
#include <string>

namespace tensortopo {

/// Tolerances and knobs shared by the analysis stages.
struct Config {
  double mode_tol = 1e-6;         // |mode -/+ 1| for degenerate, |mode| for neutral
  double point_tol = 1e-6;        // relative to the mesh bounding-box diagonal
  int face_subdiv_depth = 5;      // uniform face subdivision before Newton
  double eigen_gap_tol = 1e-9;    // relative eigenvalue gap for a usable frame
  double snap_tol = 0.2;          // radians
  int max_crossings = 16;
  double link_round_guard = 0.1;
  std::uint64_t seed = 0;
  int subdivide_level = 0;        // 1:8 tet refinement passes before extraction
  double min_curve_length = 0.0;  // 0 disables the filter
  double eps = 1e-6;              // classification tolerance

  /// Throws ConfigError if any tolerance is not positive.
  void validate() const;
};

}  // namespace tensortopo
