#pragma once

#include <cstdint>
#include <filesystem>
#include <unordered_map>
#include <vector>

#include "tensortopo/config.hpp"
#include "tensortopo/mesh.hpp"

namespace tensortopo {

using Triangle = std::array<int, 3>;

/// Sign-based neutral surface: one vertex per mesh edge whose endpoint modes
/// have opposite signs, triangles oriented towards the positive (linear) side.
struct NeutralSurface {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 2>> vertex_edge;  // mesh edge (min, max) of each vertex
  std::vector<Triangle> triangles;
  std::vector<int> triangle_tet;
  std::vector<int> sheet;           // sheet id per triangle
  std::vector<bool> sheet_closed;   // per sheet
  std::vector<bool> positive;       // perturbed mode sign per mesh vertex
  std::unordered_map<std::uint64_t, int> edge_vertex;

  std::size_t num_sheets() const { return sheet_closed.size(); }
  /// Surface vertex on mesh edge (a, b), or -1.
  int vertex_on_edge(int a, int b) const;
};

std::uint64_t edge_key(int a, int b);

/// Perturbed sign of mode: |mode| < mode_tol (or undefined) counts as
/// sign(mode) * mode_tol with ties going to +.
bool positive_mode(const SymTensor3& t);

/// Marching tetrahedra on the sign of mode with bisection for the crossing
/// along each cut edge. OpenMP-parallel over cut edges.
NeutralSurface extract_neutral_surface(const TensorMesh& mesh, const Config& cfg);
/// Serial reference for extract_neutral_surface.
NeutralSurface extract_neutral_surface_serial(const TensorMesh& mesh, const Config& cfg);

/// 1:8 refinement of every tet; tensors at new vertices are edge midpoints,
/// so the piecewise-linear field is unchanged.
TensorMesh subdivide_mesh(const TensorMesh& mesh);

void write_obj(const std::filesystem::path& path, const std::vector<Vec3>& vertices,
               const std::vector<Triangle>& triangles);

}  // namespace tensortopo
