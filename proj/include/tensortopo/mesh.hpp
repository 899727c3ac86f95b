#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "tensortopo/analytic_field.hpp"
#include "tensortopo/tensor.hpp"

namespace tensortopo {

/// Malformed TFT input; `line` is 1-based (0 when not tied to a line).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

using Tet = std::array<int, 4>;

/// Local face k of a tet is the face opposite vertex k.
inline constexpr std::array<std::array<int, 3>, 4> kTetFaces{{{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};
inline constexpr std::array<std::array<int, 2>, 6> kTetEdges{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

struct MeshGeometry {
  std::vector<Vec3> vertices;
  std::vector<Tet> tets;
};

struct Face {
  std::array<int, 3> v{};        // sorted vertex ids
  std::array<int, 2> tets{-1, -1};  // incident tets; tets[1] == -1 on the boundary
  bool boundary() const { return tets[1] < 0; }
};

/// Tetrahedral mesh with one tensor per vertex, interpolated linearly per tet.
/// Immutable after construction.
class TensorMesh {
 public:
  TensorMesh() = default;
  /// Validates indices, reorients negative tets and builds face adjacency.
  /// Throws ParseError (line 0) on invalid input.
  TensorMesh(std::vector<Vec3> vertices, std::vector<SymTensor3> tensors, std::vector<Tet> tets);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<SymTensor3>& tensors() const { return tensors_; }
  const std::vector<Tet>& tets() const { return tets_; }
  const std::vector<Face>& faces() const { return faces_; }
  /// Face id of local face k of tet t.
  int tet_face(int t, int k) const { return tet_faces_[t][k]; }
  /// Tet across local face k of tet t, or -1.
  int neighbor(int t, int k) const;

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_tets() const { return tets_.size(); }

  double tet_volume(int t) const;
  double total_volume() const;
  /// Mean edge length over all tets; the "cell size" used for tolerances.
  double cell_size() const { return cell_size_; }
  double bbox_diagonal() const;
  std::pair<Vec3, Vec3> bbox() const { return {bbox_min_, bbox_max_}; }

  /// Same geometry and adjacency with replaced vertex tensors.
  TensorMesh with_tensors(std::vector<SymTensor3> tensors) const;

  /// Gradient of each tensor component inside tet t (constant per tet).
  std::array<SymTensor3, 3> tet_gradient(int t) const;

 private:
  std::vector<Vec3> vertices_;
  std::vector<SymTensor3> tensors_;
  std::vector<Tet> tets_;
  std::vector<Face> faces_;
  std::vector<std::array<int, 4>> tet_faces_;
  double cell_size_ = 0;
  Vec3 bbox_min_, bbox_max_;
};

struct BarycentricPoint {
  int tet = -1;
  std::array<double, 4> weights{};
};

double signed_tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

/// Barycentric coordinates of p with respect to tet t.
std::array<double, 4> barycentric(const TensorMesh& mesh, int t, const Vec3& p);

SymTensor3 interpolate(const TensorMesh& mesh, const BarycentricPoint& p);
Vec3 position(const TensorMesh& mesh, const BarycentricPoint& p);

TensorMesh read_tft(const std::filesystem::path& path);
TensorMesh parse_tft(const std::string& text);
void write_tft(const TensorMesh& mesh, const std::filesystem::path& path);
std::string format_tft(const TensorMesh& mesh);

struct BoxDomain {
  Vec3 min{0, 0, 0}, max{1, 1, 1};
};
struct TorusDomain {
  double major = 3.0, minor = 1.0;
};
using Domain = std::variant<BoxDomain, TorusDomain>;

/// Box: resolution^3 cells, 6 tets each. Torus: 2n longitude x 2n meridian x
/// max(1, n/4) radial cells around the core circle, 6 tets per cell with the
/// zero-volume tets of the core ring dropped.
MeshGeometry generate_mesh(const Domain& domain, int resolution);

TensorMesh sample_field_onto_mesh(const MeshGeometry& geometry, const AnalyticField& f);

}  // namespace tensortopo
