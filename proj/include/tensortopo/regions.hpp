#pragma once

#include <cstdint>
#include <vector>

#include "tensortopo/degenerate.hpp"
#include "tensortopo/neutral.hpp"

namespace tensortopo {

enum class SheetSide { Inner, Outer };

struct BoundarySheet {
  int sheet = -1;
  bool closed = false;
  SheetSide side = SheetSide::Outer;
};

/// Closed triangle surface bounding a region, oriented outwards.
struct BoundaryMesh {
  std::vector<Vec3> vertices;
  std::vector<std::int64_t> keys;  // mesh vertex id, or num_vertices + surface vertex id
  std::vector<Triangle> triangles;
};

struct Region {
  int id = -1;
  Linearity linearity = Linearity::Linear;
  std::vector<int> cells;  // 2 * tet + (planar ? 1 : 0)
  std::vector<BoundarySheet> sheets;
  BoundaryMesh boundary;
  double volume = 0;
  int euler_char = 0;
  int beta1 = 0;
  int beta2 = 0;
};

struct RegionRelation {
  enum class Kind { Adjacent, Contains };
  Kind kind = Kind::Adjacent;
  int a = -1;  // container for Contains
  int b = -1;
  std::vector<int> sheets;
};

struct Segmentation {
  std::vector<Region> regions;
  std::vector<int> cell_region;  // per cell index, -1 where the cell is empty
  std::vector<RegionRelation> relations;
};

inline int cell_index(int tet, Linearity l) { return 2 * tet + (l == Linearity::Planar ? 1 : 0); }

/// Splits every tet into at most two sign cells and merges equal-sign cells
/// across shared faces. Fills cells and boundary meshes, not the invariants.
std::vector<Region> segment_regions(const TensorMesh& mesh, const NeutralSurface& surface,
                                    std::vector<int>* cell_region = nullptr);

/// Divergence-theorem volume; throws TopologyError listing open edges.
double region_volume(const Region& r);
/// Edges of the boundary mesh not matched by an opposite half-edge.
std::vector<std::array<std::int64_t, 2>> open_edges(const BoundaryMesh& b);

/// Half the Euler characteristic of the boundary surface.
int euler_characteristic(const Region& r);

/// Adjacent for every sheet, Contains for closed sheets (container on the
/// Outer side, found by ray parity). Also fills Region::sheets.
std::vector<RegionRelation> compute_relations(std::vector<Region>& regions, const NeutralSurface& surface,
                                              const std::vector<int>& cell_region);

/// (beta1, beta2); beta2 counts closed sheets with r on their Outer side.
std::pair<int, int> betti(const Region& r);

/// Full segmentation with volumes, Euler characteristics and Betti numbers.
Segmentation analyze_regions(const TensorMesh& mesh, const NeutralSurface& surface);

/// Region owning the sign cell of a curve's samples, checked at 3 samples.
int assign_curve_region(const DegenerateCurve& curve, const Segmentation& seg);

}  // namespace tensortopo
