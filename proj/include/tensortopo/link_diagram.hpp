#pragma once

#include <cstdint>
#include <vector>

#include "tensortopo/curve_invariants.hpp"

namespace tensortopo {

struct Vec2 {
  double x = 0, y = 0;
};

/// One strand passing through a crossing: segment index and parameter on it.
struct Passage {
  int strand = -1;
  int segment = -1;
  double param = 0;
};

struct Crossing {
  Passage over, under;
  int sign = 1;
  Vec2 position;
};

/// Regular projection of closed curves. Over/under by depth along the view
/// direction; a crossing is positive when the under strand passes the over
/// strand from its right to its left.
struct LinkDiagram {
  std::vector<std::vector<Vec2>> strands;
  std::vector<Crossing> crossings;

  int writhe() const;
  /// Crossing ids met along each strand, in order.
  std::vector<std::vector<int>> strand_sequences() const;
};

/// PCA projection; on an irregular projection the frame gets a seeded random
/// rotation of at most 2 degrees, up to 64 attempts. Throws TopologyError
/// when every attempt is irregular.
LinkDiagram project_to_diagram(const std::vector<Polyline3>& curves, std::uint64_t seed);

/// Removes Reidemeister I kinks and Reidemeister II bigons until none remain.
LinkDiagram simplify_diagram(LinkDiagram d);

/// Planar-diagram code: crossing k is {a, b, c, d}, a = incoming under edge,
/// then counterclockwise. Components without crossings are counted in free_loops.
struct PdCode {
  std::vector<std::array<int, 4>> crossings;
  int free_loops = 0;
};

PdCode pd_code(const LinkDiagram& d);

}  // namespace tensortopo
