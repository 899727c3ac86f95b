#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "tensortopo/mesh.hpp"

namespace tensortopo {

/// Point location in a TensorMesh through a uniform grid of tet buckets.
/// Read-only after construction; queries may run concurrently.
class TetLocator {
 public:
  explicit TetLocator(const TensorMesh& mesh);

  /// Containing tet with barycentric weights, or empty outside the mesh.
  std::optional<BarycentricPoint> locate(const Vec3& p) const;

  const TensorMesh& mesh() const { return *mesh_; }

 private:
  int cell_index(int i, int j, int k) const { return i + dims_[0] * (j + dims_[1] * k); }
  std::array<int, 3> cell_of(const Vec3& p) const;

  const TensorMesh* mesh_;
  Vec3 origin_;
  Vec3 step_;
  std::array<int, 3> dims_{1, 1, 1};
  std::vector<int> start_;  // CSR offsets into items_
  std::vector<int> items_;
};

/// Tensor at an arbitrary point; empty when the point is outside the domain.
using FieldSampler = std::function<std::optional<SymTensor3>(const Vec3&)>;

/// Piecewise-linear sampler over a mesh. The locator must outlive the sampler.
FieldSampler mesh_sampler(const TetLocator& locator);

/// Sampler evaluating the analytic definition directly.
FieldSampler analytic_sampler(AnalyticField f);

}  // namespace tensortopo
