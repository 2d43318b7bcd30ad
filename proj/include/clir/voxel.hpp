#pragma once

#include <vector>

#include "clir/mesh.hpp"

namespace clir {

/// Occupancy samples on the cube [-1, 1]^3, one per cell centre. Cells whose
/// centre lies outside the unit ball are always zero.
struct VoxelGrid {
  int resolution = 0;
  std::vector<double> values;  // x fastest, then y, then z
  bool watertight_fallback = false;

  double cell_size() const { return 2.0 / resolution; }
  double cell_volume() const { return cell_size() * cell_size() * cell_size(); }
  double center(int i) const { return -1.0 + (i + 0.5) * cell_size(); }
  std::size_t index(int i, int j, int k) const {
    const auto r = static_cast<std::size_t>(resolution);
    return static_cast<std::size_t>(i) + r * (static_cast<std::size_t>(j) + r * static_cast<std::size_t>(k));
  }
  double at(int i, int j, int k) const { return values[index(i, j, k)]; }
  std::size_t occupied() const;
};

/// Geometric moments M_rst for r + s + t <= order.
class MomentTable {
 public:
  explicit MomentTable(int order = 0);

  int order() const { return order_; }
  double& at(int r, int s, int t) { return values_[slot(r, s, t)]; }
  double at(int r, int s, int t) const { return values_[slot(r, s, t)]; }

 private:
  std::size_t slot(int r, int s, int t) const {
    const auto n = static_cast<std::size_t>(order_ + 1);
    return (static_cast<std::size_t>(r) * n + static_cast<std::size_t>(s)) * n + static_cast<std::size_t>(t);
  }

  int order_;
  std::vector<double> values_;
};

/// Solid occupancy by X-ray parity against the triangles. A ray with odd
/// parity marks the mesh as open; the grid then falls back to marking cells
/// within half a cell diagonal of the surface.
VoxelGrid voxelize_solid(const TriangleMesh& mesh, int resolution);

/// Cell-centre rule: M_rst = sum f * x^r y^s z^t * cell volume.
MomentTable geometric_moments(const VoxelGrid& grid, int order);

namespace serial {
VoxelGrid voxelize_solid(const TriangleMesh& mesh, int resolution);
MomentTable geometric_moments(const VoxelGrid& grid, int order);
}  // namespace serial

}  // namespace clir
