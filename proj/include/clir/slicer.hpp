#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "clir/mesh.hpp"

namespace clir {

using Vec2 = Eigen::Vector2d;

/// Polyline in the (y, z) coordinates of a slicing plane.
struct Contour {
  std::vector<Vec2> points;
  bool closed = false;
};

struct PlaneSlice {
  double x_position = 0.0;  // plane actually used, after any coincidence nudge
  std::vector<Contour> contours;
};

// Square region of the (y, z) plane covered by an image.
struct Window {
  double min = -1.2;
  double max = 1.2;

  friend bool operator==(const Window&, const Window&) = default;
};

/// Square binary bitmap. Column index runs along y, row index along z.
class BinaryImage {
 public:
  BinaryImage(int resolution, Window window = {});

  int width() const { return size_; }
  int height() const { return size_; }
  const Window& window() const { return window_; }

  bool at(int col, int row) const { return bits_[index(col, row)] != 0; }
  void set(int col, int row, bool value = true) { bits_[index(col, row)] = value ? 1 : 0; }

  std::size_t count() const;
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

 private:
  std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(size_) + static_cast<std::size_t>(col);
  }

  int size_;
  Window window_;
  std::vector<std::uint8_t> bits_;
};

struct LevelImage {
  std::size_t plane_index;
  double x_position;
  BinaryImage image;
};

inline constexpr int kDefaultPlanes = 300;
inline constexpr int kDefaultResolution = 256;

/// Cell-centred, equally spaced plane positions over the mesh's X extent.
std::vector<double> slice_positions(const TriangleMesh& mesh, int n);

/// Cross-section of the mesh with the plane x = const, chained into
/// polylines. Chains that do not close are returned with closed = false.
PlaneSlice intersect_plane(const TriangleMesh& mesh, double x);

/// Even-odd fill of closed contours; open chains are stroked one pixel wide.
/// Returns nothing when no pixel is set.
std::optional<BinaryImage> rasterize_slice(const PlaneSlice& slice, int resolution,
                                           Window window = {});

/// Slices at every plane position, skipping empty images. Planes are
/// processed in parallel; output is ordered by x.
std::vector<LevelImage> extract_level_images(const TriangleMesh& mesh, int n_planes,
                                             int resolution);

/// Binary PGM (P5), 0 for background and 255 for set pixels.
void write_pgm(const std::filesystem::path& path, const BinaryImage& image);

namespace serial {
std::vector<LevelImage> extract_level_images(const TriangleMesh& mesh, int n_planes,
                                             int resolution);
}

}  // namespace clir
