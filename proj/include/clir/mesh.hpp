#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace clir {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Triangle = std::array<std::uint32_t, 3>;

struct BoundingBox {
  Vec3 min;
  Vec3 max;

  Vec3 extent() const { return max - min; }
};

// Indexed triangle soup. Construction validates the index invariants, after
// which the mesh is treated as immutable.
class TriangleMesh {
 public:
  TriangleMesh() = default;
  TriangleMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles,
               std::string source_id = {});

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::string& source_id() const { return source_id_; }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t triangle_count() const { return triangles_.size(); }
  bool empty() const { return triangles_.empty(); }

  const Vec3& corner(std::size_t tri, int k) const { return vertices_[triangles_[tri][k]]; }

 private:
  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::string source_id_;
};

/// Reads an OFF mesh. Polygons with more than three corners are fan
/// triangulated from their first corner; colour or extra fields are ignored.
TriangleMesh parse_off(std::istream& in, std::string source_id = {});
TriangleMesh parse_off_string(const std::string& text, std::string source_id = {});
TriangleMesh read_off_file(const std::filesystem::path& path);

/// Writes vertices with 9 significant digits.
void write_off(std::ostream& out, const TriangleMesh& mesh);
void write_off_file(const std::filesystem::path& path, const TriangleMesh& mesh);

double triangle_area(const TriangleMesh& mesh, std::size_t i);
double total_area(const TriangleMesh& mesh);
Vec3 triangle_centroid(const TriangleMesh& mesh, std::size_t i);
BoundingBox bounding_box(const TriangleMesh& mesh);

// Applies v -> scale * rotation * v + translation to every vertex.
TriangleMesh transformed(const TriangleMesh& mesh, const Mat3& rotation, const Vec3& translation,
                         double scale = 1.0);

}  // namespace clir
