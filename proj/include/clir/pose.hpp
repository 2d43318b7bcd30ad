#pragma once

#include <array>

#include "clir/mesh.hpp"

namespace clir {

// Maps a vertex v to rotation * (v - center) / scale.
struct PoseTransform {
  Vec3 center = Vec3::Zero();
  Mat3 rotation = Mat3::Identity();
  double scale = 1.0;

  Vec3 apply(const Vec3& v) const { return rotation * (v - center) / scale; }
};

struct CovarianceSummary {
  Mat3 matrix = Mat3::Zero();
  Vec3 eigenvalues = Vec3::Zero();    // descending
  Mat3 eigenvectors = Mat3::Identity();  // column k pairs with eigenvalues[k]
  bool degenerate_spectrum = false;
};

struct NormalizedPose {
  TriangleMesh mesh;
  PoseTransform transform;
  bool degenerate_spectrum = false;
  std::array<bool, 3> sign_ambiguous{};
};

/// Area-weighted mean of triangle centroids. Throws ZeroSurfaceArea.
Vec3 surface_center_of_gravity(const TriangleMesh& mesh);

/// Covariance of the surface treated as a uniform area distribution, using
/// the exact second moment of each linear triangle.
CovarianceSummary continuous_covariance(const TriangleMesh& mesh, const Vec3& center);

/// Area-weighted mean of |p| over the surface, 7-point rule per triangle.
double mean_surface_distance(const TriangleMesh& mesh, const Vec3& origin = Vec3::Zero());

/// Integral over the surface of c*|c| for one coordinate axis, exact per
/// triangle (each triangle is split where the coordinate changes sign).
double signed_square_integral(const TriangleMesh& mesh, int axis);

/// Translate to the surface centroid, rotate onto the principal axes
/// (largest variance on X), scale so the mean surface distance is one.
NormalizedPose normalize_pose(const TriangleMesh& mesh);

}  // namespace clir
