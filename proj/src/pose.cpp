#include "clir/pose.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "clir/error.hpp"
#include "clir/quadrature.hpp"

namespace clir {

namespace {

constexpr double kSpectrumGap = 1e-9;
constexpr double kSignThreshold = 1e-9;

// Integral of h^2 over a triangle where h is linear with corner values h.
double square_integral(const std::array<double, 3>& h, double area) {
  const double sum = h[0] + h[1] + h[2];
  return area / 12.0 * (h[0] * h[0] + h[1] * h[1] + h[2] * h[2] + sum * sum);
}

double signed_square_triangle(const std::array<double, 3>& h, double area) {
  int pos = 0, neg = 0;
  for (double v : h) {
    pos += v > 0;
    neg += v < 0;
  }
  const double whole = square_integral(h, area);
  if (neg == 0) return whole;
  if (pos == 0) return -whole;

  // The corner alone on its side of h = 0 cuts off a sub-triangle whose
  // area is area * t_j * t_k, with t the crossing fractions along its edges.
  const bool lone_positive = pos == 1;
  int i = 0;
  while (lone_positive ? !(h[i] > 0) : !(h[i] < 0)) ++i;
  const int j = (i + 1) % 3, k = (i + 2) % 3;
  const double tj = h[i] / (h[i] - h[j]);
  const double tk = h[i] / (h[i] - h[k]);
  const double lone = area * tj * tk * h[i] * h[i] / 6.0;
  const double sign = lone_positive ? 1.0 : -1.0;
  return sign * lone - sign * (whole - lone);
}

}  // namespace

Vec3 surface_center_of_gravity(const TriangleMesh& mesh) {
  Vec3 weighted = Vec3::Zero();
  double area = 0.0;
  for (std::size_t i = 0; i < mesh.triangle_count(); ++i) {
    const double a = triangle_area(mesh, i);
    weighted += a * triangle_centroid(mesh, i);
    area += a;
  }
  if (!(area > 0.0)) throw Error(ErrorCode::ZeroSurfaceArea, "mesh '" + mesh.source_id() + "'");
  return weighted / area;
}

CovarianceSummary continuous_covariance(const TriangleMesh& mesh, const Vec3& center) {
  Mat3 accum = Mat3::Zero();
  double area = 0.0;
  for (std::size_t i = 0; i < mesh.triangle_count(); ++i) {
    const double a = triangle_area(mesh, i);
    if (a == 0.0) continue;
    const Vec3 p = mesh.corner(i, 0) - center;
    const Vec3 q = mesh.corner(i, 1) - center;
    const Vec3 r = mesh.corner(i, 2) - center;
    const Vec3 s = p + q + r;
    accum += (a / 12.0) * (p * p.transpose() + q * q.transpose() + r * r.transpose() + s * s.transpose());
    area += a;
  }
  if (!(area > 0.0)) throw Error(ErrorCode::ZeroSurfaceArea, "mesh '" + mesh.source_id() + "'");

  CovarianceSummary out;
  out.matrix = accum / area;
  out.matrix = 0.5 * (out.matrix + out.matrix.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Mat3> solver(out.matrix);
  // Eigen sorts ascending.
  for (int k = 0; k < 3; ++k) {
    out.eigenvalues[k] = solver.eigenvalues()[2 - k];
    out.eigenvectors.col(k) = solver.eigenvectors().col(2 - k);
  }
  const double l1 = out.eigenvalues[0];
  out.degenerate_spectrum = (l1 - out.eigenvalues[1] < kSpectrumGap * l1) ||
                            (out.eigenvalues[1] - out.eigenvalues[2] < kSpectrumGap * l1);
  return out;
}

double mean_surface_distance(const TriangleMesh& mesh, const Vec3& origin) {
  const auto& rule = triangle_rule_deg5();
  double weighted = 0.0, area = 0.0;
  for (std::size_t i = 0; i < mesh.triangle_count(); ++i) {
    const double a = triangle_area(mesh, i);
    if (a == 0.0) continue;
    const Vec3 p = mesh.corner(i, 0) - origin;
    const Vec3 q = mesh.corner(i, 1) - origin;
    const Vec3 r = mesh.corner(i, 2) - origin;
    double integral = 0.0;
    for (const auto& pt : rule) {
      integral += pt.weight * (pt.bary[0] * p + pt.bary[1] * q + pt.bary[2] * r).norm();
    }
    weighted += a * integral;
    area += a;
  }
  if (!(area > 0.0)) throw Error(ErrorCode::ZeroSurfaceArea, "mesh '" + mesh.source_id() + "'");
  return weighted / area;
}

double signed_square_integral(const TriangleMesh& mesh, int axis) {
  double sum = 0.0;
  for (std::size_t i = 0; i < mesh.triangle_count(); ++i) {
    const double a = triangle_area(mesh, i);
    if (a == 0.0) continue;
    sum += signed_square_triangle(
        {mesh.corner(i, 0)[axis], mesh.corner(i, 1)[axis], mesh.corner(i, 2)[axis]}, a);
  }
  return sum;
}

NormalizedPose normalize_pose(const TriangleMesh& mesh) {
  NormalizedPose out;
  PoseTransform& pose = out.transform;
  pose.center = surface_center_of_gravity(mesh);

  const CovarianceSummary cov = continuous_covariance(mesh, pose.center);
  out.degenerate_spectrum = cov.degenerate_spectrum;
  pose.rotation = cov.eigenvectors.transpose();
  pose.scale = mean_surface_distance(mesh, pose.center);
  if (!(pose.scale > 0.0)) throw Error(ErrorCode::ZeroSurfaceArea, "zero mean distance");

  auto map_vertices = [&] {
    std::vector<Vec3> v;
    v.reserve(mesh.vertex_count());
    for (const auto& p : mesh.vertices()) v.push_back(pose.apply(p));
    return TriangleMesh(std::move(v), mesh.triangles(), mesh.source_id());
  };

  // Orient each axis so the heavier squared mass lies on its positive side.
  TriangleMesh candidate = map_vertices();
  const double area = total_area(candidate);
  bool flipped = false;
  for (int axis = 0; axis < 3; ++axis) {
    const double stat = signed_square_integral(candidate, axis) / area;
    if (std::abs(stat) < kSignThreshold) {
      out.sign_ambiguous[axis] = true;
    } else if (stat < 0.0) {
      pose.rotation.row(axis) *= -1.0;
      flipped = true;
    }
  }
  if (pose.rotation.determinant() < 0.0) {
    pose.rotation.row(2) *= -1.0;
    flipped = true;
  }
  out.mesh = flipped ? map_vertices() : std::move(candidate);
  return out;
}

}  // namespace clir
