#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "clir/mesh.hpp"
#include "clir/primitives.hpp"

namespace clir::testing {

inline TriangleMesh base_shape(int which) {
  namespace p = primitives;
  switch (which) {
    case 0: return p::icosphere(3, 1.0);
    case 1: return p::box(4.0, 2.0, 1.0, 4);
    case 2: return p::ellipsoid(3.0, 2.0, 1.0, 4);
    case 3: return p::cylinder(0.5, 3.0, 48, 8);
    default: return p::two_spheres(1.0, 0.6, 3);
  }
}

inline const char* base_name(int which) {
  static const char* names[] = {"sphere", "box", "ellipsoid", "cylinder", "twosphere"};
  return names[which];
}

struct CorpusModel {
  TriangleMesh mesh;
  std::string label;
};

// classes x per_class instances: random similarity plus vertex jitter.
inline std::vector<CorpusModel> synthetic_corpus(int per_class, double jitter, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CorpusModel> out;
  for (int c = 0; c < 5; ++c) {
    const TriangleMesh base = base_shape(c);
    for (int i = 0; i < per_class; ++i) {
      TriangleMesh m = primitives::apply(base, primitives::random_similarity(rng));
      if (jitter > 0) m = primitives::jitter(m, jitter, rng);
      const std::string id = std::string(base_name(c)) + "_" + std::to_string(i);
      out.push_back({TriangleMesh(m.vertices(), m.triangles(), id), base_name(c)});
    }
  }
  return out;
}

// Uniform random points on the surface: triangle picked by area, then
// uniform barycentric coordinates.
inline std::vector<Vec3> sample_surface(const TriangleMesh& mesh, std::size_t n, std::mt19937_64& rng) {
  std::vector<double> areas;
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) areas.push_back(triangle_area(mesh, t));
  std::discrete_distribution<std::size_t> pick(areas.begin(), areas.end());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec3> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t t = pick(rng);
    const double s = std::sqrt(u(rng)), r = u(rng);
    out.push_back((1 - s) * mesh.corner(t, 0) + s * (1 - r) * mesh.corner(t, 1) + s * r * mesh.corner(t, 2));
  }
  return out;
}

// Same distribution, but each triangle gets its area share of the samples
// (rounded), which removes the between-triangle part of the sampling noise.
inline std::vector<Vec3> sample_surface_stratified(const TriangleMesh& mesh, std::size_t n, std::mt19937_64& rng) {
  const double total = total_area(mesh);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec3> out;
  out.reserve(n + mesh.triangle_count());
  double carry = 0;
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    carry += static_cast<double>(n) * triangle_area(mesh, t) / total;
    const auto take = static_cast<std::size_t>(carry);
    carry -= static_cast<double>(take);
    for (std::size_t i = 0; i < take; ++i) {
      const double s = std::sqrt(u(rng)), r = u(rng);
      out.push_back((1 - s) * mesh.corner(t, 0) + s * (1 - r) * mesh.corner(t, 1) + s * r * mesh.corner(t, 2));
    }
  }
  return out;
}

}  // namespace clir::testing
