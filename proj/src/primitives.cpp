#include "clir/primitives.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include <Eigen/Geometry>

namespace clir::primitives {

namespace {

using std::numbers::pi;

struct Soup {
  std::vector<Vec3> v;
  std::vector<Triangle> t;

  std::uint32_t add(const Vec3& p) {
    v.push_back(p);
    return static_cast<std::uint32_t>(v.size() - 1);
  }
  void tri(std::uint32_t a, std::uint32_t b, std::uint32_t c) { t.push_back({a, b, c}); }
  void quad(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d) {
    tri(a, b, c);
    tri(a, c, d);
  }
};

Soup unit_icosphere(int subdivisions) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  Soup s;
  const double raw[12][3] = {{-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
                             {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
                             {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1}};
  for (const auto& p : raw) s.add(Vec3(p[0], p[1], p[2]).normalized());
  s.t = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
         {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
         {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoints;
    auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
      auto key = std::minmax(a, b);
      auto it = midpoints.find(key);
      if (it != midpoints.end()) return it->second;
      auto idx = s.add(((s.v[a] + s.v[b]) * 0.5).normalized());
      midpoints.emplace(key, idx);
      return idx;
    };
    std::vector<Triangle> next;
    next.reserve(s.t.size() * 4);
    for (const auto& tri : s.t) {
      auto ab = midpoint(tri[0], tri[1]);
      auto bc = midpoint(tri[1], tri[2]);
      auto ca = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], ab, ca});
      next.push_back({tri[1], bc, ab});
      next.push_back({tri[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    s.t = std::move(next);
  }
  return s;
}

}  // namespace

TriangleMesh icosphere(int subdivisions, double radius, const Vec3& center) {
  Soup s = unit_icosphere(subdivisions);
  for (auto& p : s.v) p = center + radius * p;
  return TriangleMesh(std::move(s.v), std::move(s.t), "icosphere");
}

TriangleMesh ellipsoid(double a, double b, double c, int subdivisions) {
  Soup s = unit_icosphere(subdivisions);
  for (auto& p : s.v) p = Vec3(a * p.x(), b * p.y(), c * p.z());
  return TriangleMesh(std::move(s.v), std::move(s.t), "ellipsoid");
}

TriangleMesh box(double sx, double sy, double sz, int subdivisions) {
  const int n = std::max(1, subdivisions);
  const Vec3 half(sx / 2, sy / 2, sz / 2);
  Soup s;
  // Each face is an (n+1)^2 vertex grid; shared edges are welded by index.
  std::map<std::array<int, 3>, std::uint32_t> lattice;
  auto vertex = [&](int i, int j, int k) {
    std::array<int, 3> key{i, j, k};
    auto it = lattice.find(key);
    if (it != lattice.end()) return it->second;
    Vec3 p(-half.x() + sx * i / n, -half.y() + sy * j / n, -half.z() + sz * k / n);
    auto idx = s.add(p);
    lattice.emplace(key, idx);
    return idx;
  };
  for (int axis = 0; axis < 3; ++axis) {
    const int u = (axis + 1) % 3, w = (axis + 2) % 3;
    for (int side = 0; side <= 1; ++side) {
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          auto at = [&](int da, int db) {
            std::array<int, 3> ijk{};
            ijk[axis] = side * n;
            ijk[u] = a + da;
            ijk[w] = b + db;
            return vertex(ijk[0], ijk[1], ijk[2]);
          };
          if (side == 1) s.quad(at(0, 0), at(1, 0), at(1, 1), at(0, 1));
          else s.quad(at(0, 0), at(0, 1), at(1, 1), at(1, 0));
        }
      }
    }
  }
  return TriangleMesh(std::move(s.v), std::move(s.t), "box");
}

TriangleMesh cylinder(double radius, double height, int segments, int rings) {
  Soup s;
  rings = std::max(1, rings);
  // Axis along X so the canonical frame is reached without ambiguity in X.
  std::vector<std::vector<std::uint32_t>> ring_idx(rings + 1);
  for (int r = 0; r <= rings; ++r) {
    const double x = -height / 2 + height * r / rings;
    for (int k = 0; k < segments; ++k) {
      const double a = 2 * pi * k / segments;
      ring_idx[r].push_back(s.add(Vec3(x, radius * std::cos(a), radius * std::sin(a))));
    }
  }
  for (int r = 0; r < rings; ++r) {
    for (int k = 0; k < segments; ++k) {
      const int k1 = (k + 1) % segments;
      s.quad(ring_idx[r][k], ring_idx[r][k1], ring_idx[r + 1][k1], ring_idx[r + 1][k]);
    }
  }
  const auto c0 = s.add(Vec3(-height / 2, 0, 0));
  const auto c1 = s.add(Vec3(height / 2, 0, 0));
  for (int k = 0; k < segments; ++k) {
    const int k1 = (k + 1) % segments;
    s.tri(c0, ring_idx[0][k1], ring_idx[0][k]);
    s.tri(c1, ring_idx[rings][k], ring_idx[rings][k1]);
  }
  return TriangleMesh(std::move(s.v), std::move(s.t), "cylinder");
}

TriangleMesh two_spheres(double radius, double gap, int subdivisions) {
  Soup a = unit_icosphere(subdivisions);
  Soup s;
  const double offset = radius + gap / 2;
  for (double sign : {-1.0, 1.0}) {
    const auto base = static_cast<std::uint32_t>(s.v.size());
    for (const auto& p : a.v) s.add(Vec3(sign * offset, 0, 0) + radius * p);
    for (const auto& t : a.t) s.tri(base + t[0], base + t[1], base + t[2]);
  }
  return TriangleMesh(std::move(s.v), std::move(s.t), "two_spheres");
}

TriangleMesh tetrahedron() {
  std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  std::vector<Triangle> t{{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
  return TriangleMesh(std::move(v), std::move(t), "tetrahedron");
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Mat3 random_rotation(std::mt19937_64& rng) {
  // Shoemake's uniform unit quaternion.
  const double u1 = uniform01(rng), u2 = uniform01(rng), u3 = uniform01(rng);
  const double a = std::sqrt(1 - u1), b = std::sqrt(u1);
  Eigen::Quaterniond q(b * std::cos(2 * pi * u3), a * std::sin(2 * pi * u2), a * std::cos(2 * pi * u2),
                       b * std::sin(2 * pi * u3));
  return q.normalized().toRotationMatrix();
}

Mat3 rotation_about_z(double radians) {
  return Eigen::AngleAxisd(radians, Vec3::UnitZ()).toRotationMatrix();
}

Similarity random_similarity(std::mt19937_64& rng) {
  Similarity g;
  g.rotation = random_rotation(rng);
  g.translation = Vec3(uniform01(rng) - 0.5, uniform01(rng) - 0.5, uniform01(rng) - 0.5) * 20.0;
  g.scale = std::exp(std::log(0.2) + uniform01(rng) * (std::log(5.0) - std::log(0.2)));
  return g;
}

TriangleMesh apply(const TriangleMesh& mesh, const Similarity& g) {
  return transformed(mesh, g.rotation, g.translation, g.scale);
}

TriangleMesh jitter(const TriangleMesh& mesh, double amplitude, std::mt19937_64& rng) {
  Vec3 mean = Vec3::Zero();
  for (const auto& v : mesh.vertices()) mean += v;
  mean /= static_cast<double>(mesh.vertex_count());
  double radius = 0.0;
  for (const auto& v : mesh.vertices()) radius += (v - mean).norm();
  radius /= static_cast<double>(mesh.vertex_count());

  const double step = amplitude * radius;
  std::vector<Vec3> vertices = mesh.vertices();
  for (auto& v : vertices) {
    for (int k = 0; k < 3; ++k) v[k] += step * (2 * uniform01(rng) - 1);
  }
  return TriangleMesh(std::move(vertices), mesh.triangles(), mesh.source_id());
}

}  // namespace clir::primitives
