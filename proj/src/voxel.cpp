#include "clir/voxel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <optional>

#include "clir/error.hpp"

namespace clir {

namespace {

// Ray offsets keep cell-centre rays off mesh edges and vertices that sit on
// the regular lattice of the test solids.
constexpr double kRayOffsetY = 3.14159e-7;
constexpr double kRayOffsetZ = 1.41421e-7;

struct ProjectedTriangle {
  Vec3 a, b, c;
  double ymin, ymax, zmin, zmax;
};

std::vector<ProjectedTriangle> project(const TriangleMesh& mesh) {
  std::vector<ProjectedTriangle> out;
  out.reserve(mesh.triangle_count());
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    ProjectedTriangle p{mesh.corner(t, 0), mesh.corner(t, 1), mesh.corner(t, 2), 0, 0, 0, 0};
    p.ymin = std::min({p.a.y(), p.b.y(), p.c.y()});
    p.ymax = std::max({p.a.y(), p.b.y(), p.c.y()});
    p.zmin = std::min({p.a.z(), p.b.z(), p.c.z()});
    p.zmax = std::max({p.a.z(), p.b.z(), p.c.z()});
    out.push_back(p);
  }
  return out;
}

// X coordinate where the line {(t, y, z)} pierces the triangle, if it does.
std::optional<double> pierce(const ProjectedTriangle& t, double y, double z) {
  const double w0 = (t.b.y() - y) * (t.c.z() - z) - (t.c.y() - y) * (t.b.z() - z);
  const double w1 = (t.c.y() - y) * (t.a.z() - z) - (t.a.y() - y) * (t.c.z() - z);
  const double w2 = (t.a.y() - y) * (t.b.z() - z) - (t.b.y() - y) * (t.a.z() - z);
  const bool pos = w0 > 0 && w1 > 0 && w2 > 0;
  const bool neg = w0 < 0 && w1 < 0 && w2 < 0;
  if (!pos && !neg) return std::nullopt;
  const double sum = w0 + w1 + w2;
  return (w0 * t.a.x() + w1 * t.b.x() + w2 * t.c.x()) / sum;
}

// Returns false when any ray in the slab crossed the surface an odd number of times.
bool fill_slab_by_parity(VoxelGrid& grid, const std::vector<ProjectedTriangle>& tris, int k) {
  const int r = grid.resolution;
  const double z = grid.center(k) + kRayOffsetZ;
  std::vector<const ProjectedTriangle*> candidates;
  for (const auto& t : tris) {
    if (t.zmin <= z && z <= t.zmax) candidates.push_back(&t);
  }
  bool even = true;
  std::vector<double> hits;
  for (int j = 0; j < r; ++j) {
    const double y = grid.center(j) + kRayOffsetY;
    hits.clear();
    for (const auto* t : candidates) {
      if (y < t->ymin || y > t->ymax) continue;
      if (auto x = pierce(*t, y, z)) hits.push_back(*x);
    }
    if (hits.size() % 2 != 0) {
      even = false;
      continue;
    }
    std::sort(hits.begin(), hits.end());
    for (std::size_t h = 0; h + 1 < hits.size(); h += 2) {
      for (int i = 0; i < r; ++i) {
        const double x = grid.center(i);
        if (x >= hits[h] && x < hits[h + 1]) grid.values[grid.index(i, j, k)] = 1.0;
      }
    }
  }
  return even;
}

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + ab * (d1 / (d1 - d3));
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + ac * (d2 / (d2 - d6));
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

void fill_slab_by_surface(VoxelGrid& grid, const std::vector<ProjectedTriangle>& tris, int k) {
  const int r = grid.resolution;
  const double h = grid.cell_size();
  const double radius = 0.5 * std::sqrt(3.0) * h;
  const double z = grid.center(k);
  auto cell_of = [&](double v) { return static_cast<int>(std::floor((v + 1.0) / h)); };
  for (const auto& t : tris) {
    if (z < t.zmin - radius || z > t.zmax + radius) continue;
    const double xmin = std::min({t.a.x(), t.b.x(), t.c.x()}) - radius;
    const double xmax = std::max({t.a.x(), t.b.x(), t.c.x()}) + radius;
    const int i0 = std::max(0, cell_of(xmin)), i1 = std::min(r - 1, cell_of(xmax));
    const int j0 = std::max(0, cell_of(t.ymin - radius)), j1 = std::min(r - 1, cell_of(t.ymax + radius));
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        const Vec3 p(grid.center(i), grid.center(j), z);
        if ((closest_point_on_triangle(p, t.a, t.b, t.c) - p).norm() <= radius) {
          grid.values[grid.index(i, j, k)] = 1.0;
        }
      }
    }
  }
}

void mask_ball(VoxelGrid& grid, int k) {
  const int r = grid.resolution;
  const double z = grid.center(k);
  for (int j = 0; j < r; ++j) {
    const double y = grid.center(j);
    for (int i = 0; i < r; ++i) {
      const double x = grid.center(i);
      if (x * x + y * y + z * z > 1.0) grid.values[grid.index(i, j, k)] = 0.0;
    }
  }
}

// Every undirected edge must be shared by an even number of triangles. Rays
// can miss the boundary of an open sheet entirely, so parity alone does not
// catch it.
bool closed_surface(const TriangleMesh& mesh) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> uses;
  for (const auto& t : mesh.triangles()) {
    for (int e = 0; e < 3; ++e) {
      const auto a = t[e], b = t[(e + 1) % 3];
      ++uses[{std::min(a, b), std::max(a, b)}];
    }
  }
  return std::all_of(uses.begin(), uses.end(), [](const auto& kv) { return kv.second % 2 == 0; });
}

VoxelGrid empty_grid(int resolution) {
  if (resolution < 2) throw Error(ErrorCode::ConfigError, "voxel resolution below 2");
  VoxelGrid grid;
  grid.resolution = resolution;
  grid.values.assign(static_cast<std::size_t>(resolution) * resolution * resolution, 0.0);
  return grid;
}

void check_order(int order) {
  if (order < 0) throw Error(ErrorCode::ConfigError, "negative moment order");
}

}  // namespace

std::size_t VoxelGrid::occupied() const {
  return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [](double v) { return v != 0.0; }));
}

MomentTable::MomentTable(int order)
    : order_(order), values_(static_cast<std::size_t>(order + 1) * (order + 1) * (order + 1), 0.0) {}

VoxelGrid voxelize_solid(const TriangleMesh& mesh, int resolution) {
  VoxelGrid grid = empty_grid(resolution);
  const auto tris = project(mesh);
  bool watertight = closed_surface(mesh);
#pragma omp parallel for schedule(dynamic) reduction(&& : watertight)
  for (int k = 0; k < resolution; ++k) watertight = fill_slab_by_parity(grid, tris, k) && watertight;

  if (!watertight) {
    std::fill(grid.values.begin(), grid.values.end(), 0.0);
    grid.watertight_fallback = true;
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < resolution; ++k) fill_slab_by_surface(grid, tris, k);
  }
#pragma omp parallel for
  for (int k = 0; k < resolution; ++k) mask_ball(grid, k);
  return grid;
}

MomentTable geometric_moments(const VoxelGrid& grid, int order) {
  check_order(order);
  const int r = grid.resolution;
  const auto slots = static_cast<std::size_t>(order + 1);
  // Separable accumulation per z slab; slabs are summed in index order so the
  // result does not depend on the thread count.
  std::vector<MomentTable> slabs(static_cast<std::size_t>(r), MomentTable(order));
#pragma omp parallel for schedule(static)
  for (int k = 0; k < r; ++k) {
    std::vector<double> row_sums(slots);    // sum_i f x^a along one row
    std::vector<double> plane(slots * slots, 0.0);  // sum_j y^b row_sums[a]
    std::vector<double> xp(slots), yp(slots), zp(slots);
    for (int j = 0; j < r; ++j) {
      std::fill(row_sums.begin(), row_sums.end(), 0.0);
      bool any = false;
      for (int i = 0; i < r; ++i) {
        const double f = grid.at(i, j, k);
        if (f == 0.0) continue;
        any = true;
        double pw = f;
        const double x = grid.center(i);
        for (std::size_t a = 0; a < slots; ++a, pw *= x) row_sums[a] += pw;
      }
      if (!any) continue;
      const double y = grid.center(j);
      yp[0] = 1.0;
      for (std::size_t b = 1; b < slots; ++b) yp[b] = yp[b - 1] * y;
      for (std::size_t a = 0; a < slots; ++a) {
        for (std::size_t b = 0; a + b < slots; ++b) plane[a * slots + b] += row_sums[a] * yp[b];
      }
    }
    const double z = grid.center(k);
    zp[0] = 1.0;
    for (std::size_t c = 1; c < slots; ++c) zp[c] = zp[c - 1] * z;
    auto& slab = slabs[static_cast<std::size_t>(k)];
    for (int a = 0; a <= order; ++a) {
      for (int b = 0; a + b <= order; ++b) {
        for (int c = 0; a + b + c <= order; ++c) slab.at(a, b, c) = plane[static_cast<std::size_t>(a) * slots + b] * zp[c];
      }
    }
  }
  MomentTable out(order);
  const double dv = grid.cell_volume();
  for (int a = 0; a <= order; ++a) {
    for (int b = 0; a + b <= order; ++b) {
      for (int c = 0; a + b + c <= order; ++c) {
        double sum = 0.0;
        for (const auto& slab : slabs) sum += slab.at(a, b, c);
        out.at(a, b, c) = sum * dv;
      }
    }
  }
  return out;
}

namespace serial {

VoxelGrid voxelize_solid(const TriangleMesh& mesh, int resolution) {
  VoxelGrid grid = empty_grid(resolution);
  const auto tris = project(mesh);
  bool watertight = closed_surface(mesh);
  for (int k = 0; k < resolution; ++k) watertight = fill_slab_by_parity(grid, tris, k) && watertight;
  if (!watertight) {
    std::fill(grid.values.begin(), grid.values.end(), 0.0);
    grid.watertight_fallback = true;
    for (int k = 0; k < resolution; ++k) fill_slab_by_surface(grid, tris, k);
  }
  for (int k = 0; k < resolution; ++k) mask_ball(grid, k);
  return grid;
}

MomentTable geometric_moments(const VoxelGrid& grid, int order) {
  check_order(order);
  const int r = grid.resolution;
  MomentTable out(order);
  for (int k = 0; k < r; ++k) {
    for (int j = 0; j < r; ++j) {
      for (int i = 0; i < r; ++i) {
        const double f = grid.at(i, j, k);
        if (f == 0.0) continue;
        const double x = grid.center(i), y = grid.center(j), z = grid.center(k);
        for (int a = 0; a <= order; ++a) {
          for (int b = 0; a + b <= order; ++b) {
            for (int c = 0; a + b + c <= order; ++c) {
              out.at(a, b, c) += f * std::pow(x, a) * std::pow(y, b) * std::pow(z, c);
            }
          }
        }
      }
    }
  }
  const double dv = grid.cell_volume();
  for (int a = 0; a <= order; ++a) {
    for (int b = 0; a + b <= order; ++b) {
      for (int c = 0; a + b + c <= order; ++c) out.at(a, b, c) *= dv;
    }
  }
  return out;
}

}  // namespace serial

}  // namespace clir
