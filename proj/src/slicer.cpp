#include "clir/slicer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "clir/error.hpp"

namespace clir {

namespace {

constexpr double kChainTolerance = 1e-7;
constexpr double kPlaneNudge = 1e-9;
constexpr int kMaxResolution = 2048;

void check_resolution(int resolution) {
  if (resolution < 16 || resolution > kMaxResolution) {
    throw Error(ErrorCode::ConfigError,
                "resolution " + std::to_string(resolution) + " outside [16, 2048]");
  }
}

// Merges segment endpoints that lie within kChainTolerance of each other.
class NodeTable {
 public:
  std::size_t id(const Vec2& p) {
    const auto cy = static_cast<long long>(std::floor(p.x() / kChainTolerance));
    const auto cz = static_cast<long long>(std::floor(p.y() / kChainTolerance));
    for (long long dy = -1; dy <= 1; ++dy) {
      for (long long dz = -1; dz <= 1; ++dz) {
        auto it = cells_.find(key(cy + dy, cz + dz));
        if (it == cells_.end()) continue;
        for (std::size_t n : it->second) {
          if ((points_[n] - p).norm() <= kChainTolerance) return n;
        }
      }
    }
    points_.push_back(p);
    cells_[key(cy, cz)].push_back(points_.size() - 1);
    return points_.size() - 1;
  }

  const Vec2& point(std::size_t n) const { return points_[n]; }
  std::size_t size() const { return points_.size(); }

 private:
  static std::uint64_t key(long long a, long long b) {
    return static_cast<std::uint64_t>(a) * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(b);
  }

  std::vector<Vec2> points_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

// Crossing of edge (a, b) with the plane. Endpoints are put in a canonical
// order first so both triangles sharing the edge produce the same bits.
Vec2 edge_crossing(Vec3 a, Vec3 b, double x) {
  if (std::lexicographical_compare(b.data(), b.data() + 3, a.data(), a.data() + 3)) std::swap(a, b);
  const double t = (x - a.x()) / (b.x() - a.x());
  const Vec3 p = a + t * (b - a);
  return {p.y(), p.z()};
}

bool touches_vertex(const TriangleMesh& mesh, double x) {
  return std::any_of(mesh.vertices().begin(), mesh.vertices().end(),
                     [x](const Vec3& v) { return v.x() == x; });
}

std::vector<LevelImage> collect(std::vector<std::optional<LevelImage>>& slots) {
  std::vector<LevelImage> out;
  for (auto& s : slots) {
    if (s) out.push_back(std::move(*s));
  }
  return out;
}

std::optional<LevelImage> level_image_at(const TriangleMesh& mesh, std::size_t index, double x,
                                         int resolution) {
  auto image = rasterize_slice(intersect_plane(mesh, x), resolution);
  if (!image) return std::nullopt;
  return LevelImage{index, x, std::move(*image)};
}

}  // namespace

BinaryImage::BinaryImage(int resolution, Window window)
    : size_(resolution), window_(window),
      bits_(static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution), 0) {}

std::size_t BinaryImage::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<double> slice_positions(const TriangleMesh& mesh, int n) {
  if (n < 2) throw Error(ErrorCode::ConfigError, "need at least two planes");
  const BoundingBox box = bounding_box(mesh);
  const double lo = box.min.x(), hi = box.max.x();
  if (hi - lo < 1e-9) throw Error(ErrorCode::DegenerateExtent, "X extent below 1e-9");
  const double h = (hi - lo) / n;
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = lo + (i + 0.5) * h;
  return xs;
}

PlaneSlice intersect_plane(const TriangleMesh& mesh, double x) {
  PlaneSlice slice;
  for (int attempt = 0; attempt < 16 && touches_vertex(mesh, x); ++attempt) x += kPlaneNudge;
  slice.x_position = x;

  NodeTable nodes;
  std::vector<std::array<std::size_t, 2>> segments;
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const Vec3* c[3] = {&mesh.corner(t, 0), &mesh.corner(t, 1), &mesh.corner(t, 2)};
    const bool above[3] = {c[0]->x() > x, c[1]->x() > x, c[2]->x() > x};
    if (above[0] == above[1] && above[1] == above[2]) continue;
    Vec2 ends[2];
    int found = 0;
    for (int e = 0; e < 3; ++e) {
      const int f = (e + 1) % 3;
      if (above[e] != above[f]) ends[found++] = edge_crossing(*c[e], *c[f], x);
    }
    const std::size_t a = nodes.id(ends[0]);
    const std::size_t b = nodes.id(ends[1]);
    if (a != b) segments.push_back({a, b});
  }
  if (segments.empty()) return slice;

  std::vector<std::vector<std::size_t>> incident(nodes.size());
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s][0]].push_back(s);
    incident[segments[s][1]].push_back(s);
  }
  std::vector<bool> used(segments.size(), false);
  auto take_from = [&](std::size_t node) -> std::optional<std::size_t> {
    for (std::size_t s : incident[node]) {
      if (used[s]) continue;
      used[s] = true;
      return segments[s][0] == node ? segments[s][1] : segments[s][0];
    }
    return std::nullopt;
  };

  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    used[s] = true;
    std::vector<std::size_t> chain{segments[s][0], segments[s][1]};
    bool closed = false;
    while (auto next = take_from(chain.back())) {
      if (*next == chain.front()) {
        closed = true;
        break;
      }
      chain.push_back(*next);
    }
    if (!closed) {
      std::vector<std::size_t> head;
      while (auto prev = take_from(head.empty() ? chain.front() : head.back())) head.push_back(*prev);
      chain.insert(chain.begin(), head.rbegin(), head.rend());
    }
    Contour contour;
    contour.closed = closed && chain.size() >= 3;
    contour.points.reserve(chain.size());
    for (std::size_t n : chain) contour.points.push_back(nodes.point(n));
    slice.contours.push_back(std::move(contour));
  }
  return slice;
}

std::optional<BinaryImage> rasterize_slice(const PlaneSlice& slice, int resolution, Window window) {
  check_resolution(resolution);
  BinaryImage image(resolution, window);
  const double h = (window.max - window.min) / resolution;
  auto to_pixel = [&](double v) { return (v - window.min) / h; };

  std::vector<std::array<Vec2, 2>> edges;
  for (const auto& c : slice.contours) {
    if (!c.closed) continue;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      edges.push_back({c.points[i], c.points[(i + 1) % c.points.size()]});
    }
  }

  std::vector<double> crossings;
  for (int row = 0; row < resolution; ++row) {
    const double zc = window.min + (row + 0.5) * h;
    crossings.clear();
    for (const auto& [p, q] : edges) {
      if ((p.y() <= zc) == (q.y() <= zc)) continue;
      crossings.push_back(p.x() + (zc - p.y()) * (q.x() - p.x()) / (q.y() - p.y()));
    }
    std::sort(crossings.begin(), crossings.end());
    for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
      // Pixel centres in [ya, yb).
      const double first = std::ceil(to_pixel(crossings[k]) - 0.5);
      const double last = std::ceil(to_pixel(crossings[k + 1]) - 0.5) - 1;
      const int c0 = static_cast<int>(std::max(first, 0.0));
      const int c1 = static_cast<int>(std::min(last, static_cast<double>(resolution - 1)));
      for (int col = c0; col <= c1; ++col) image.set(col, row);
    }
  }

  for (const auto& c : slice.contours) {
    if (c.closed) continue;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      const Vec2& p = c.points[i];
      const Vec2& q = c.points[i + 1 < c.points.size() ? i + 1 : i];
      const int steps = 1 + static_cast<int>(std::ceil(4.0 * (q - p).norm() / h));
      for (int s = 0; s <= steps; ++s) {
        const Vec2 r = p + (q - p) * (static_cast<double>(s) / steps);
        const double col = std::floor(to_pixel(r.x()));
        const double row = std::floor(to_pixel(r.y()));
        if (col >= 0 && row >= 0 && col < resolution && row < resolution) {
          image.set(static_cast<int>(col), static_cast<int>(row));
        }
      }
    }
  }

  if (image.count() == 0) return std::nullopt;
  return image;
}

std::vector<LevelImage> extract_level_images(const TriangleMesh& mesh, int n_planes, int resolution) {
  check_resolution(resolution);
  const std::vector<double> xs = slice_positions(mesh, n_planes);
  std::vector<std::optional<LevelImage>> slots(xs.size());
  const auto count = static_cast<long>(xs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    slots[k] = level_image_at(mesh, k, xs[k], resolution);
  }
  return collect(slots);
}

namespace serial {

std::vector<LevelImage> extract_level_images(const TriangleMesh& mesh, int n_planes, int resolution) {
  check_resolution(resolution);
  const std::vector<double> xs = slice_positions(mesh, n_planes);
  std::vector<LevelImage> out;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (auto li = level_image_at(mesh, k, xs[k], resolution)) out.push_back(std::move(*li));
  }
  return out;
}

}  // namespace serial

void write_pgm(const std::filesystem::path& path, const BinaryImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::UnwritableOutput, "cannot write " + path.string());
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  std::vector<char> row(static_cast<std::size_t>(image.width()));
  for (int r = 0; r < image.height(); ++r) {
    for (int c = 0; c < image.width(); ++c) row[static_cast<std::size_t>(c)] = image.at(c, r) ? char(255) : char(0);
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

}  // namespace clir
