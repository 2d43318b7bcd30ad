#include "clir/mesh.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "clir/error.hpp"

namespace clir {

TriangleMesh::TriangleMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles,
                           std::string source_id)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)),
      source_id_(std::move(source_id)) {
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (auto idx : tri) {
      if (idx >= vertices_.size()) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "triangle " + std::to_string(t) + " references vertex " + std::to_string(idx) +
                        " of " + std::to_string(vertices_.size()));
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw Error(ErrorCode::InvalidMesh, "triangle " + std::to_string(t) + " repeats a vertex");
    }
  }
}

namespace {

// Yields the next line that is neither blank nor a '#' comment, with any
// trailing comment stripped.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      if (first_) {
        first_ = false;
        if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
            static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF) {
          line.erase(0, 3);
        }
      }
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      return true;
    }
    return false;
  }

  int line_no() const { return line_no_; }

 private:
  std::istream& in_;
  int line_no_ = 0;
  bool first_ = true;
};

}  // namespace

TriangleMesh parse_off(std::istream& in, std::string source_id) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) throw Error(ErrorCode::MalformedHeader, "empty input");

  std::istringstream header(line);
  std::string magic;
  header >> magic;
  if (magic != "OFF") throw Error(ErrorCode::MalformedHeader, "first token is '" + magic + "'");

  // Some writers put the counts on the header line itself.
  long long nv = -1, nf = -1, ne = 0;
  if (!(header >> nv >> nf)) {
    if (!reader.next(line)) throw Error(ErrorCode::MalformedHeader, "missing count line");
    std::istringstream counts(line);
    if (!(counts >> nv >> nf)) throw Error(ErrorCode::MalformedHeader, "unreadable count line");
    counts >> ne;
  }
  if (nv < 0 || nf < 0) throw Error(ErrorCode::MalformedHeader, "negative counts");

  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>(nv));
  for (long long i = 0; i < nv; ++i) {
    if (!reader.next(line)) {
      throw Error(ErrorCode::CountMismatch, "expected " + std::to_string(nv) + " vertices, got " +
                                                std::to_string(i));
    }
    std::istringstream ls(line);
    double x, y, z;
    if (!(ls >> x >> y >> z)) {
      throw Error(ErrorCode::CountMismatch, "bad vertex line " + std::to_string(reader.line_no()));
    }
    vertices.emplace_back(x, y, z);
  }

  std::vector<Triangle> triangles;
  triangles.reserve(static_cast<std::size_t>(nf));
  std::vector<long long> poly;
  for (long long f = 0; f < nf; ++f) {
    if (!reader.next(line)) {
      throw Error(ErrorCode::CountMismatch, "expected " + std::to_string(nf) + " faces, got " +
                                                std::to_string(f));
    }
    std::istringstream ls(line);
    long long n = 0;
    if (!(ls >> n) || n < 3) {
      throw Error(ErrorCode::CountMismatch, "bad face line " + std::to_string(reader.line_no()));
    }
    poly.resize(static_cast<std::size_t>(n));
    for (auto& idx : poly) {
      if (!(ls >> idx)) {
        throw Error(ErrorCode::CountMismatch,
                    "face line " + std::to_string(reader.line_no()) + " has too few indices");
      }
      if (idx < 0 || idx >= nv) {
        throw Error(ErrorCode::IndexOutOfRange, "face " + std::to_string(f) + " references vertex " +
                                                    std::to_string(idx));
      }
    }
    for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
      Triangle tri{static_cast<std::uint32_t>(poly[0]), static_cast<std::uint32_t>(poly[k]),
                   static_cast<std::uint32_t>(poly[k + 1])};
      // Collapsed fan pieces carry no surface.
      if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) continue;
      triangles.push_back(tri);
    }
  }
  if (reader.next(line)) {
    std::istringstream ls(line);
    double dummy;
    if (ls >> dummy) throw Error(ErrorCode::CountMismatch, "trailing data after declared faces");
  }
  if (triangles.empty()) throw Error(ErrorCode::CountMismatch, "mesh has no usable triangles");

  return TriangleMesh(std::move(vertices), std::move(triangles), std::move(source_id));
}

TriangleMesh parse_off_string(const std::string& text, std::string source_id) {
  std::istringstream in(text);
  return parse_off(in, std::move(source_id));
}

TriangleMesh read_off_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return parse_off(in, path.stem().string());
}

void write_off(std::ostream& out, const TriangleMesh& mesh) {
  out << "OFF\n" << mesh.vertex_count() << ' ' << mesh.triangle_count() << " 0\n";
  out << std::setprecision(9);
  for (const auto& v : mesh.vertices()) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void write_off_file(const std::filesystem::path& path, const TriangleMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::UnwritableOutput, "cannot write " + path.string());
  write_off(out, mesh);
}

double triangle_area(const TriangleMesh& mesh, std::size_t i) {
  if (i >= mesh.triangle_count()) throw Error(ErrorCode::IndexOutOfRange, "triangle index");
  const Vec3& a = mesh.corner(i, 0);
  return 0.5 * (mesh.corner(i, 1) - a).cross(mesh.corner(i, 2) - a).norm();
}

double total_area(const TriangleMesh& mesh) {
  double sum = 0.0;
  for (std::size_t i = 0; i < mesh.triangle_count(); ++i) sum += triangle_area(mesh, i);
  return sum;
}

Vec3 triangle_centroid(const TriangleMesh& mesh, std::size_t i) {
  return (mesh.corner(i, 0) + mesh.corner(i, 1) + mesh.corner(i, 2)) / 3.0;
}

BoundingBox bounding_box(const TriangleMesh& mesh) {
  if (mesh.vertices().empty()) throw Error(ErrorCode::InvalidMesh, "bounding box of empty mesh");
  BoundingBox box{mesh.vertices().front(), mesh.vertices().front()};
  for (const auto& v : mesh.vertices()) {
    box.min = box.min.cwiseMin(v);
    box.max = box.max.cwiseMax(v);
  }
  return box;
}

TriangleMesh transformed(const TriangleMesh& mesh, const Mat3& rotation, const Vec3& translation,
                         double scale) {
  std::vector<Vec3> vertices;
  vertices.reserve(mesh.vertex_count());
  for (const auto& v : mesh.vertices()) vertices.push_back(scale * (rotation * v) + translation);
  return TriangleMesh(std::move(vertices), mesh.triangles(), mesh.source_id());
}

}  // namespace clir
