#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "clir/error.hpp"
#include "clir/mesh.hpp"
#include "clir/primitives.hpp"

using namespace clir;

namespace {

const char* kTetra =
    "OFF\n"
    "4 4 6\n"
    "0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
    "3 0 2 1\n3 0 1 3\n3 0 3 2\n3 1 2 3\n";

const char* kCube =
    "OFF\n"
    "# unit cube, quads\n"
    "8 6 12\n"
    "0 0 0\n1 0 0\n1 1 0\n0 1 0\n0 0 1\n1 0 1\n1 1 1\n0 1 1\n"
    "4 0 3 2 1\n4 4 5 6 7\n4 0 1 5 4\n4 2 3 7 6\n4 1 2 6 5\n4 0 4 7 3\n";

ErrorCode code_of(const std::string& text) {
  try {
    parse_off_string(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("tetrahedron reads back") {
  const auto m = parse_off_string(kTetra);
  CHECK(m.vertex_count() == 4);
  CHECK(m.triangle_count() == 4);
}

TEST_CASE("quad cube is fan triangulated") {
  const auto m = parse_off_string(kCube);
  CHECK(m.vertex_count() == 8);
  CHECK(m.triangle_count() == 12);
  CHECK(total_area(m) == doctest::Approx(6.0).epsilon(1e-12));
  const auto box = bounding_box(m);
  CHECK(box.min == Vec3(0, 0, 0));
  CHECK(box.max == Vec3(1, 1, 1));
}

TEST_CASE("header variants") {
  // byte-order mark, comments, counts on the header line, colour fields
  const std::string text = "\xEF\xBB\xBF# comment\nOFF 3 1 0\n0 0 0\n1 0 0\n0 1 0 # trailing\n3 0 1 2 255 0 0\n";
  const auto m = parse_off_string(text);
  CHECK(m.triangle_count() == 1);
}

TEST_CASE("malformed inputs") {
  CHECK(code_of("PLY\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n") == ErrorCode::MalformedHeader);
  CHECK(code_of("") == ErrorCode::MalformedHeader);
  CHECK(code_of("OFF\n4 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n") == ErrorCode::CountMismatch);
  CHECK(code_of("OFF\n3 2 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n") == ErrorCode::CountMismatch);

  std::string cube(kCube);
  cube.replace(cube.find("4 0 3 2 1"), 9, "3 0 1 9");
  CHECK(code_of(cube) == ErrorCode::IndexOutOfRange);
}

TEST_CASE("triangle areas") {
  const TriangleMesh right({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}});
  CHECK(triangle_area(right, 0) == 0.5);

  const TriangleMesh flat({{0, 0, 0}, {1, 0, 0}, {0, 0, 0}, {0, 1, 0}}, {{0, 1, 2}});
  CHECK(triangle_area(flat, 0) == 0.0);

  const TriangleMesh equi({{0, 0, 0}, {2, 0, 0}, {1, std::sqrt(3.0), 0}}, {{0, 1, 2}});
  CHECK(triangle_area(equi, 0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("bounding box") {
  const TriangleMesh tri({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}});
  CHECK(bounding_box(tri).min == Vec3(0, 0, 0));
  CHECK(bounding_box(tri).max == Vec3(1, 1, 0));

  const auto m = primitives::icosphere(2);
  const Vec3 t(3, -4, 0.5);
  const auto moved = transformed(m, Mat3::Identity(), t, 1.0);
  CHECK((bounding_box(moved).min - (bounding_box(m).min + t)).norm() < 1e-12);
  CHECK((bounding_box(moved).max - (bounding_box(m).max + t)).norm() < 1e-12);
}

TEST_CASE("mesh constructor rejects bad indices") {
  CHECK_THROWS_AS(TriangleMesh({{0, 0, 0}}, {{0, 0, 1}}), Error);
}

TEST_CASE("write then parse round-trips") {
  const auto m = primitives::ellipsoid(3, 2, 1, 2);
  std::ostringstream out;
  write_off(out, m);
  const auto back = parse_off_string(out.str());
  REQUIRE(back.vertex_count() == m.vertex_count());
  CHECK(back.triangles() == m.triangles());
  double worst = 0;
  for (std::size_t i = 0; i < m.vertex_count(); ++i) {
    worst = std::max(worst, (back.vertices()[i] - m.vertices()[i]).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-8 * 3);
}

TEST_CASE("area is invariant under rigid motion") {
  std::mt19937_64 rng(7);
  const auto m = primitives::box(4, 2, 1, 3);
  const double a = total_area(m);
  for (int i = 0; i < 5; ++i) {
    const auto moved = transformed(m, primitives::random_rotation(rng), Vec3(1, 2, 3), 1.0);
    CHECK(std::abs(total_area(moved) - a) <= 1e-9 * a);
  }
}

TEST_CASE("fan triangulation keeps polygon area") {
  // regular hexagon of side 1, area 3*sqrt(3)/2
  std::string text = "OFF\n6 1 0\n";
  for (int k = 0; k < 6; ++k) {
    text += std::to_string(std::cos(k * M_PI / 3)) + " " + std::to_string(std::sin(k * M_PI / 3)) + " 0\n";
  }
  text += "6 0 1 2 3 4 5\n";
  const auto m = parse_off_string(text);
  CHECK(m.triangle_count() == 4);
  // the polygon is built from the printed (rounded) coordinates
  double shoelace = 0;
  for (int k = 0; k < 6; ++k) {
    const auto& p = m.vertices()[k];
    const auto& q = m.vertices()[(k + 1) % 6];
    shoelace += p.x() * q.y() - q.x() * p.y();
  }
  CHECK(std::abs(total_area(m) - shoelace / 2) <= 1e-9 * shoelace / 2);
}
