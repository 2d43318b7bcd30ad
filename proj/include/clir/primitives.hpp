#pragma once

#include <cstdint>
#include <random>

#include "clir/mesh.hpp"

// Closed test solids and random similarity transforms. Used by the test
// suites, the benchmark and the synthetic retrieval corpus.
namespace clir::primitives {

TriangleMesh icosphere(int subdivisions, double radius = 1.0, const Vec3& center = Vec3::Zero());
TriangleMesh box(double sx, double sy, double sz, int subdivisions = 1);
TriangleMesh ellipsoid(double a, double b, double c, int subdivisions = 4);
TriangleMesh cylinder(double radius, double height, int segments = 64, int rings = 8);
TriangleMesh two_spheres(double radius, double gap, int subdivisions = 4);
TriangleMesh tetrahedron();

/// Uniform [0,1) draw that does not depend on the standard library's
/// distribution implementations.
double uniform01(std::mt19937_64& rng);

Mat3 random_rotation(std::mt19937_64& rng);
Mat3 rotation_about_z(double radians);

struct Similarity {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  double scale = 1.0;
};

Similarity random_similarity(std::mt19937_64& rng);
TriangleMesh apply(const TriangleMesh& mesh, const Similarity& g);

/// Moves each vertex coordinate by a uniform offset in
/// [-amplitude, amplitude] * (mean vertex distance to the vertex centroid).
TriangleMesh jitter(const TriangleMesh& mesh, double amplitude, std::mt19937_64& rng);

}  // namespace clir::primitives
