#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "clir/error.hpp"
#include "clir/pose.hpp"
#include "clir/primitives.hpp"
#include "clir/zernike.hpp"
#include "zernike_oracle.hpp"

using namespace clir;
using namespace clir::testing;

namespace {

Complex ball_inner_product(const ZernikeBasis& b, std::size_t p, std::size_t q, int res) {
  const VoxelGrid g = ball_grid(res);
  Complex sum(0, 0);
  for (int k = 0; k < res; ++k)
    for (int j = 0; j < res; ++j)
      for (int i = 0; i < res; ++i) {
        if (g.at(i, j, k) == 0) continue;
        const Vec3 x(g.center(i), g.center(j), g.center(k));
        sum += b.evaluate(p, x) * std::conj(b.evaluate(q, x));
      }
  return 3.0 / (4.0 * M_PI) * g.cell_volume() * sum;
}

}  // namespace

TEST_CASE("ball occupancy and moments") {
  const VoxelGrid g = ball_grid(64);
  const auto m = geometric_moments(g, 4);
  CHECK(m.at(0, 0, 0) == doctest::Approx(4 * M_PI / 3).epsilon(0.01));
  for (int r = 0; r <= 4; ++r)
    for (int s = 0; r + s <= 4; ++s)
      for (int t = 0; r + s + t <= 4; ++t)
        if (r % 2 || s % 2 || t % 2) CHECK(std::abs(m.at(r, s, t)) < 1e-3);
  const double trace = m.at(2, 0, 0) + m.at(0, 2, 0) + m.at(0, 0, 2);
  CHECK(trace == doctest::Approx(4 * M_PI / 5).epsilon(0.01));
}

TEST_CASE("voxelized sphere volume") {
  const auto s = primitives::icosphere(5, 0.8);
  const auto g = voxelize_solid(s, 64);
  CHECK(!g.watertight_fallback);
  const double fraction = static_cast<double>(g.occupied()) / (64.0 * 64 * 64);
  const double expected = 4.0 / 3 * M_PI * 0.512 / 8;
  CHECK(std::abs(fraction - expected) < 0.03 * expected);
}

TEST_CASE("open mesh falls back to a surface shell") {
  const TriangleMesh tri({{-0.5, -0.5, 0.1}, {0.5, -0.5, 0.1}, {0.0, 0.5, 0.1}}, {{0, 1, 2}});
  const auto g = voxelize_solid(tri, 32);
  CHECK(g.watertight_fallback);
  CHECK(g.occupied() > 0);
  const double h = g.cell_size();
  for (int k = 0; k < 32; ++k)
    for (int j = 0; j < 32; ++j)
      for (int i = 0; i < 32; ++i)
        if (g.at(i, j, k) != 0) CHECK(std::abs(g.center(k) - 0.1) <= std::sqrt(3.0) / 2 * h + 1e-12);
}

TEST_CASE("ball mask clears cells outside the unit ball") {
  const auto big = primitives::box(3, 3, 3, 1);
  const auto g = voxelize_solid(big, 32);
  for (int k = 0; k < 32; ++k)
    for (int j = 0; j < 32; ++j)
      for (int i = 0; i < 32; ++i) {
        const bool inside = Vec3(g.center(i), g.center(j), g.center(k)).norm() <= 1.0;
        CHECK(g.at(i, j, k) == (inside ? 1.0 : 0.0));
      }
}

TEST_CASE("basis structure") {
  const auto b = build_zernike_basis(8);
  for (const auto& ix : b.indices()) {
    CHECK((ix.n - ix.l) % 2 == 0);
    CHECK(std::abs(ix.m) <= ix.l);
  }
  CHECK_THROWS_AS(b.position(1, 0, 0), Error);
  for (std::size_t i = 0; i < b.indices().size(); ++i)
    for (const auto& t : b.chi(i)) CHECK(t.r + t.s + t.t <= b.indices()[i].n);
  CHECK_THROWS_AS(build_zernike_basis(21), Error);
  CHECK_NOTHROW(build_zernike_basis(20));
}

TEST_CASE("oracle radial normalisation") {
  // composite Simpson on the unnormalised radial part
  for (int n : {0, 3, 6, 8}) {
    for (int l = n % 2; l <= n; l += 2) {
      const int steps = 4000;
      double s = 0;
      for (int i = 0; i <= steps; ++i) {
        const double r = static_cast<double>(i) / steps;
        const double w = (i == 0 || i == steps) ? 1 : (i % 2 ? 4 : 2);
        s += w * std::pow(oracle::radial_raw(n, l, r), 2) * r * r;
      }
      s /= 3.0 * steps;
      CHECK(s == doctest::Approx(1.0 / (2 * n + 3)).epsilon(1e-8));
    }
  }
}

TEST_CASE("monomial expansion matches the oracle pointwise") {
  const auto b = build_zernike_basis(8);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3 x(u(rng), u(rng), u(rng));
    for (std::size_t i = 0; i < b.indices().size(); ++i) {
      const auto& ix = b.indices()[i];
      const Complex want = oracle::zernike(ix.n, ix.l, ix.m, x);
      CHECK(std::abs(b.evaluate(i, x) - want) < 1e-9 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("orthonormality under voxel quadrature") {
  const auto b = build_zernike_basis(8);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, b.indices().size() - 1);
  double worst32 = 0, worst64 = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t p = pick(rng);
    const std::size_t q = trial < 3 ? p : pick(rng);
    const double delta = p == q ? 1.0 : 0.0;
    worst64 = std::max(worst64, std::abs(ball_inner_product(b, p, q, 64) - delta));
    worst32 = std::max(worst32, std::abs(ball_inner_product(b, p, q, 32) - delta));
  }
  CHECK(worst64 < 1e-2);
  CHECK(worst64 < worst32);
}

TEST_CASE("full gram matrix at low order") {
  // every pair up to order 5 through ball moments; higher orders exceed 1e-2
  // at this resolution
  const auto b = build_zernike_basis(5);
  const auto m = geometric_moments(ball_grid(64), 10);
  double worst = 0;
  for (std::size_t p = 0; p < b.indices().size(); ++p)
    for (std::size_t q = 0; q < b.indices().size(); ++q) {
      Complex sum(0, 0);
      for (const auto& u : b.chi(p))
        for (const auto& v : b.chi(q)) sum += u.coeff * std::conj(v.coeff) * m.at(u.r + v.r, u.s + v.s, u.t + v.t);
      worst = std::max(worst, std::abs(3.0 / (4.0 * M_PI) * sum - (p == q ? 1.0 : 0.0)));
    }
  CHECK(worst < 1e-2);
}

TEST_CASE("moment route equals direct integration") {
  const int order = 6;
  const auto b = build_zernike_basis(order);
  const auto g = lumpy_grid(64);
  const auto omega = zernike_moments(g, b);
  double worst = 0;
  for (std::size_t i = 0; i < b.indices().size(); ++i) {
    const auto& ix = b.indices()[i];
    worst = std::max(worst, std::abs(omega[i] - oracle::direct_moment(g, ix.n, ix.l, ix.m)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("conjugation symmetry") {
  const auto g = lumpy_grid(32);
  const auto b = build_zernike_basis(6);
  const auto omega = zernike_moments(g, b);
  for (const auto& ix : b.indices()) {
    if (ix.m <= 0) continue;
    const double sign = ix.m % 2 ? -1.0 : 1.0;
    // library moments
    CHECK(std::abs(omega[b.position(ix.n, ix.l, -ix.m)] - sign * std::conj(omega[b.position(ix.n, ix.l, ix.m)])) < 1e-9);
    // and both sides from the oracle
    if (ix.n <= 4) {
      const Complex neg = oracle::direct_moment(g, ix.n, ix.l, -ix.m), pos = oracle::direct_moment(g, ix.n, ix.l, ix.m);
      CHECK(std::abs(neg - sign * std::conj(pos)) < 1e-9);
    }
  }
}

TEST_CASE("ball moments vanish for l > 0") {
  const auto b = build_zernike_basis(8);
  const auto omega = zernike_moments(ball_grid(64), b);
  for (std::size_t i = 0; i < b.indices().size(); ++i) {
    if (b.indices()[i].l > 0) CHECK(std::abs(omega[i]) < 1e-3);
  }
  CHECK(std::abs(omega[b.position(0, 0, 0)] - 1.0) < 1e-2);
}

TEST_CASE("descriptor layout and sign") {
  const auto d = zernike_descriptor(lumpy_grid(32), 8);
  CHECK(d.nl.size() == d.f_nl.size());
  for (std::size_t i = 0; i < d.nl.size(); ++i) {
    CHECK(d.f_nl[i] >= 0);
    if (i > 0) CHECK(d.nl[i - 1] < d.nl[i]);
  }
}

TEST_CASE("rotation drift of the descriptor") {
  std::mt19937_64 rng(8);
  const TriangleMesh solids[] = {primitives::icosphere(4, 0.7), primitives::box(1.0, 1.0, 1.0, 4),
                                 primitives::ellipsoid(0.9, 0.6, 0.3, 4)};
  for (const auto& solid : solids) {
    const auto base = zernike_descriptor(voxelize_solid(solid, 64), 8);
    const Mat3 turns[] = {primitives::rotation_about_z(M_PI / 6), primitives::random_rotation(rng)};
    for (const Mat3& r : turns) {
      const auto turned = zernike_descriptor(voxelize_solid(transformed(solid, r, Vec3::Zero(), 1.0), 64), 8);
      CHECK(relative_drift(base, turned) < 0.05);
    }
  }
}
