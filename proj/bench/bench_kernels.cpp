// Serial reference vs OpenMP kernel for each parallel hot spot.
#include <benchmark/benchmark.h>

#include <random>

#include "clir/index.hpp"
#include "clir/pose.hpp"
#include "clir/primitives.hpp"
#include "clir/retrieval.hpp"
#include "clir/slicer.hpp"
#include "clir/voxel.hpp"

using namespace clir;

namespace {

const TriangleMesh& normalized_ellipsoid() {
  static const TriangleMesh m = normalize_pose(primitives::ellipsoid(3, 2, 1, 4)).mesh;
  return m;
}

const ShapeIndex& small_index() {
  static const ShapeIndex index = [] {
    std::mt19937_64 rng(1);
    std::vector<TriangleMesh> meshes;
    const TriangleMesh bases[] = {primitives::ellipsoid(3, 2, 1, 3), primitives::two_spheres(1, 0.6, 3)};
    for (int i = 0; i < 12; ++i) {
      auto m = primitives::jitter(primitives::apply(bases[i % 2], primitives::random_similarity(rng)), 0.01, rng);
      meshes.emplace_back(m.vertices(), m.triangles(), "m" + std::to_string(i));
    }
    PipelineConfig cfg;
    cfg.n_planes = 100;
    cfg.resolution = 128;
    return build_index(meshes, std::nullopt, cfg, {DescriptorKind::cli}).index;
  }();
  return index;
}

void BM_LevelImagesSerial(benchmark::State& s) {
  normalized_ellipsoid();
  for (auto _ : s) benchmark::DoNotOptimize(serial::extract_level_images(normalized_ellipsoid(), 300, 256));
}
void BM_LevelImagesParallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(extract_level_images(normalized_ellipsoid(), 300, 256));
}

void BM_VoxelizeSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(serial::voxelize_solid(normalized_ellipsoid(), 64));
}
void BM_VoxelizeParallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(voxelize_solid(normalized_ellipsoid(), 64));
}

void BM_MomentsSerial(benchmark::State& s) {
  const auto g = voxelize_solid(normalized_ellipsoid(), 64);
  for (auto _ : s) benchmark::DoNotOptimize(serial::geometric_moments(g, 8));
}
void BM_MomentsParallel(benchmark::State& s) {
  const auto g = voxelize_solid(normalized_ellipsoid(), 64);
  for (auto _ : s) benchmark::DoNotOptimize(geometric_moments(g, 8));
}

void BM_DistanceMatrixSerial(benchmark::State& s) {
  small_index();  // built outside the timed loop
  for (auto _ : s) benchmark::DoNotOptimize(serial::distance_matrix(small_index(), DescriptorKind::cli));
}
void BM_DistanceMatrixParallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(distance_matrix(small_index(), DescriptorKind::cli));
}

}  // namespace

BENCHMARK(BM_LevelImagesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LevelImagesParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VoxelizeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VoxelizeParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MomentsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MomentsParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistanceMatrixSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DistanceMatrixParallel)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
