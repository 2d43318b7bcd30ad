#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "clir/hu.hpp"

namespace clir {

inline constexpr std::size_t kDefaultKMax = 40;
inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

struct KMeansResult {
  std::vector<Feature> centroids;
  std::vector<std::size_t> assignment;  // per input point
  double inertia = 0.0;
  // Inertia after every assignment step, ending with the final centroids.
  std::vector<double> inertia_history;
  int iterations = 0;
};

/// Lloyd's algorithm with k-means++ seeding. k is clamped to the number of
/// points; clusters that lose all members are dropped.
KMeansResult kmeans(std::span<const Feature> points, std::size_t k, std::uint64_t seed,
                    int max_iterations = 100);

struct SliceFeature {
  std::size_t slice_index;
  HuVector hu;
};

struct CliDescriptor {
  std::string model_id;
  std::vector<Feature> vectors;
  std::vector<std::size_t> slice_indices;  // source slice of each vector
  ScalingMode mode = ScalingMode::signed_log;
  std::size_t n_source_images = 0;
};

/// Keeps every feature when there are at most k_max of them; otherwise
/// clusters and keeps the medoid of each cluster. Output follows slice order.
CliDescriptor select_characteristic(std::span<const SliceFeature> features,
                                    std::size_t k_max = kDefaultKMax,
                                    std::uint64_t seed = kDefaultSeed, std::string model_id = {});

double euclidean(const Feature& a, const Feature& b);

/// Symmetric Hausdorff distance with Euclidean base distance.
double hausdorff(std::span<const Feature> a, std::span<const Feature> b);
double hausdorff(std::span<const HuVector> a, std::span<const HuVector> b);

double similarity(const CliDescriptor& q, const CliDescriptor& t);

}  // namespace clir
