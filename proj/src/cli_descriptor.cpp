#include "clir/cli_descriptor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "clir/error.hpp"
#include "clir/primitives.hpp"

namespace clir {

namespace {

double squared_distance(const Feature& a, const Feature& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

std::size_t nearest(const Feature& p, const std::vector<Feature>& centroids, double* dist2 = nullptr) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_distance(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (dist2) *dist2 = best_d;
  return best;
}

std::vector<Feature> seed_plus_plus(std::span<const Feature> points, std::size_t k, std::mt19937_64& rng) {
  const std::size_t n = points.size();
  std::vector<Feature> centers;
  centers.push_back(points[std::min(n - 1, static_cast<std::size_t>(primitives::uniform01(rng) * n))]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points[i], centers[0]);

  while (centers.size() < k) {
    double total = 0.0;
    for (double d : d2) total += d;
    // Every point coincides with a centre: no further distinct seeds exist.
    if (!(total > 0.0)) break;
    const double target = primitives::uniform01(rng) * total;
    double acc = 0.0;
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      acc += d2[i];
      if (d2[i] > 0.0 && acc > target) {
        pick = i;
        break;
      }
    }
    if (pick == n) {
      // Rounding left target beyond the running sum; take the last candidate.
      for (std::size_t i = n; i-- > 0;) {
        if (d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    }
    centers.push_back(points[pick]);
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(points[i], centers.back()));
  }
  return centers;
}

// Means of the assigned points; empty clusters are removed and the
// assignment relabelled accordingly.
void update_centroids(std::span<const Feature> points, std::vector<std::size_t>& assignment,
                      std::vector<Feature>& centroids) {
  const std::size_t k = centroids.size();
  std::vector<Feature> sums(k, Feature{});
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto& s = sums[assignment[i]];
    for (std::size_t d = 0; d < s.size(); ++d) s[d] += points[i][d];
    ++counts[assignment[i]];
  }
  std::vector<std::size_t> relabel(k);
  std::vector<Feature> next;
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    relabel[c] = next.size();
    Feature mean = sums[c];
    for (auto& v : mean) v /= static_cast<double>(counts[c]);
    next.push_back(mean);
  }
  for (auto& a : assignment) a = relabel[a];
  centroids = std::move(next);
}

double inertia_of(std::span<const Feature> points, const std::vector<std::size_t>& assignment,
                  const std::vector<Feature>& centroids) {
  double sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) sum += squared_distance(points[i], centroids[assignment[i]]);
  return sum;
}

}  // namespace

KMeansResult kmeans(std::span<const Feature> points, std::size_t k, std::uint64_t seed, int max_iterations) {
  if (points.empty()) throw Error(ErrorCode::EmptySet, "kmeans on no points");
  if (k == 0) throw Error(ErrorCode::ConfigError, "kmeans with k = 0");
  k = std::min(k, points.size());

  std::mt19937_64 rng(seed);
  KMeansResult out;
  out.centroids = seed_plus_plus(points, k, rng);
  out.assignment.assign(points.size(), 0);

  std::vector<std::size_t> previous;
  for (int it = 0; it < max_iterations; ++it) {
    for (std::size_t i = 0; i < points.size(); ++i) out.assignment[i] = nearest(points[i], out.centroids);
    out.inertia_history.push_back(inertia_of(points, out.assignment, out.centroids));
    out.iterations = it + 1;
    if (out.assignment == previous) break;
    update_centroids(points, out.assignment, out.centroids);
    previous = out.assignment;
  }
  // Final centroids are the means of the final assignment.
  update_centroids(points, out.assignment, out.centroids);
  out.inertia = inertia_of(points, out.assignment, out.centroids);
  out.inertia_history.push_back(out.inertia);
  return out;
}

CliDescriptor select_characteristic(std::span<const SliceFeature> features, std::size_t k_max,
                                    std::uint64_t seed, std::string model_id) {
  if (features.empty()) throw Error(ErrorCode::EmptySet, "no level images for '" + model_id + "'");
  const ScalingMode mode = features.front().hu.mode;
  for (const auto& f : features) {
    if (f.hu.mode != mode) throw Error(ErrorCode::ModeMismatch, "mixed scaling modes");
  }

  CliDescriptor out;
  out.model_id = std::move(model_id);
  out.mode = mode;
  out.n_source_images = features.size();

  std::vector<std::size_t> keep;
  if (features.size() <= k_max) {
    for (std::size_t i = 0; i < features.size(); ++i) keep.push_back(i);
  } else {
    std::vector<Feature> points;
    points.reserve(features.size());
    for (const auto& f : features) points.push_back(f.hu.phi);
    const KMeansResult km = kmeans(points, k_max, seed);

    // Medoid: the member nearest its centroid, lowest input index on ties.
    const std::size_t none = features.size();
    std::vector<std::size_t> medoid(km.centroids.size(), none);
    std::vector<double> best(km.centroids.size(), std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::size_t c = km.assignment[i];
      const double d = squared_distance(points[i], km.centroids[c]);
      if (d < best[c]) {
        best[c] = d;
        medoid[c] = i;
      }
    }
    for (std::size_t m : medoid) {
      if (m != none) keep.push_back(m);
    }
    std::sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) {
      return features[a].slice_index < features[b].slice_index ||
             (features[a].slice_index == features[b].slice_index && a < b);
    });
  }

  for (std::size_t i : keep) {
    out.vectors.push_back(features[i].hu.phi);
    out.slice_indices.push_back(features[i].slice_index);
  }
  return out;
}

double euclidean(const Feature& a, const Feature& b) { return std::sqrt(squared_distance(a, b)); }

double hausdorff(std::span<const Feature> a, std::span<const Feature> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySet, "Hausdorff distance of an empty set");
  // Squared distances throughout; sqrt is monotone so one root at the end suffices.
  auto directed = [](std::span<const Feature> from, std::span<const Feature> to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) best = std::min(best, squared_distance(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::sqrt(std::max(directed(a, b), directed(b, a)));
}

double hausdorff(std::span<const HuVector> a, std::span<const HuVector> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySet, "Hausdorff distance of an empty set");
  const ScalingMode mode = a.front().mode;
  std::vector<Feature> fa, fb;
  for (const auto& v : a) {
    if (v.mode != mode) throw Error(ErrorCode::ModeMismatch, "mixed scaling modes");
    fa.push_back(v.phi);
  }
  for (const auto& v : b) {
    if (v.mode != mode) throw Error(ErrorCode::ModeMismatch, "mixed scaling modes");
    fb.push_back(v.phi);
  }
  return hausdorff(std::span<const Feature>(fa), std::span<const Feature>(fb));
}

double similarity(const CliDescriptor& q, const CliDescriptor& t) {
  if (q.mode != t.mode) throw Error(ErrorCode::ModeMismatch, "descriptor scaling modes differ");
  return hausdorff(std::span<const Feature>(q.vectors), std::span<const Feature>(t.vectors));
}

}  // namespace clir
