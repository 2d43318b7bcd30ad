#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clir/cli_descriptor.hpp"
#include "clir/mesh.hpp"
#include "clir/slicer.hpp"
#include "clir/zernike.hpp"

namespace clir {

enum class DescriptorKind : std::uint8_t { cli = 0, zernike = 1, surface = 2 };

std::string_view to_string(DescriptorKind kind);
DescriptorKind parse_descriptor_kind(std::string_view text);
/// Comma-separated list, e.g. "cli,zernike".
std::vector<DescriptorKind> parse_descriptor_kinds(std::string_view text);

struct PipelineConfig {
  int n_planes = kDefaultPlanes;
  int resolution = kDefaultResolution;
  int k_max = static_cast<int>(kDefaultKMax);
  ScalingMode scaling = ScalingMode::signed_log;
  std::uint64_t seed = kDefaultSeed;
  int voxel_resolution = kDefaultVoxelResolution;
  int zernike_order = kDefaultZernikeOrder;
  std::vector<std::string> surface_invariants;  // empty selects the default set

  /// One "key=value" line per field, in fixed order.
  std::string canonical_text() const;
  std::uint64_t hash() const;
  static PipelineConfig from_canonical_text(const std::string& text);

  void validate() const;
};

/// A descriptor of one kind. CLI descriptors are vector sets compared by
/// Hausdorff distance; the baselines are flat vectors compared by Euclidean
/// distance.
struct Descriptor {
  DescriptorKind kind = DescriptorKind::cli;
  CliDescriptor cli;           // kind == cli
  std::vector<double> values;  // kind == zernike or surface

  friend bool operator==(const Descriptor& a, const Descriptor& b);
};

double descriptor_distance(const Descriptor& a, const Descriptor& b);

/// Hu features of every non-empty level image of a pose-normalized mesh.
std::vector<SliceFeature> level_image_features(const TriangleMesh& normalized, const PipelineConfig& config);

CliDescriptor cli_descriptor(const TriangleMesh& normalized, const PipelineConfig& config);

/// Normalizes the pose, then computes one descriptor per requested kind.
std::vector<Descriptor> compute_descriptors(const TriangleMesh& mesh, const PipelineConfig& config,
                                            const std::vector<DescriptorKind>& kinds);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace clir
