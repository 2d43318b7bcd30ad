#include "clir/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "clir/error.hpp"
#include "clir/pose.hpp"
#include "clir/surface_moments.hpp"

namespace clir {

std::string_view to_string(DescriptorKind kind) {
  switch (kind) {
    case DescriptorKind::cli: return "cli";
    case DescriptorKind::zernike: return "zernike";
    case DescriptorKind::surface: return "surface";
  }
  return "unknown";
}

DescriptorKind parse_descriptor_kind(std::string_view text) {
  if (text == "cli") return DescriptorKind::cli;
  if (text == "zernike") return DescriptorKind::zernike;
  if (text == "surface") return DescriptorKind::surface;
  throw Error(ErrorCode::ConfigError, "unknown descriptor kind '" + std::string(text) + "'");
}

std::vector<DescriptorKind> parse_descriptor_kinds(std::string_view text) {
  std::vector<DescriptorKind> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const auto kind = parse_descriptor_kind(text.substr(start, comma - start));
    if (std::find(out.begin(), out.end(), kind) == out.end()) out.push_back(kind);
    start = comma + 1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string PipelineConfig::canonical_text() const {
  std::ostringstream out;
  out << "n_planes=" << n_planes << '\n'
      << "resolution=" << resolution << '\n'
      << "k_max=" << k_max << '\n'
      << "scaling_mode=" << to_string(scaling) << '\n'
      << "seed=" << seed << '\n'
      << "voxel_resolution=" << voxel_resolution << '\n'
      << "zernike_order=" << zernike_order << '\n';
  const auto& inv = surface_invariants.empty() ? default_surface_invariants() : surface_invariants;
  for (const auto& s : inv) out << "surface_invariant=" << s << '\n';
  return out.str();
}

std::uint64_t PipelineConfig::hash() const { return fnv1a64(canonical_text()); }

PipelineConfig PipelineConfig::from_canonical_text(const std::string& text) {
  PipelineConfig c;
  std::vector<std::string> invariants;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::CorruptIndex, "bad config line '" + line + "'");
    const std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    try {
      if (key == "n_planes") c.n_planes = std::stoi(value);
      else if (key == "resolution") c.resolution = std::stoi(value);
      else if (key == "k_max") c.k_max = std::stoi(value);
      else if (key == "scaling_mode") c.scaling = parse_scaling_mode(value);
      else if (key == "seed") c.seed = std::stoull(value);
      else if (key == "voxel_resolution") c.voxel_resolution = std::stoi(value);
      else if (key == "zernike_order") c.zernike_order = std::stoi(value);
      else if (key == "surface_invariant") invariants.push_back(value);
      else throw Error(ErrorCode::CorruptIndex, "unknown config key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw Error(ErrorCode::CorruptIndex, "bad config value '" + line + "'");
    } catch (const std::out_of_range&) {
      throw Error(ErrorCode::CorruptIndex, "bad config value '" + line + "'");
    }
  }
  if (invariants != default_surface_invariants()) c.surface_invariants = std::move(invariants);
  return c;
}

void PipelineConfig::validate() const {
  if (n_planes < 2) throw Error(ErrorCode::ConfigError, "planes must be >= 2");
  if (resolution < 16 || resolution > 2048) throw Error(ErrorCode::ConfigError, "resolution must be in [16, 2048]");
  if (k_max < 1) throw Error(ErrorCode::ConfigError, "kmax must be >= 1");
  if (voxel_resolution < 2) throw Error(ErrorCode::ConfigError, "voxel resolution must be >= 2");
  if (zernike_order < 0) throw Error(ErrorCode::ConfigError, "zernike order must be >= 0");
  if (zernike_order > kMaxZernikeOrder) throw Error(ErrorCode::OrderTooLarge, "zernike order above 20");
  parse_invariants(surface_invariants);
}

bool operator==(const Descriptor& a, const Descriptor& b) {
  if (a.kind != b.kind) return false;
  if (a.kind != DescriptorKind::cli) return a.values == b.values;
  return a.cli.mode == b.cli.mode && a.cli.vectors == b.cli.vectors &&
         a.cli.n_source_images == b.cli.n_source_images;
}

double descriptor_distance(const Descriptor& a, const Descriptor& b) {
  if (a.kind != b.kind) throw Error(ErrorCode::KindMismatch, "comparing descriptors of different kinds");
  if (a.kind == DescriptorKind::cli) return similarity(a.cli, b.cli);
  if (a.values.size() != b.values.size()) throw Error(ErrorCode::ConfigMismatch, "descriptor lengths differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

std::vector<SliceFeature> level_image_features(const TriangleMesh& normalized, const PipelineConfig& config) {
  const auto images = extract_level_images(normalized, config.n_planes, config.resolution);
  std::vector<SliceFeature> features(images.size());
  const auto count = static_cast<long>(images.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    features[k] = {images[k].plane_index, hu_invariants(images[k].image, config.scaling)};
  }
  return features;
}

CliDescriptor cli_descriptor(const TriangleMesh& normalized, const PipelineConfig& config) {
  const auto features = level_image_features(normalized, config);
  return select_characteristic(features, static_cast<std::size_t>(config.k_max), config.seed,
                               normalized.source_id());
}

std::vector<Descriptor> compute_descriptors(const TriangleMesh& mesh, const PipelineConfig& config,
                                            const std::vector<DescriptorKind>& kinds) {
  const TriangleMesh normalized = normalize_pose(mesh).mesh;
  std::vector<Descriptor> out;
  for (DescriptorKind kind : kinds) {
    Descriptor d;
    d.kind = kind;
    switch (kind) {
      case DescriptorKind::cli:
        d.cli = cli_descriptor(normalized, config);
        break;
      case DescriptorKind::zernike: {
        const VoxelGrid grid = voxelize_solid(normalized, config.voxel_resolution);
        if (grid.occupied() == 0) throw Error(ErrorCode::EmptySet, "empty voxel grid");
        d.values = zernike_descriptor(grid, config.zernike_order).f_nl;
        break;
      }
      case DescriptorKind::surface: {
        const auto& texts = config.surface_invariants.empty() ? default_surface_invariants() : config.surface_invariants;
        d.values = surface_descriptor(normalized, parse_invariants(texts));
        break;
      }
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace clir
