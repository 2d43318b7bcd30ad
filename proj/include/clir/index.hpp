#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clir/pipeline.hpp"

namespace clir {

using Labels = std::map<std::string, std::string>;

/// CSV "model_id,class_label", one pair per line; '#' starts a comment.
Labels read_labels(const std::filesystem::path& path);
Labels parse_labels(const std::string& text);

struct IndexEntry {
  std::string model_id;
  std::optional<std::string> class_label;
  DescriptorKind kind = DescriptorKind::cli;
  std::string payload;  // serialized descriptor
  std::uint64_t config_hash = 0;

  Descriptor descriptor() const;
};

std::string encode_descriptor(const Descriptor& d);
Descriptor decode_descriptor(DescriptorKind kind, const std::string& payload);

// On-disk layout, all integers little-endian:
//   "CLI3DIDX" | u32 version | u32 len + config text | u64 config hash
//   | u32 kind count + u8 kinds | u64 entry count | u64 content hash
//   | entries, each u64 length + body
// Entry body: u32 len + model id | u8 has_label [u32 len + label] | u8 kind
//   | u64 config hash | u64 len + payload. Reals are IEEE-754 binary64.
struct ShapeIndex {
  static constexpr std::uint32_t kVersion = 1;

  PipelineConfig config;
  std::vector<DescriptorKind> kinds;
  std::vector<IndexEntry> entries;  // sorted by (model_id, kind)

  bool has_kind(DescriptorKind kind) const;
  const IndexEntry* find(const std::string& model_id, DescriptorKind kind) const;
  std::vector<const IndexEntry*> entries_of(DescriptorKind kind) const;
  Labels labels() const;
};

std::string serialize_index(const ShapeIndex& index);
ShapeIndex deserialize_index(const std::string& bytes);
void write_index(const std::filesystem::path& path, const ShapeIndex& index);
ShapeIndex read_index(const std::filesystem::path& path);

struct BuildReport {
  ShapeIndex index;
  std::vector<std::string> warnings;
};

/// Indexes every *.off file in model_dir (model id = file stem). Models that
/// fail to parse or process are skipped with a warning. Throws EmptyCorpus
/// when nothing could be indexed.
BuildReport build_index(const std::filesystem::path& model_dir, const std::optional<Labels>& labels,
                        const PipelineConfig& config, const std::vector<DescriptorKind>& kinds);

/// Same as build_index for meshes already in memory; ids come from source_id().
BuildReport build_index(const std::vector<TriangleMesh>& meshes, const std::optional<Labels>& labels,
                        const PipelineConfig& config, const std::vector<DescriptorKind>& kinds);

}  // namespace clir
