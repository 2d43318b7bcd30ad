#include "clir/index.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <tuple>

#include "clir/error.hpp"

namespace clir {

namespace {

constexpr char kMagic[8] = {'C', 'L', 'I', '3', 'D', 'I', 'D', 'X'};

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) { uint(v, 4); }
  void u64(std::uint64_t v) { uint(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(std::string_view b) { out_.append(b.data(), b.size()); }
  void str32(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s);
  }
  void str64(std::string_view s) {
    u64(s.size());
    bytes(s);
  }
  std::string& data() { return out_; }

 private:
  void uint(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(uint(4)); }
  std::uint64_t u64() { return uint(8); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string_view take(std::size_t n) {
    if (n > in_.size() - pos_) throw Error(ErrorCode::CorruptIndex, "truncated index data");
    auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::string str32() { return std::string(take(u32())); }
  std::string str64() { return std::string(take(u64())); }
  bool done() const { return pos_ == in_.size(); }

 private:
  std::uint64_t uint(int n) {
    auto b = take(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = n - 1; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[static_cast<std::size_t>(i)]);
    return v;
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

DescriptorKind kind_from_byte(std::uint8_t b) {
  if (b > 2) throw Error(ErrorCode::CorruptIndex, "unknown descriptor kind byte");
  return static_cast<DescriptorKind>(b);
}

std::string encode_entry(const IndexEntry& e) {
  Writer w;
  w.str32(e.model_id);
  w.u8(e.class_label ? 1 : 0);
  if (e.class_label) w.str32(*e.class_label);
  w.u8(static_cast<std::uint8_t>(e.kind));
  w.u64(e.config_hash);
  w.str64(e.payload);
  return std::move(w.data());
}

IndexEntry decode_entry(std::string_view body) {
  Reader r(body);
  IndexEntry e;
  e.model_id = r.str32();
  if (r.u8() != 0) e.class_label = r.str32();
  e.kind = kind_from_byte(r.u8());
  e.config_hash = r.u64();
  e.payload = r.str64();
  if (!r.done()) throw Error(ErrorCode::CorruptIndex, "trailing bytes in entry '" + e.model_id + "'");
  return e;
}

std::vector<std::filesystem::path> off_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& item : std::filesystem::directory_iterator(dir, ec)) {
    if (!item.is_regular_file()) continue;
    auto ext = item.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".off") files.push_back(item.path());
  }
  if (ec) throw Error(ErrorCode::IoError, "cannot list " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

Labels parse_labels(const std::string& text) {
  Labels labels;
  std::istringstream in(text);
  std::string line;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::ConfigError, "labels line " + std::to_string(line_no) + " has no comma");
    }
    const std::string id = trim(line.substr(0, comma)), label = trim(line.substr(comma + 1));
    if (id.empty() || label.empty()) {
      throw Error(ErrorCode::ConfigError, "labels line " + std::to_string(line_no) + " has an empty field");
    }
    labels[id] = label;
  }
  return labels;
}

Labels read_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_labels(buf.str());
}

std::string encode_descriptor(const Descriptor& d) {
  Writer w;
  if (d.kind == DescriptorKind::cli) {
    w.u8(static_cast<std::uint8_t>(d.cli.mode));
    w.u64(d.cli.n_source_images);
    w.u32(static_cast<std::uint32_t>(d.cli.vectors.size()));
    for (std::size_t i = 0; i < d.cli.vectors.size(); ++i) {
      w.u64(i < d.cli.slice_indices.size() ? d.cli.slice_indices[i] : 0);
      for (double v : d.cli.vectors[i]) w.f64(v);
    }
  } else {
    w.u32(static_cast<std::uint32_t>(d.values.size()));
    for (double v : d.values) w.f64(v);
  }
  return std::move(w.data());
}

Descriptor decode_descriptor(DescriptorKind kind, const std::string& payload) {
  Reader r(payload);
  Descriptor d;
  d.kind = kind;
  if (kind == DescriptorKind::cli) {
    const auto mode = r.u8();
    if (mode > 1) throw Error(ErrorCode::CorruptIndex, "unknown scaling mode byte");
    d.cli.mode = static_cast<ScalingMode>(mode);
    d.cli.n_source_images = r.u64();
    const auto n = r.u32();
    for (std::uint32_t i = 0; i < n; ++i) {
      d.cli.slice_indices.push_back(r.u64());
      Feature f{};
      for (double& v : f) v = r.f64();
      d.cli.vectors.push_back(f);
    }
    if (d.cli.vectors.empty()) throw Error(ErrorCode::CorruptIndex, "CLI descriptor without vectors");
  } else {
    const auto n = r.u32();
    for (std::uint32_t i = 0; i < n; ++i) d.values.push_back(r.f64());
  }
  if (!r.done()) throw Error(ErrorCode::CorruptIndex, "trailing bytes in descriptor payload");
  return d;
}

Descriptor IndexEntry::descriptor() const {
  Descriptor d = decode_descriptor(kind, payload);
  d.cli.model_id = model_id;
  return d;
}

bool ShapeIndex::has_kind(DescriptorKind kind) const {
  return std::find(kinds.begin(), kinds.end(), kind) != kinds.end();
}

const IndexEntry* ShapeIndex::find(const std::string& model_id, DescriptorKind kind) const {
  for (const auto& e : entries) {
    if (e.model_id == model_id && e.kind == kind) return &e;
  }
  return nullptr;
}

std::vector<const IndexEntry*> ShapeIndex::entries_of(DescriptorKind kind) const {
  std::vector<const IndexEntry*> out;
  for (const auto& e : entries) {
    if (e.kind == kind) out.push_back(&e);
  }
  return out;
}

Labels ShapeIndex::labels() const {
  Labels out;
  for (const auto& e : entries) {
    if (e.class_label) out[e.model_id] = *e.class_label;
  }
  return out;
}

std::string serialize_index(const ShapeIndex& index) {
  std::string body;
  for (const auto& e : index.entries) {
    Writer w;
    const std::string entry = encode_entry(e);
    w.str64(entry);
    body += w.data();
  }

  Writer w;
  w.bytes(std::string_view(kMagic, sizeof kMagic));
  w.u32(ShapeIndex::kVersion);
  const std::string config = index.config.canonical_text();
  w.str32(config);
  w.u64(index.config.hash());
  w.u32(static_cast<std::uint32_t>(index.kinds.size()));
  for (auto k : index.kinds) w.u8(static_cast<std::uint8_t>(k));
  w.u64(index.entries.size());
  w.u64(fnv1a64(body));
  w.bytes(body);
  return std::move(w.data());
}

ShapeIndex deserialize_index(const std::string& bytes) {
  Reader r(bytes);
  if (r.take(sizeof kMagic) != std::string_view(kMagic, sizeof kMagic)) {
    throw Error(ErrorCode::CorruptIndex, "bad magic");
  }
  if (const auto version = r.u32(); version != ShapeIndex::kVersion) {
    throw Error(ErrorCode::CorruptIndex, "unsupported index version " + std::to_string(version));
  }
  ShapeIndex index;
  index.config = PipelineConfig::from_canonical_text(r.str32());
  const std::uint64_t config_hash = r.u64();
  if (config_hash != index.config.hash()) throw Error(ErrorCode::CorruptIndex, "config hash mismatch");
  const auto nkinds = r.u32();
  for (std::uint32_t i = 0; i < nkinds; ++i) index.kinds.push_back(kind_from_byte(r.u8()));
  const auto count = r.u64();
  const auto content_hash = r.u64();

  std::string body;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::string entry = r.str64();
    Writer w;
    w.str64(entry);
    body += w.data();
    IndexEntry e = decode_entry(entry);
    if (e.config_hash != config_hash) {
      throw Error(ErrorCode::CorruptIndex, "entry '" + e.model_id + "' was built with another config");
    }
    index.entries.push_back(std::move(e));
  }
  if (!r.done()) throw Error(ErrorCode::CorruptIndex, "trailing bytes after entries");
  if (fnv1a64(body) != content_hash) throw Error(ErrorCode::CorruptIndex, "content hash mismatch");
  return index;
}

void write_index(const std::filesystem::path& path, const ShapeIndex& index) {
  const std::string bytes = serialize_index(index);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::UnwritableOutput, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::UnwritableOutput, "write failed for " + path.string());
}

ShapeIndex read_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return deserialize_index(buf.str());
}

BuildReport build_index(const std::vector<TriangleMesh>& meshes, const std::optional<Labels>& labels,
                        const PipelineConfig& config, const std::vector<DescriptorKind>& kinds) {
  config.validate();
  if (kinds.empty()) throw Error(ErrorCode::ConfigError, "no descriptor kinds requested");
  std::vector<DescriptorKind> sorted_kinds = kinds;
  std::sort(sorted_kinds.begin(), sorted_kinds.end());
  sorted_kinds.erase(std::unique(sorted_kinds.begin(), sorted_kinds.end()), sorted_kinds.end());

  const std::uint64_t hash = config.hash();
  std::vector<std::vector<IndexEntry>> per_model(meshes.size());
  std::vector<std::string> failures(meshes.size());
  const auto count = static_cast<long>(meshes.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const TriangleMesh& mesh = meshes[k];
    try {
      for (const auto& d : compute_descriptors(mesh, config, sorted_kinds)) {
        IndexEntry e;
        e.model_id = mesh.source_id();
        if (labels) {
          if (auto it = labels->find(e.model_id); it != labels->end()) e.class_label = it->second;
        }
        e.kind = d.kind;
        e.payload = encode_descriptor(d);
        e.config_hash = hash;
        per_model[k].push_back(std::move(e));
      }
    } catch (const std::exception& ex) {
      failures[k] = "skipping model '" + mesh.source_id() + "': " + ex.what();
    }
  }

  BuildReport report;
  report.index.config = config;
  report.index.kinds = sorted_kinds;
  for (std::size_t k = 0; k < meshes.size(); ++k) {
    if (!failures[k].empty()) {
      report.warnings.push_back(failures[k]);
      continue;
    }
    for (auto& e : per_model[k]) report.index.entries.push_back(std::move(e));
  }
  std::stable_sort(report.index.entries.begin(), report.index.entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.model_id, a.kind) < std::tie(b.model_id, b.kind);
  });
  for (std::size_t i = 1; i < report.index.entries.size(); ++i) {
    const auto& a = report.index.entries[i - 1];
    const auto& b = report.index.entries[i];
    if (a.model_id == b.model_id && a.kind == b.kind) {
      throw Error(ErrorCode::ConfigError, "duplicate model id '" + a.model_id + "'");
    }
  }
  if (report.index.entries.empty()) throw Error(ErrorCode::EmptyCorpus, "no model could be indexed");
  return report;
}

BuildReport build_index(const std::filesystem::path& model_dir, const std::optional<Labels>& labels,
                        const PipelineConfig& config, const std::vector<DescriptorKind>& kinds) {
  std::vector<TriangleMesh> meshes;
  std::vector<std::string> warnings;
  for (const auto& file : off_files(model_dir)) {
    try {
      meshes.push_back(read_off_file(file));
    } catch (const std::exception& ex) {
      warnings.push_back("skipping file '" + file.filename().string() + "': " + ex.what());
    }
  }
  if (meshes.empty()) throw Error(ErrorCode::EmptyCorpus, "no parseable OFF file in " + model_dir.string());
  BuildReport report = build_index(meshes, labels, config, kinds);
  warnings.insert(warnings.end(), report.warnings.begin(), report.warnings.end());
  report.warnings = std::move(warnings);
  return report;
}

}  // namespace clir
