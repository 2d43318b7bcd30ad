// clir: index, query and evaluate OFF models with the CLI descriptor and the
// Zernike / surface-moment baselines.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "clir/error.hpp"
#include "clir/index.hpp"
#include "clir/pose.hpp"
#include "clir/retrieval.hpp"
#include "clir/slicer.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct IndexArgs {
  std::string dir, output, labels, kinds = "cli,zernike,surface", scaling = "signed_log";
  int planes = clir::kDefaultPlanes, resolution = clir::kDefaultResolution;
  int kmax = static_cast<int>(clir::kDefaultKMax);
  std::uint64_t seed = clir::kDefaultSeed;
  int voxel = clir::kDefaultVoxelResolution, order = clir::kDefaultZernikeOrder;
};

struct QueryArgs {
  std::string index, id, file, kind = "cli";
  std::size_t top = 0;
};

struct EvalArgs {
  std::string index, kinds, output;
  bool keep_self = false;
};

struct SliceArgs {
  std::string mesh, dir, dump_mesh;
  int planes = clir::kDefaultPlanes, resolution = clir::kDefaultResolution;
};

int run_index(const IndexArgs& a) {
  clir::PipelineConfig config;
  config.n_planes = a.planes;
  config.resolution = a.resolution;
  config.k_max = a.kmax;
  config.scaling = clir::parse_scaling_mode(a.scaling);
  config.seed = a.seed;
  config.voxel_resolution = a.voxel;
  config.zernike_order = a.order;

  std::optional<clir::Labels> labels;
  if (!a.labels.empty()) labels = clir::read_labels(a.labels);

  const auto report = clir::build_index(a.dir, labels, config, clir::parse_descriptor_kinds(a.kinds));
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  clir::write_index(a.output, report.index);
  std::cerr << "indexed " << report.index.entries.size() << " entries into " << a.output << '\n';
  return 0;
}

int run_query(const QueryArgs& a) {
  const auto index = clir::read_index(a.index);
  const auto kind = clir::parse_descriptor_kind(a.kind);
  clir::RankedResult result;
  if (!a.id.empty()) {
    result = clir::query_by_id(index, a.id, kind, a.top);
  } else {
    result = clir::query_by_mesh(index, clir::read_off_file(a.file), kind, index.config, a.top);
  }
  std::size_t rank = 1;
  for (const auto& h : result.hits) std::printf("%zu\t%s\t%.17g\n", rank++, h.model_id.c_str(), h.distance);
  return 0;
}

int run_eval(const EvalArgs& a) {
  const auto index = clir::read_index(a.index);
  const auto kinds = a.kinds.empty() ? index.kinds : clir::parse_descriptor_kinds(a.kinds);
  const auto report = clir::evaluate_all(index, kinds, a.keep_self);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  clir::write_evaluation_csv(a.output, report);
  for (const auto& k : report.kinds) {
    std::fprintf(stderr, "%s: %zu queries, nearest-neighbour accuracy %.3f\n",
                 std::string(clir::to_string(k.kind)).c_str(), k.queries, k.nn_accuracy);
  }
  return 0;
}

int run_slice(const SliceArgs& a) {
  const auto mesh = clir::read_off_file(a.mesh);
  const auto pose = clir::normalize_pose(mesh);
  if (!a.dump_mesh.empty()) clir::write_off_file(a.dump_mesh, pose.mesh);

  std::error_code ec;
  fs::create_directories(a.dir, ec);
  if (ec) throw clir::Error(clir::ErrorCode::UnwritableOutput, "cannot create " + a.dir + ": " + ec.message());

  const auto images = clir::extract_level_images(pose.mesh, a.planes, a.resolution);
  const std::string stem = mesh.source_id().empty() ? "model" : mesh.source_id();
  char name[64];
  for (const auto& li : images) {
    std::snprintf(name, sizeof name, "_%04zu_%+.4f.pgm", li.plane_index, li.x_position);
    clir::write_pgm(fs::path(a.dir) / (stem + name), li.image);
  }
  std::cerr << "wrote " << images.size() << " level images to " << a.dir << '\n';
  if (pose.degenerate_spectrum) std::cerr << "warning: degenerate covariance spectrum, in-plane orientation is arbitrary\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"3D shape retrieval with characteristic level images"};
  app.require_subcommand(1);

  IndexArgs ia;
  auto* index_cmd = app.add_subcommand("index", "build an index from a directory of OFF models");
  index_cmd->add_option("dir", ia.dir, "model directory")->required()->check(CLI::ExistingDirectory);
  index_cmd->add_option("-o,--output", ia.output, "index file")->required();
  index_cmd->add_option("--labels", ia.labels, "CSV model_id,class_label")->check(CLI::ExistingFile);
  index_cmd->add_option("--kinds", ia.kinds, "descriptor kinds, comma separated")->capture_default_str();
  index_cmd->add_option("--planes", ia.planes, "slicing planes")->capture_default_str();
  index_cmd->add_option("--resolution", ia.resolution, "level image resolution")->capture_default_str();
  index_cmd->add_option("--kmax", ia.kmax, "characteristic images per model")->capture_default_str();
  index_cmd->add_option("--seed", ia.seed, "k-means seed")->capture_default_str();
  index_cmd->add_option("--voxel", ia.voxel, "Zernike voxel grid resolution")->capture_default_str();
  index_cmd->add_option("--order", ia.order, "Zernike order")->capture_default_str();
  index_cmd->add_option("--scaling", ia.scaling, "Hu scaling: signed_log or raw")->capture_default_str();

  QueryArgs qa;
  auto* query_cmd = app.add_subcommand("query", "rank indexed models against a query");
  query_cmd->add_option("index", qa.index, "index file")->required()->check(CLI::ExistingFile);
  auto* id_opt = query_cmd->add_option("--id", qa.id, "indexed model id");
  auto* file_opt = query_cmd->add_option("--file", qa.file, "external OFF model")->check(CLI::ExistingFile);
  id_opt->excludes(file_opt);
  query_cmd->add_option("--top", qa.top, "number of hits, 0 for all")->capture_default_str();
  query_cmd->add_option("--kind", qa.kind, "descriptor kind")->capture_default_str();

  EvalArgs ea;
  auto* eval_cmd = app.add_subcommand("eval", "average precision-recall over all labeled queries");
  eval_cmd->add_option("index", ea.index, "index file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--kinds", ea.kinds, "descriptor kinds (default: all in the index)");
  eval_cmd->add_flag("--keep-self", ea.keep_self, "keep the query in its own ranking");
  eval_cmd->add_option("-o,--output", ea.output, "CSV output")->required();

  SliceArgs sa;
  auto* slice_cmd = app.add_subcommand("slice", "dump the level images of one model as PGM");
  slice_cmd->add_option("mesh", sa.mesh, "OFF model")->required()->check(CLI::ExistingFile);
  slice_cmd->add_option("--dump-slices", sa.dir, "output directory")->required();
  slice_cmd->add_option("--planes", sa.planes, "slicing planes")->capture_default_str();
  slice_cmd->add_option("--resolution", sa.resolution, "image resolution")->capture_default_str();
  slice_cmd->add_option("--dump-mesh", sa.dump_mesh, "also write the pose-normalized mesh as OFF");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  if (query_cmd->parsed() && qa.id.empty() && qa.file.empty()) {
    std::cerr << "query: one of --id or --file is required\n";
    return kExitUsage;
  }

  try {
    if (index_cmd->parsed()) return run_index(ia);
    if (query_cmd->parsed()) return run_query(qa);
    if (eval_cmd->parsed()) return run_eval(ea);
    return run_slice(sa);
  } catch (const clir::Error& e) {
    std::cerr << "error [" << clir::to_string(e.code()) << "]: " << e.what() << '\n';
    return e.code() == clir::ErrorCode::ConfigError ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
}
