#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "clir/index.hpp"

namespace clir {

struct Hit {
  std::string model_id;
  double distance = 0.0;
};

// Hits sorted by distance, ties by model id. When the query is itself in the
// index it is always listed first.
struct RankedResult {
  std::string query_id;
  std::vector<Hit> hits;
};

/// Ranks every entry of `kind` against `query`. top_k == 0 keeps all hits.
RankedResult rank(const ShapeIndex& index, const Descriptor& query, const std::string& query_id,
                  std::size_t top_k = 0);

/// Query by a model already in the index. NotFound if the id has no entry of
/// that kind, KindMismatch if the index does not hold the kind at all.
RankedResult query_by_id(const ShapeIndex& index, const std::string& model_id, DescriptorKind kind,
                         std::size_t top_k = 0);

/// Query by an external mesh processed under `config`, which must hash equal
/// to the index config (ConfigMismatch otherwise).
RankedResult query_by_mesh(const ShapeIndex& index, const TriangleMesh& mesh, DescriptorKind kind,
                           const PipelineConfig& config, std::size_t top_k = 0);

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

struct PrCurve {
  std::vector<PrPoint> points;
  std::size_t relevant_total = 0;
  bool truncated = false;  // not every relevant model appeared in the ranking
};

/// One point after each relevant hit. The query's own hit is dropped unless
/// keep_self is set. Relevant models are those of query_class in `labels`,
/// minus the query itself unless keep_self. NoRelevantModels if there are none.
PrCurve precision_recall(const RankedResult& ranked, const Labels& labels, const std::string& query_class,
                         bool keep_self = false);

constexpr std::size_t kRecallLevels = 11;

/// Interpolated precision at recall 0.0, 0.1, ... 1.0 (max precision at any
/// recall >= level, 0 when the curve never gets there).
std::array<double, kRecallLevels> eleven_point(const PrCurve& curve);

/// Symmetric matrix of descriptor distances between all entries of `kind`,
/// in index order.
struct DistanceMatrix {
  std::vector<std::string> ids;
  std::vector<double> values;  // row-major ids.size() squared

  double at(std::size_t i, std::size_t j) const { return values[i * ids.size() + j]; }
};

DistanceMatrix distance_matrix(const ShapeIndex& index, DescriptorKind kind);

namespace serial {
DistanceMatrix distance_matrix(const ShapeIndex& index, DescriptorKind kind);
}

struct KindEvaluation {
  DescriptorKind kind = DescriptorKind::cli;
  std::size_t queries = 0;                       // queries that were scored
  std::array<double, kRecallLevels> mean_precision{};
  double nn_accuracy = 0.0;                      // rank-1 hit (self removed) shares the class
};

struct EvaluationReport {
  std::vector<KindEvaluation> kinds;  // only kinds with at least one scored query
  std::vector<std::string> warnings;
};

/// Uses every labeled model as a query for each kind. Queries without other
/// members of their class are skipped with a warning.
EvaluationReport evaluate_all(const ShapeIndex& index, const std::vector<DescriptorKind>& kinds,
                              bool keep_self = false);

/// "kind,recall,mean_precision" with one row per kind and recall level.
std::string evaluation_csv(const EvaluationReport& report);
void write_evaluation_csv(const std::filesystem::path& path, const EvaluationReport& report);

}  // namespace clir
