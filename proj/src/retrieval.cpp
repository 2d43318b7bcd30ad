#include "clir/retrieval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "clir/error.hpp"

namespace clir {

namespace {

void require_kind(const ShapeIndex& index, DescriptorKind kind) {
  if (!index.has_kind(kind) || index.entries_of(kind).empty()) {
    throw Error(ErrorCode::KindMismatch, "index holds no '" + std::string(to_string(kind)) + "' descriptors");
  }
}

void order_hits(std::vector<Hit>& hits, const std::string& query_id) {
  std::sort(hits.begin(), hits.end(), [&](const Hit& a, const Hit& b) {
    const bool sa = a.model_id == query_id, sb = b.model_id == query_id;
    if (sa != sb && a.distance == b.distance) return sa;
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.model_id < b.model_id;
  });
}

RankedResult ranked_from_row(const DistanceMatrix& m, std::size_t row) {
  RankedResult r;
  r.query_id = m.ids[row];
  r.hits.reserve(m.ids.size());
  for (std::size_t j = 0; j < m.ids.size(); ++j) r.hits.push_back({m.ids[j], m.at(row, j)});
  order_hits(r.hits, r.query_id);
  return r;
}

std::vector<Descriptor> decoded(const ShapeIndex& index, DescriptorKind kind, std::vector<std::string>& ids) {
  std::vector<Descriptor> out;
  for (const IndexEntry* e : index.entries_of(kind)) {
    ids.push_back(e->model_id);
    out.push_back(e->descriptor());
  }
  return out;
}

}  // namespace

RankedResult rank(const ShapeIndex& index, const Descriptor& query, const std::string& query_id,
                  std::size_t top_k) {
  require_kind(index, query.kind);
  const auto entries = index.entries_of(query.kind);
  RankedResult r;
  r.query_id = query_id;
  r.hits.resize(entries.size());
  const auto n = static_cast<long>(entries.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    r.hits[k] = {entries[k]->model_id, descriptor_distance(query, entries[k]->descriptor())};
  }
  order_hits(r.hits, query_id);
  if (top_k > 0 && r.hits.size() > top_k) r.hits.resize(top_k);
  return r;
}

RankedResult query_by_id(const ShapeIndex& index, const std::string& model_id, DescriptorKind kind,
                         std::size_t top_k) {
  require_kind(index, kind);
  const IndexEntry* e = index.find(model_id, kind);
  if (!e) throw Error(ErrorCode::NotFound, "model '" + model_id + "' is not in the index");
  return rank(index, e->descriptor(), model_id, top_k);
}

RankedResult query_by_mesh(const ShapeIndex& index, const TriangleMesh& mesh, DescriptorKind kind,
                           const PipelineConfig& config, std::size_t top_k) {
  require_kind(index, kind);
  if (config.hash() != index.config.hash()) {
    throw Error(ErrorCode::ConfigMismatch, "query pipeline config differs from the index config");
  }
  const auto descriptors = compute_descriptors(mesh, config, {kind});
  return rank(index, descriptors.front(), mesh.source_id(), top_k);
}

PrCurve precision_recall(const RankedResult& ranked, const Labels& labels, const std::string& query_class,
                         bool keep_self) {
  PrCurve curve;
  for (const auto& [id, label] : labels) {
    if (label == query_class && (keep_self || id != ranked.query_id)) ++curve.relevant_total;
  }
  if (curve.relevant_total == 0) {
    throw Error(ErrorCode::NoRelevantModels, "no other model of class '" + query_class + "' for query '" +
                                                 ranked.query_id + "'");
  }
  std::size_t retrieved = 0, relevant = 0;
  for (const Hit& h : ranked.hits) {
    if (!keep_self && h.model_id == ranked.query_id) continue;
    ++retrieved;
    const auto it = labels.find(h.model_id);
    if (it == labels.end() || it->second != query_class) continue;
    ++relevant;
    curve.points.push_back({static_cast<double>(relevant) / static_cast<double>(curve.relevant_total),
                            static_cast<double>(relevant) / static_cast<double>(retrieved)});
  }
  curve.truncated = relevant < curve.relevant_total;
  return curve;
}

std::array<double, kRecallLevels> eleven_point(const PrCurve& curve) {
  std::array<double, kRecallLevels> out{};
  for (std::size_t l = 0; l < kRecallLevels; ++l) {
    const double level = static_cast<double>(l) / 10.0;
    double best = 0.0;
    for (const auto& p : curve.points) {
      // small slack so that e.g. 3/10 counts as reaching 0.3
      if (p.recall + 1e-12 >= level) best = std::max(best, p.precision);
    }
    out[l] = best;
  }
  return out;
}

DistanceMatrix distance_matrix(const ShapeIndex& index, DescriptorKind kind) {
  require_kind(index, kind);
  DistanceMatrix m;
  const auto descs = decoded(index, kind, m.ids);
  const std::size_t n = descs.size();
  m.values.assign(n * n, 0.0);
  // upper triangle, flattened so the work splits evenly
  const auto pairs = static_cast<long>(n * (n - 1) / 2);
#pragma omp parallel for schedule(dynamic, 16)
  for (long p = 0; p < pairs; ++p) {
    std::size_t i = 0, rest = static_cast<std::size_t>(p);
    while (rest >= n - 1 - i) {
      rest -= n - 1 - i;
      ++i;
    }
    const std::size_t j = i + 1 + rest;
    const double d = descriptor_distance(descs[i], descs[j]);
    m.values[i * n + j] = d;
    m.values[j * n + i] = d;
  }
  return m;
}

namespace serial {
DistanceMatrix distance_matrix(const ShapeIndex& index, DescriptorKind kind) {
  require_kind(index, kind);
  DistanceMatrix m;
  const auto descs = decoded(index, kind, m.ids);
  const std::size_t n = descs.size();
  m.values.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = descriptor_distance(descs[i], descs[j]);
      m.values[i * n + j] = d;
      m.values[j * n + i] = d;
    }
  }
  return m;
}
}  // namespace serial

EvaluationReport evaluate_all(const ShapeIndex& index, const std::vector<DescriptorKind>& kinds, bool keep_self) {
  EvaluationReport report;
  const Labels labels = index.labels();
  if (labels.empty()) report.warnings.push_back("index has no labeled models, nothing to evaluate");

  for (DescriptorKind kind : kinds) {
    require_kind(index, kind);
    const DistanceMatrix m = distance_matrix(index, kind);
    KindEvaluation eval;
    eval.kind = kind;
    std::size_t nn_correct = 0;
    for (std::size_t q = 0; q < m.ids.size(); ++q) {
      const auto label = labels.find(m.ids[q]);
      if (label == labels.end()) continue;
      const RankedResult ranked = ranked_from_row(m, q);
      PrCurve curve;
      try {
        curve = precision_recall(ranked, labels, label->second, keep_self);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoRelevantModels) throw;
        report.warnings.push_back(std::string(to_string(kind)) + ": skipping query: " + e.what());
        continue;
      }
      const auto interp = eleven_point(curve);
      for (std::size_t l = 0; l < kRecallLevels; ++l) eval.mean_precision[l] += interp[l];
      for (const Hit& h : ranked.hits) {
        if (h.model_id == ranked.query_id) continue;
        const auto it = labels.find(h.model_id);
        if (it != labels.end() && it->second == label->second) ++nn_correct;
        break;
      }
      ++eval.queries;
    }
    if (eval.queries == 0) {
      report.warnings.push_back(std::string(to_string(kind)) + ": no query could be scored");
      continue;
    }
    for (double& p : eval.mean_precision) p /= static_cast<double>(eval.queries);
    eval.nn_accuracy = static_cast<double>(nn_correct) / static_cast<double>(eval.queries);
    report.kinds.push_back(eval);
  }
  return report;
}

std::string evaluation_csv(const EvaluationReport& report) {
  std::string out = "kind,recall,mean_precision\n";
  char line[96];
  for (const auto& k : report.kinds) {
    for (std::size_t l = 0; l < kRecallLevels; ++l) {
      std::snprintf(line, sizeof line, "%s,%.1f,%.6f\n", std::string(to_string(k.kind)).c_str(),
                    static_cast<double>(l) / 10.0, k.mean_precision[l]);
      out += line;
    }
  }
  return out;
}

void write_evaluation_csv(const std::filesystem::path& path, const EvaluationReport& report) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::UnwritableOutput, "cannot write " + path.string());
  out << evaluation_csv(report);
  if (!out) throw Error(ErrorCode::UnwritableOutput, "write failed for " + path.string());
}

}  // namespace clir
