// Copyright 2026 The drpr Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "drpr/dataset.hpp"
#include "drpr/relgraph.hpp"

namespace drpr {

struct MetricConfig {
  double alpha = 1.0;  // 0: shared component suffices, 1: direct edge required
  double beta = 1.0;
  // A score below the threshold is "low" for the interpretation quadrant.
  double precision_threshold = 0.5;
  double recall_threshold = 0.5;

  void validate() const;
};

/// TP/FP partition of a vertex's neighbors plus both false-negative counts.
struct VertexTallies {
  std::vector<VertexId> tp_ids;
  std::vector<VertexId> fp_ids;
  double tp_weight = 0.0;
  double fp_weight = 0.0;
  std::size_t fn_edge_count = 0;       // same-label vertices not adjacent
  std::size_t fn_component_count = 0;  // same-label vertices outside the intra-label component
};

/// Connected components after deleting every inter-label edge. A component
/// is identified by its smallest member id.
class ComponentAssignment {
 public:
  explicit ComponentAssignment(std::vector<VertexId> component);

  VertexId operator[](std::size_t v) const { return component_[v]; }
  std::size_t size_of(std::size_t v) const { return sizes_[component_[v]]; }
  std::size_t count() const noexcept { return count_; }
  std::span<const VertexId> ids() const noexcept { return component_; }

 private:
  std::vector<VertexId> component_;
  std::vector<std::size_t> sizes_;  // indexed by component id
  std::size_t count_ = 0;
};

enum class Quadrant {
  kLowPrecisionLowRecall,
  kHighPrecisionLowRecall,
  kLowPrecisionHighRecall,
  kHighPrecisionHighRecall,
};

std::string to_string(Quadrant q);
std::string describe(Quadrant q);

struct VertexScore {
  double precision;
  double recall;
  double fscore;
};

struct LabelScore {
  std::string name;
  std::size_t size = 0;
  double precision = 0.0;
  double recall = 0.0;
  double fscore = 0.0;
  Quadrant quadrant = Quadrant::kLowPrecisionLowRecall;
  // Mean per-vertex share of incident weight going to each label; the entry
  // for the label itself equals `precision`, so a row sums to one.
  std::vector<double> weight_share;
};

struct MetricReport {
  MetricConfig config;
  GraphProvenance provenance;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::vector<VertexScore> per_vertex;
  std::vector<LabelScore> per_label;
  double precision = 0.0;
  double recall = 0.0;
  double fscore = 0.0;
};

VertexTallies classify_neighbors(const RelationshipGraph& graph, const LabelAssignment& labels, std::size_t v);
ComponentAssignment intra_label_components(const RelationshipGraph& graph, const LabelAssignment& labels);

// classify_neighbors plus the two false-negative counts.
VertexTallies vertex_tallies(const RelationshipGraph& graph, const LabelAssignment& labels,
                             const ComponentAssignment& components, std::span<const std::size_t> group_sizes,
                             std::size_t v);

double precision_vertex(const VertexTallies& tallies);
double recall_vertex(const VertexTallies& tallies, double alpha);
double fscore_vertex(double precision, double recall, double beta);

Quadrant classify_quadrant(double precision, double recall, const MetricConfig& config);

MetricReport report(const RelationshipGraph& graph, const LabelAssignment& labels, const MetricConfig& config,
                    unsigned threads = 1);

std::string report_to_json(const MetricReport& report);
// Columns: id,label,precision,recall,fscore.
std::string per_vertex_csv(const MetricReport& report, const LabelAssignment& labels);
// Long format: label,target,share. `target` is the label receiving weight.
std::string decomposition_csv(const MetricReport& report);
// Columns: label,size,precision,recall,fscore,quadrant.
std::string per_label_csv(const MetricReport& report);

struct SweepRow {
  double k = 0.0;
  double precision = 0.0;
  double recall_a0 = 0.0;
  double recall_a1 = 0.0;
  double fscore = 0.0;
  std::optional<std::string> error;
};

struct SweepResult {
  GraphMethod method = GraphMethod::kTsne;
  MetricConfig config;
  std::vector<SweepRow> rows;
};

struct SweepOptions {
  std::optional<double> prune_eps;  // t-SNE only
  unsigned threads = 1;
};

// Builds one graph per k; a failing k is recorded in its row. Rows are sorted
// by k. fscore uses config.alpha.
SweepResult sweep(const Dataset& data, const LabelAssignment& labels, GraphMethod method,
                  std::span<const double> k_values, const MetricConfig& config, const SweepOptions& options = {});

// Columns: k,precision,recall_a0,recall_a1,fscore. A failed row has empty
// score cells; sweep_to_json carries the error text.
std::string sweep_to_csv(const SweepResult& result);
std::string sweep_to_json(const SweepResult& result);

// Builds the graph for a method and neighborhood parameter with defaults.
GraphBuild build_graph(const Dataset& data, GraphMethod method, double k, std::optional<double> prune_eps,
                       unsigned threads);

}  // namespace drpr
