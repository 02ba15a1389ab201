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
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "drpr/dataset.hpp"

namespace drpr {

enum class GraphMethod { kTsne, kUmap, kExternal };

std::string to_string(GraphMethod method);
GraphMethod parse_graph_method(const std::string& name);

struct Edge {
  VertexId i;
  VertexId j;
  double weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Adjacent {
  VertexId id;
  double weight;
};

struct GraphProvenance {
  GraphMethod method = GraphMethod::kExternal;
  double param = 0.0;                     // perplexity or n_neighbors
  std::map<std::string, double> options;  // e.g. prune_eps

  friend bool operator==(const GraphProvenance&, const GraphProvenance&) = default;
};

/// Simple undirected graph with positive weights. Edges are stored once with
/// i < j, sorted lexicographically; adjacency is built for both directions.
class RelationshipGraph {
 public:
  // Pairs given as (j, i) are normalized. Self-loops, duplicate pairs,
  // out-of-range ids and non-positive or non-finite weights are rejected with
  // the index of the offending edge.
  RelationshipGraph(std::size_t vertices, std::vector<Edge> edges, GraphProvenance provenance = {});

  std::size_t vertices() const noexcept { return vertices_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const GraphProvenance& provenance() const noexcept { return provenance_; }

  // Neighbors ascending by id.
  std::span<const Adjacent> neighbors(std::size_t v) const {
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(std::size_t v) const { return offsets_[v + 1] - offsets_[v]; }

  friend bool operator==(const RelationshipGraph& a, const RelationshipGraph& b) {
    return a.vertices_ == b.vertices_ && a.edges_ == b.edges_ && a.provenance_ == b.provenance_;
  }

 private:
  std::size_t vertices_;
  std::vector<Edge> edges_;
  GraphProvenance provenance_;
  std::vector<std::size_t> offsets_;
  std::vector<Adjacent> adjacency_;
};

/// Per-vertex bandwidth search outcome.
struct BandwidthCalibration {
  std::vector<double> sigma;
  std::vector<double> achieved;  // perplexity (t-SNE) or membership sum (UMAP)
  std::vector<bool> converged;
  double target = 0.0;

  std::size_t converged_count() const;
};

struct GraphBuild {
  RelationshipGraph graph;
  BandwidthCalibration calibration;
};

struct CalibrationLimits {
  double tolerance = 1e-3;
  double sigma_min = 1e-20;
  double sigma_max = 1e20;
  int max_iterations = 200;
};

struct TsneOptions {
  double perplexity = 30.0;
  std::optional<double> prune_eps;  // defaults to 1e-8 / N
  CalibrationLimits limits;
  unsigned threads = 1;
};

struct UmapOptions {
  std::size_t n_neighbors = 15;
  CalibrationLimits limits;
  unsigned threads = 1;
};

double default_prune_eps(std::size_t vertices);

// Candidate set: min(ceil(3 * perplexity), N - 1) nearest neighbors. Gaussian
// bandwidths are bisected (geometrically) until 2^H matches the perplexity;
// p_ij = (p_j|i + p_i|j) / 2N; pairs with p_ij <= prune_eps are dropped.
GraphBuild build_tsne_graph(const Dataset& data, const TsneOptions& options);

// rho_i is the nearest-neighbor distance; sigma_i solves
// sum_j exp(-max(0, d_ij - rho_i) / sigma_i) = log2(n_neighbors), and the
// directed memberships are merged by fuzzy union a + b - ab.
GraphBuild build_umap_graph(const Dataset& data, const UmapOptions& options);

// Perplexity of the Gaussian conditional over `sq_distances` at bandwidth
// sigma, i.e. 2^H with H in bits.
double tsne_perplexity(std::span<const double> sq_distances, double sigma);
double umap_membership_sum(std::span<const double> distances, double rho, double sigma);

std::string graph_to_json(const RelationshipGraph& graph);
RelationshipGraph graph_from_json(const std::string& text);
void save_graph(const std::filesystem::path& path, const RelationshipGraph& graph);
RelationshipGraph load_graph(const std::filesystem::path& path);

}  // namespace drpr
