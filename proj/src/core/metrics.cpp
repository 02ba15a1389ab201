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

#include "drpr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "drpr/error.hpp"
#include "drpr/parallel.hpp"

namespace drpr {
namespace {

// Union by size with path halving.
class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

void check_sizes(const RelationshipGraph& graph, const LabelAssignment& labels) {
  if (graph.vertices() != labels.size()) {
    fail(ErrorCode::kInvalidArgument, "graph has " + std::to_string(graph.vertices()) + " vertices but " +
                                          std::to_string(labels.size()) + " labels were given");
  }
}

// Labels ordered by their smallest member id: a summation order that does not
// depend on how label ids were assigned.
std::vector<LabelId> canonical_label_order(const LabelAssignment& labels) {
  std::vector<LabelId> order;
  std::vector<bool> seen(labels.label_count(), false);
  for (std::size_t v = 0; v < labels.size(); ++v) {
    if (!seen[labels[v]]) {
      seen[labels[v]] = true;
      order.push_back(labels[v]);
    }
  }
  return order;
}

std::string quadrant_key(Quadrant q) { return to_string(q); }

}  // namespace

void MetricConfig::validate() const {
  require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
  require(std::isfinite(beta) && beta > 0.0, "beta must be positive");
  require(precision_threshold >= 0.0 && precision_threshold <= 1.0, "precision threshold must lie in [0, 1]");
  require(recall_threshold >= 0.0 && recall_threshold <= 1.0, "recall threshold must lie in [0, 1]");
}

ComponentAssignment::ComponentAssignment(std::vector<VertexId> component) : component_(std::move(component)) {
  sizes_.assign(component_.size(), 0);
  for (VertexId c : component_) {
    require(c < component_.size(), "component id out of range");
    if (sizes_[c]++ == 0) ++count_;
  }
}

std::string to_string(Quadrant q) {
  switch (q) {
    case Quadrant::kLowPrecisionLowRecall:
      return "low-precision/low-recall";
    case Quadrant::kHighPrecisionLowRecall:
      return "high-precision/low-recall";
    case Quadrant::kLowPrecisionHighRecall:
      return "low-precision/high-recall";
    case Quadrant::kHighPrecisionHighRecall:
      return "high-precision/high-recall";
  }
  return "";
}

std::string describe(Quadrant q) {
  switch (q) {
    case Quadrant::kLowPrecisionLowRecall:
      return "Local neighborhoods do not follow the labels and the label is not held in a coherent group.";
    case Quadrant::kHighPrecisionLowRecall:
      return "Local neighborhoods follow the labels, but the label is spread over several groups.";
    case Quadrant::kLowPrecisionHighRecall:
      return "Local neighborhoods mix labels, though most members sit in one coherent group.";
    case Quadrant::kHighPrecisionHighRecall:
      return "Local neighborhoods follow the labels and most members sit in one coherent group.";
  }
  return "";
}

VertexTallies classify_neighbors(const RelationshipGraph& graph, const LabelAssignment& labels, std::size_t v) {
  check_sizes(graph, labels);
  if (v >= graph.vertices()) {
    fail(ErrorCode::kOutOfRange, "vertex " + std::to_string(v) + " is outside the graph (n = " +
                                     std::to_string(graph.vertices()) + ")");
  }
  VertexTallies t;
  const LabelId own = labels[v];
  for (const auto& adj : graph.neighbors(v)) {
    if (labels[adj.id] == own) {
      t.tp_ids.push_back(adj.id);
      t.tp_weight += adj.weight;
    } else {
      t.fp_ids.push_back(adj.id);
      t.fp_weight += adj.weight;
    }
  }
  return t;
}

ComponentAssignment intra_label_components(const RelationshipGraph& graph, const LabelAssignment& labels) {
  check_sizes(graph, labels);
  const std::size_t n = graph.vertices();
  DisjointSet sets(n);
  for (const auto& e : graph.edges()) {
    if (labels[e.i] == labels[e.j]) sets.unite(e.i, e.j);
  }
  std::vector<VertexId> smallest(n, static_cast<VertexId>(n));
  std::vector<VertexId> component(n);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t root = sets.find(v);
    if (smallest[root] == n) smallest[root] = static_cast<VertexId>(v);
    component[v] = smallest[root];
  }
  return ComponentAssignment(std::move(component));
}

VertexTallies vertex_tallies(const RelationshipGraph& graph, const LabelAssignment& labels,
                             const ComponentAssignment& components, std::span<const std::size_t> group_sizes,
                             std::size_t v) {
  auto t = classify_neighbors(graph, labels, v);
  const std::size_t same = group_sizes[labels[v]];
  t.fn_edge_count = same - 1 - t.tp_ids.size();
  t.fn_component_count = same - components.size_of(v);
  return t;
}

double precision_vertex(const VertexTallies& t) {
  if (t.tp_ids.empty() && t.fp_ids.empty()) return 1.0;
  return t.tp_weight / (t.tp_weight + t.fp_weight);
}

double recall_vertex(const VertexTallies& t, double alpha) {
  const auto tp = static_cast<double>(t.tp_ids.size());
  if (t.tp_ids.size() + t.fn_edge_count == 0) return 1.0;
  // Same value as alpha*FN + (1-alpha)*FN_bar, but exactly monotone in alpha.
  const auto fn_bar = static_cast<double>(t.fn_component_count);
  const double fn = fn_bar + alpha * (static_cast<double>(t.fn_edge_count) - fn_bar);
  return tp / (tp + fn);
}

double fscore_vertex(double precision, double recall, double beta) {
  const double b2 = beta * beta;
  const double denom = b2 * precision + recall;
  if (denom == 0.0) return 0.0;
  return (b2 + 1.0) * precision * recall / denom;
}

Quadrant classify_quadrant(double precision, double recall, const MetricConfig& config) {
  const bool high_p = precision >= config.precision_threshold;
  const bool high_r = recall >= config.recall_threshold;
  if (high_p) return high_r ? Quadrant::kHighPrecisionHighRecall : Quadrant::kHighPrecisionLowRecall;
  return high_r ? Quadrant::kLowPrecisionHighRecall : Quadrant::kLowPrecisionLowRecall;
}

MetricReport report(const RelationshipGraph& graph, const LabelAssignment& labels, const MetricConfig& config,
                    unsigned threads) {
  config.validate();
  check_sizes(graph, labels);
  const std::size_t n = graph.vertices();
  const std::size_t n_labels = labels.label_count();
  const auto components = intra_label_components(graph, labels);
  const auto sizes = labels.group_sizes();

  MetricReport out;
  out.config = config;
  out.provenance = graph.provenance();
  out.vertices = n;
  out.edges = graph.edges().size();
  out.per_vertex.resize(n);
  parallel_for(n, threads, [&](std::size_t v) {
    const auto t = vertex_tallies(graph, labels, components, sizes, v);
    const double p = precision_vertex(t);
    const double r = recall_vertex(t, config.alpha);
    out.per_vertex[v] = {p, r, fscore_vertex(p, r, config.beta)};
  });

  out.per_label.resize(n_labels);
  for (std::size_t l = 0; l < n_labels; ++l) {
    out.per_label[l].name = labels.name(static_cast<LabelId>(l));
    out.per_label[l].size = sizes[l];
    out.per_label[l].weight_share.assign(n_labels, 0.0);
  }
  // Ascending vertex order within each label.
  std::vector<double> bucket(n_labels);
  for (std::size_t v = 0; v < n; ++v) {
    auto& ls = out.per_label[labels[v]];
    ls.precision += out.per_vertex[v].precision;
    ls.recall += out.per_vertex[v].recall;
    ls.fscore += out.per_vertex[v].fscore;

    const auto adjacent = graph.neighbors(v);
    if (adjacent.empty()) continue;
    std::fill(bucket.begin(), bucket.end(), 0.0);
    double tp = 0.0;
    double fp = 0.0;
    for (const auto& adj : adjacent) {
      bucket[labels[adj.id]] += adj.weight;
      (labels[adj.id] == labels[v] ? tp : fp) += adj.weight;
    }
    const double total = tp + fp;
    for (std::size_t l = 0; l < n_labels; ++l) {
      if (l != labels[v] && bucket[l] > 0.0) ls.weight_share[l] += bucket[l] / total;
    }
  }
  for (auto& ls : out.per_label) {
    const auto size = static_cast<double>(ls.size);
    ls.precision /= size;
    ls.recall /= size;
    ls.fscore /= size;
    for (auto& share : ls.weight_share) share /= size;
    ls.quadrant = classify_quadrant(ls.precision, ls.recall, config);
  }
  for (std::size_t l = 0; l < n_labels; ++l) out.per_label[l].weight_share[l] = out.per_label[l].precision;

  for (LabelId l : canonical_label_order(labels)) {
    out.precision += out.per_label[l].precision;
    out.recall += out.per_label[l].recall;
    out.fscore += out.per_label[l].fscore;
  }
  const auto count = static_cast<double>(n_labels);
  out.precision /= count;
  out.recall /= count;
  out.fscore /= count;
  return out;
}

std::string report_to_json(const MetricReport& r) {
  using nlohmann::json;
  json doc;
  doc["config"] = {{"alpha", r.config.alpha},
                   {"beta", r.config.beta},
                   {"precision_threshold", r.config.precision_threshold},
                   {"recall_threshold", r.config.recall_threshold}};
  json graph = {{"method", to_string(r.provenance.method)},
                {"param", r.provenance.param},
                {"n", r.vertices},
                {"edges", r.edges},
                {"options", json::object()}};
  for (const auto& [key, value] : r.provenance.options) graph["options"][key] = value;
  doc["graph"] = std::move(graph);
  doc["global"] = {{"precision", r.precision}, {"recall", r.recall}, {"fscore", r.fscore}};
  json per_label = json::array();
  for (const auto& ls : r.per_label) {
    json shares = json::object();
    for (std::size_t l = 0; l < ls.weight_share.size(); ++l) shares[r.per_label[l].name] = ls.weight_share[l];
    per_label.push_back({{"name", ls.name},
                         {"size", ls.size},
                         {"precision", ls.precision},
                         {"recall", ls.recall},
                         {"fscore", ls.fscore},
                         {"quadrant", quadrant_key(ls.quadrant)},
                         {"interpretation", describe(ls.quadrant)},
                         {"weight_share", std::move(shares)}});
  }
  doc["labels"] = std::move(per_label);
  return doc.dump(2) + "\n";
}

std::string per_vertex_csv(const MetricReport& r, const LabelAssignment& labels) {
  require(labels.size() == r.per_vertex.size(), "label count does not match report");
  std::ostringstream out;
  out << "id,label,precision,recall,fscore\n";
  for (std::size_t v = 0; v < r.per_vertex.size(); ++v) {
    const auto& s = r.per_vertex[v];
    out << v << ',' << labels.name(labels[v]) << ',' << format_double(s.precision) << ','
        << format_double(s.recall) << ',' << format_double(s.fscore) << '\n';
  }
  return out.str();
}

std::string decomposition_csv(const MetricReport& r) {
  std::ostringstream out;
  out << "label,target,share\n";
  for (const auto& ls : r.per_label) {
    for (std::size_t l = 0; l < ls.weight_share.size(); ++l) {
      out << ls.name << ',' << r.per_label[l].name << ',' << format_double(ls.weight_share[l]) << '\n';
    }
  }
  return out.str();
}

std::string per_label_csv(const MetricReport& r) {
  std::ostringstream out;
  out << "label,size,precision,recall,fscore,quadrant\n";
  for (const auto& ls : r.per_label) {
    out << ls.name << ',' << ls.size << ',' << format_double(ls.precision) << ',' << format_double(ls.recall) << ','
        << format_double(ls.fscore) << ',' << quadrant_key(ls.quadrant) << '\n';
  }
  return out.str();
}

GraphBuild build_graph(const Dataset& data, GraphMethod method, double k, std::optional<double> prune_eps,
                       unsigned threads) {
  switch (method) {
    case GraphMethod::kTsne: {
      TsneOptions options;
      options.perplexity = k;
      options.prune_eps = prune_eps;
      options.threads = threads;
      return build_tsne_graph(data, options);
    }
    case GraphMethod::kUmap: {
      if (!(k >= 0.0 && k == std::floor(k))) {
        fail(ErrorCode::kInvalidArgument, "n_neighbors must be an integer, got " + format_double(k));
      }
      UmapOptions options;
      options.n_neighbors = static_cast<std::size_t>(k);
      options.threads = threads;
      return build_umap_graph(data, options);
    }
    case GraphMethod::kExternal:
      break;
  }
  fail(ErrorCode::kInvalidArgument, "graphs can only be built with the tsne or umap method");
}

SweepResult sweep(const Dataset& data, const LabelAssignment& labels, GraphMethod method,
                  std::span<const double> k_values, const MetricConfig& config, const SweepOptions& options) {
  config.validate();
  require(labels.size() == data.rows(), "dataset has " + std::to_string(data.rows()) + " rows but " +
                                            std::to_string(labels.size()) + " labels were given");
  require(method != GraphMethod::kExternal, "sweep needs the tsne or umap method");
  SweepResult result;
  result.method = method;
  result.config = config;
  std::vector<double> ks(k_values.begin(), k_values.end());
  std::sort(ks.begin(), ks.end());
  for (double k : ks) {
    SweepRow row;
    row.k = k;
    try {
      const auto build = build_graph(data, method, k, options.prune_eps, options.threads);
      MetricConfig strict = config;
      strict.alpha = 1.0;
      MetricConfig loose = config;
      loose.alpha = 0.0;
      const auto main = report(build.graph, labels, config, options.threads);
      row.precision = main.precision;
      row.fscore = main.fscore;
      row.recall_a1 = config.alpha == 1.0 ? main.recall : report(build.graph, labels, strict, options.threads).recall;
      row.recall_a0 = config.alpha == 0.0 ? main.recall : report(build.graph, labels, loose, options.threads).recall;
    } catch (const Error& e) {
      row.error = e.what();
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "k,precision,recall_a0,recall_a1,fscore\n";
  for (const auto& row : result.rows) {
    out << format_double(row.k);
    if (row.error) {
      out << ",,,,\n";
      continue;
    }
    out << ',' << format_double(row.precision) << ',' << format_double(row.recall_a0) << ','
        << format_double(row.recall_a1) << ',' << format_double(row.fscore) << '\n';
  }
  return out.str();
}

std::string sweep_to_json(const SweepResult& result) {
  using nlohmann::json;
  json doc;
  doc["method"] = to_string(result.method);
  doc["alpha"] = result.config.alpha;
  doc["beta"] = result.config.beta;
  json rows = json::array();
  for (const auto& row : result.rows) {
    json item = {{"k", row.k}};
    if (row.error) {
      item["error"] = *row.error;
    } else {
      item["precision"] = row.precision;
      item["recall_a0"] = row.recall_a0;
      item["recall_a1"] = row.recall_a1;
      item["fscore"] = row.fscore;
    }
    rows.push_back(std::move(item));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

}  // namespace drpr
