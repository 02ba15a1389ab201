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

#include "drpr/relgraph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "drpr/error.hpp"
#include "drpr/knn.hpp"
#include "drpr/parallel.hpp"

namespace drpr {

std::string to_string(GraphMethod method) {
  switch (method) {
    case GraphMethod::kTsne:
      return "tsne";
    case GraphMethod::kUmap:
      return "umap";
    case GraphMethod::kExternal:
      return "external";
  }
  return "external";
}

GraphMethod parse_graph_method(const std::string& name) {
  if (name == "tsne") return GraphMethod::kTsne;
  if (name == "umap") return GraphMethod::kUmap;
  if (name == "external") return GraphMethod::kExternal;
  fail(ErrorCode::kInvalidArgument, "unknown graph method '" + name + "' (expected tsne, umap or external)");
}

RelationshipGraph::RelationshipGraph(std::size_t vertices, std::vector<Edge> edges, GraphProvenance provenance)
    : vertices_(vertices), edges_(std::move(edges)), provenance_(std::move(provenance)) {
  require(vertices_ >= 1, "graph must have at least one vertex");
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    auto& edge = edges_[e];
    const std::string where = "edge #" + std::to_string(e) + " (" + std::to_string(edge.i) + ", " +
                              std::to_string(edge.j) + "): ";
    if (edge.i >= vertices_ || edge.j >= vertices_) {
      fail(ErrorCode::kInvalidArgument, where + "vertex id out of range for n = " + std::to_string(vertices_));
    }
    if (edge.i == edge.j) fail(ErrorCode::kInvalidArgument, where + "self-loop");
    if (!(std::isfinite(edge.weight) && edge.weight > 0.0)) {
      fail(ErrorCode::kInvalidArgument, where + "weight must be positive and finite");
    }
    if (edge.i > edge.j) std::swap(edge.i, edge.j);
  }
  std::vector<std::size_t> order(edges_.size());
  for (std::size_t e = 0; e < order.size(); ++e) order[e] = e;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(edges_[a].i, edges_[a].j) < std::tie(edges_[b].i, edges_[b].j);
  });
  std::vector<Edge> sorted;
  sorted.reserve(edges_.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto& edge = edges_[order[r]];
    if (!sorted.empty() && sorted.back().i == edge.i && sorted.back().j == edge.j) {
      fail(ErrorCode::kInvalidArgument, "edge #" + std::to_string(order[r]) + " (" + std::to_string(edge.i) + ", " +
                                            std::to_string(edge.j) + "): duplicate of an earlier edge");
    }
    sorted.push_back(edge);
  }
  edges_ = std::move(sorted);

  offsets_.assign(vertices_ + 1, 0);
  for (const auto& edge : edges_) {
    ++offsets_[edge.i + 1];
    ++offsets_[edge.j + 1];
  }
  for (std::size_t v = 0; v < vertices_; ++v) offsets_[v + 1] += offsets_[v];
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& edge : edges_) {
    adjacency_[cursor[edge.i]++] = {edge.j, edge.weight};
    adjacency_[cursor[edge.j]++] = {edge.i, edge.weight};
  }
  for (std::size_t v = 0; v < vertices_; ++v) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]),
              [](const Adjacent& a, const Adjacent& b) { return a.id < b.id; });
  }
}

std::size_t BandwidthCalibration::converged_count() const {
  return static_cast<std::size_t>(std::count(converged.begin(), converged.end(), true));
}

double default_prune_eps(std::size_t vertices) { return 1e-8 / static_cast<double>(vertices); }

namespace {

struct DirectedEntry {
  VertexId lo;
  VertexId hi;
  double value;
};

struct SearchResult {
  double sigma;
  double achieved;
  bool converged;
};

// Bisects sigma on a log scale; `measure` must be nondecreasing in sigma.
template <typename Measure>
SearchResult bisect_bandwidth(Measure&& measure, double target, const CalibrationLimits& limits) {
  double lo = limits.sigma_min;
  double hi = limits.sigma_max;
  double sigma = std::sqrt(lo * hi);
  double achieved = measure(sigma);
  for (int it = 0; it < limits.max_iterations; ++it) {
    sigma = std::sqrt(lo * hi);
    achieved = measure(sigma);
    if (std::abs(achieved - target) <= limits.tolerance) return {sigma, achieved, true};
    if (achieved > target) {
      hi = sigma;
    } else {
      lo = sigma;
    }
  }
  sigma = achieved < target ? limits.sigma_max : limits.sigma_min;
  return {sigma, measure(sigma), false};
}

void check_limits(const CalibrationLimits& limits) {
  require(limits.tolerance > 0.0, "calibration tolerance must be positive");
  require(limits.sigma_min > 0.0 && limits.sigma_min < limits.sigma_max, "invalid bandwidth search bounds");
  require(limits.max_iterations >= 1, "calibration needs at least one iteration");
}

// Gaussian conditional at bandwidth sigma over distances already shifted by
// their minimum; writes probabilities into `p` when given.
double gaussian_conditional(std::span<const double> shifted, double sigma, std::vector<double>* p) {
  const double beta = 1.0 / (2.0 * sigma * sigma);
  double z = 0.0;
  for (double s : shifted) z += std::exp(-beta * s);
  double weighted = 0.0;
  for (double s : shifted) {
    const double w = std::exp(-beta * s);
    if (w > 0.0) weighted += (w / z) * (beta * s);
  }
  if (p != nullptr) {
    p->resize(shifted.size());
    for (std::size_t r = 0; r < shifted.size(); ++r) (*p)[r] = std::exp(-beta * shifted[r]) / z;
  }
  return std::exp(std::log(z) + weighted);
}

std::vector<Edge> merge_entries(std::vector<DirectedEntry> entries, bool fuzzy_union) {
  std::sort(entries.begin(), entries.end(), [](const DirectedEntry& a, const DirectedEntry& b) {
    return std::tie(a.lo, a.hi) < std::tie(b.lo, b.hi);
  });
  std::vector<Edge> out;
  for (std::size_t r = 0; r < entries.size();) {
    double a = entries[r].value;
    double b = 0.0;
    std::size_t next = r + 1;
    if (next < entries.size() && entries[next].lo == entries[r].lo && entries[next].hi == entries[r].hi) {
      b = entries[next].value;
      ++next;
    }
    const double merged = fuzzy_union ? a + b - a * b : a + b;
    out.push_back({entries[r].lo, entries[r].hi, merged});
    r = next;
  }
  return out;
}

}  // namespace

double tsne_perplexity(std::span<const double> sq_distances, double sigma) {
  require(!sq_distances.empty(), "perplexity needs at least one distance");
  const double base = *std::min_element(sq_distances.begin(), sq_distances.end());
  std::vector<double> shifted(sq_distances.begin(), sq_distances.end());
  for (double& s : shifted) s -= base;
  return gaussian_conditional(shifted, sigma, nullptr);
}

double umap_membership_sum(std::span<const double> distances, double rho, double sigma) {
  double sum = 0.0;
  for (double d : distances) sum += std::exp(-std::max(0.0, d - rho) / sigma);
  return sum;
}

GraphBuild build_tsne_graph(const Dataset& data, const TsneOptions& options) {
  const std::size_t n = data.rows();
  const double perplexity = options.perplexity;
  if (!(perplexity >= 2.0 && perplexity <= static_cast<double>(n - 1))) {
    fail(ErrorCode::kOutOfRange, "perplexity " + format_double(perplexity) + " is outside [2, " +
                                     std::to_string(n - 1) + "] for N = " + std::to_string(n));
  }
  const double prune_eps = options.prune_eps.value_or(default_prune_eps(n));
  require(std::isfinite(prune_eps) && prune_eps >= 0.0, "prune_eps must be a nonnegative number");
  check_limits(options.limits);

  const auto k = std::min<std::size_t>(static_cast<std::size_t>(std::ceil(3.0 * perplexity)), n - 1);
  const auto knn = exact_knn(data, k, options.threads);

  BandwidthCalibration calibration;
  calibration.target = perplexity;
  calibration.sigma.resize(n);
  calibration.achieved.resize(n);
  std::vector<char> converged(n, 0);
  std::vector<double> conditional(n * k);

  parallel_for(n, options.threads, [&](std::size_t i) {
    const auto list = knn[i];
    std::vector<double> shifted(k);
    const double base = list[0].distance * list[0].distance;
    for (std::size_t r = 0; r < k; ++r) shifted[r] = list[r].distance * list[r].distance - base;
    const auto found = bisect_bandwidth([&](double sigma) { return gaussian_conditional(shifted, sigma, nullptr); },
                                        perplexity, options.limits);
    std::vector<double> p;
    gaussian_conditional(shifted, found.sigma, &p);
    std::copy(p.begin(), p.end(), conditional.begin() + static_cast<std::ptrdiff_t>(i * k));
    calibration.sigma[i] = found.sigma;
    calibration.achieved[i] = found.achieved;
    converged[i] = found.converged ? 1 : 0;
  });
  calibration.converged.assign(converged.begin(), converged.end());

  std::vector<DirectedEntry> entries;
  entries.reserve(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    const auto list = knn[i];
    for (std::size_t r = 0; r < k; ++r) {
      const auto a = static_cast<VertexId>(i);
      const VertexId b = list[r].id;
      entries.push_back({std::min(a, b), std::max(a, b), conditional[i * k + r]});
    }
  }
  const double scale = 2.0 * static_cast<double>(n);
  auto merged = merge_entries(std::move(entries), false);
  std::vector<Edge> edges;
  edges.reserve(merged.size());
  for (auto edge : merged) {
    edge.weight /= scale;
    if (edge.weight > prune_eps) edges.push_back(edge);
  }

  GraphProvenance provenance{GraphMethod::kTsne, perplexity, {{"prune_eps", prune_eps}}};
  return {RelationshipGraph(n, std::move(edges), std::move(provenance)), std::move(calibration)};
}

GraphBuild build_umap_graph(const Dataset& data, const UmapOptions& options) {
  const std::size_t n = data.rows();
  const std::size_t k = options.n_neighbors;
  if (k < 2 || k > n - 1) {
    fail(ErrorCode::kOutOfRange, "n_neighbors " + std::to_string(k) + " is outside [2, " + std::to_string(n - 1) +
                                     "] for N = " + std::to_string(n));
  }
  check_limits(options.limits);
  const auto knn = exact_knn(data, k, options.threads);
  const double target = std::log2(static_cast<double>(k));

  BandwidthCalibration calibration;
  calibration.target = target;
  calibration.sigma.resize(n);
  calibration.achieved.resize(n);
  std::vector<char> converged(n, 0);
  std::vector<double> membership(n * k);

  parallel_for(n, options.threads, [&](std::size_t i) {
    const auto list = knn[i];
    std::vector<double> distances(k);
    for (std::size_t r = 0; r < k; ++r) distances[r] = list[r].distance;
    const double rho = distances[0];
    SearchResult found;
    if (distances.back() <= rho) {
      found = {1.0, static_cast<double>(k), false};
    } else {
      found = bisect_bandwidth([&](double sigma) { return umap_membership_sum(distances, rho, sigma); }, target,
                               options.limits);
    }
    for (std::size_t r = 0; r < k; ++r) {
      membership[i * k + r] = std::exp(-std::max(0.0, distances[r] - rho) / found.sigma);
    }
    calibration.sigma[i] = found.sigma;
    calibration.achieved[i] = found.achieved;
    converged[i] = found.converged ? 1 : 0;
  });
  calibration.converged.assign(converged.begin(), converged.end());

  std::vector<DirectedEntry> entries;
  entries.reserve(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    const auto list = knn[i];
    for (std::size_t r = 0; r < k; ++r) {
      const auto a = static_cast<VertexId>(i);
      const VertexId b = list[r].id;
      entries.push_back({std::min(a, b), std::max(a, b), membership[i * k + r]});
    }
  }
  auto merged = merge_entries(std::move(entries), true);
  std::erase_if(merged, [](const Edge& e) { return !(e.weight > 0.0); });

  GraphProvenance provenance{GraphMethod::kUmap, static_cast<double>(k), {}};
  return {RelationshipGraph(n, std::move(merged), std::move(provenance)), std::move(calibration)};
}

std::string graph_to_json(const RelationshipGraph& graph) {
  using nlohmann::json;
  json doc;
  doc["n"] = graph.vertices();
  doc["method"] = to_string(graph.provenance().method);
  const double param = graph.provenance().param;
  if (param == std::floor(param) && std::abs(param) < 9.0e15) {
    doc["param"] = static_cast<std::int64_t>(param);
  } else {
    doc["param"] = param;
  }
  doc["options"] = json::object();
  for (const auto& [key, value] : graph.provenance().options) doc["options"][key] = value;
  json edges = json::array();
  for (const auto& e : graph.edges()) edges.push_back({e.i, e.j, e.weight});
  doc["edges"] = std::move(edges);
  return doc.dump() + "\n";
}

RelationshipGraph graph_from_json(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("graph file: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::kParse, "graph file: expected a JSON object");
  if (!doc.contains("n") || !doc["n"].is_number_unsigned()) {
    fail(ErrorCode::kParse, "graph file: 'n' must be a positive integer");
  }
  if (!doc.contains("edges") || !doc["edges"].is_array()) fail(ErrorCode::kParse, "graph file: 'edges' must be an array");

  GraphProvenance provenance;
  if (doc.contains("method")) {
    if (!doc["method"].is_string()) fail(ErrorCode::kParse, "graph file: 'method' must be a string");
    provenance.method = parse_graph_method(doc["method"].get<std::string>());
  }
  if (doc.contains("param")) {
    if (!doc["param"].is_number()) fail(ErrorCode::kParse, "graph file: 'param' must be a number");
    provenance.param = doc["param"].get<double>();
  }
  if (doc.contains("options")) {
    if (!doc["options"].is_object()) fail(ErrorCode::kParse, "graph file: 'options' must be an object");
    for (const auto& [key, value] : doc["options"].items()) {
      if (!value.is_number()) fail(ErrorCode::kParse, "graph file: option '" + key + "' must be a number");
      provenance.options[key] = value.get<double>();
    }
  }

  const auto n = doc["n"].get<std::uint64_t>();
  std::vector<Edge> edges;
  edges.reserve(doc["edges"].size());
  std::size_t index = 0;
  for (const auto& item : doc["edges"]) {
    const std::string where = "graph file: edges[" + std::to_string(index) + "]: ";
    if (!item.is_array() || item.size() != 3 || !item[0].is_number_unsigned() || !item[1].is_number_unsigned() ||
        !item[2].is_number()) {
      fail(ErrorCode::kParse, where + "expected [i, j, weight] with nonnegative integer ids");
    }
    const auto i = item[0].get<std::uint64_t>();
    const auto j = item[1].get<std::uint64_t>();
    const double w = item[2].get<double>();
    if (i >= n || j >= n) fail(ErrorCode::kParse, where + "vertex id out of range for n = " + std::to_string(n));
    if (i == j) fail(ErrorCode::kParse, where + "self-loop (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    if (!(w > 0.0)) fail(ErrorCode::kParse, where + "weight must be positive");
    edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(j), w});
    ++index;
  }
  try {
    return RelationshipGraph(n, std::move(edges), std::move(provenance));
  } catch (const Error& e) {
    fail(ErrorCode::kParse, std::string("graph file: ") + e.what());
  }
}

void save_graph(const std::filesystem::path& path, const RelationshipGraph& graph) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << graph_to_json(graph);
  if (!out) fail(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

RelationshipGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return graph_from_json(buffer.str());
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace drpr
