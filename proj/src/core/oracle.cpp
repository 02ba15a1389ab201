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

#include "drpr/oracle.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "drpr/error.hpp"
#include "drpr/random.hpp"

namespace drpr::oracle {

MetricReport brute_force_report(const RelationshipGraph& graph, const LabelAssignment& labels, double alpha,
                                double beta) {
  const std::size_t n = graph.vertices();
  if (n > kMaxVertices) {
    fail(ErrorCode::kOutOfRange, "oracle is limited to " + std::to_string(kMaxVertices) + " vertices, got " +
                                     std::to_string(n));
  }
  require(labels.size() == n, "oracle: label count does not match graph");
  require(alpha >= 0.0 && alpha <= 1.0 && beta > 0.0, "oracle: invalid alpha or beta");

  // weight[i][j] = 0 means "no edge".
  std::vector<std::vector<double>> weight(n, std::vector<double>(n, 0.0));
  for (const auto& e : graph.edges()) {
    weight[e.i][e.j] = e.weight;
    weight[e.j][e.i] = e.weight;
  }

  // Component of each vertex after removing inter-label edges, by BFS.
  std::vector<std::size_t> comp(n, n);
  std::size_t next_comp = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != n) continue;
    std::deque<std::size_t> queue = {s};
    comp[s] = next_comp;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t w = 0; w < n; ++w) {
        if (weight[u][w] != 0.0 && labels[u] == labels[w] && comp[w] == n) {
          comp[w] = next_comp;
          queue.push_back(w);
        }
      }
    }
    ++next_comp;
  }

  const std::size_t L = labels.label_count();
  MetricReport out;
  out.config.alpha = alpha;
  out.config.beta = beta;
  out.provenance = graph.provenance();
  out.vertices = n;
  out.edges = graph.edges().size();
  out.per_vertex.resize(n);
  out.per_label.resize(L);
  for (std::size_t l = 0; l < L; ++l) {
    out.per_label[l].name = labels.name(static_cast<LabelId>(l));
    out.per_label[l].weight_share.assign(L, 0.0);
  }

  for (std::size_t i = 0; i < n; ++i) {
    std::size_t tp = 0, fp = 0, fn = 0, fn_bar = 0;
    double tp_w = 0.0, fp_w = 0.0;
    std::vector<double> to_label(L, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const bool adjacent = weight[i][j] != 0.0;
      const bool same = labels[i] == labels[j];
      if (adjacent && same) {
        ++tp;
        tp_w += weight[i][j];
      }
      if (adjacent && !same) {
        ++fp;
        fp_w += weight[i][j];
      }
      if (adjacent) to_label[labels[j]] += weight[i][j];
      if (same && !adjacent) ++fn;
      if (same && comp[j] != comp[i]) ++fn_bar;
    }
    const double p = (tp + fp > 0) ? tp_w / (tp_w + fp_w) : 1.0;
    const double r = (tp + fn > 0) ? static_cast<double>(tp) /
                                         (static_cast<double>(tp) + (alpha * static_cast<double>(fn) +
                                                                     (1.0 - alpha) * static_cast<double>(fn_bar)))
                                   : 1.0;
    const double f = (beta * beta * p + r) == 0.0 ? 0.0 : (beta * beta + 1.0) * (p * r) / ((beta * beta * p) + r);
    out.per_vertex[i] = {p, r, f};

    auto& ls = out.per_label[labels[i]];
    ls.size += 1;
    ls.precision += p;
    ls.recall += r;
    ls.fscore += f;
    if (tp + fp > 0) {
      for (std::size_t l = 0; l < L; ++l) {
        ls.weight_share[l] += (l == labels[i]) ? tp_w / (tp_w + fp_w) : to_label[l] / (tp_w + fp_w);
      }
    } else {
      ls.weight_share[labels[i]] += 1.0;
    }
  }

  for (auto& ls : out.per_label) {
    const double c = static_cast<double>(ls.size);
    ls.precision /= c;
    ls.recall /= c;
    ls.fscore /= c;
    for (auto& s : ls.weight_share) s /= c;
    const bool hp = ls.precision >= out.config.precision_threshold;
    const bool hr = ls.recall >= out.config.recall_threshold;
    ls.quadrant = hp ? (hr ? Quadrant::kHighPrecisionHighRecall : Quadrant::kHighPrecisionLowRecall)
                     : (hr ? Quadrant::kLowPrecisionHighRecall : Quadrant::kLowPrecisionLowRecall);
    out.precision += ls.precision / static_cast<double>(L);
    out.recall += ls.recall / static_cast<double>(L);
    out.fscore += ls.fscore / static_cast<double>(L);
  }
  return out;
}

RandomInstance random_graph(std::size_t n, std::size_t n_labels, double edge_prob, std::uint64_t seed) {
  require(n >= 2, "random_graph: n must be at least 2");
  require(n_labels >= 1 && n_labels <= n, "random_graph: need 1 <= n_labels <= n");
  require(edge_prob >= 0.0 && edge_prob <= 1.0, "random_graph: edge_prob must lie in [0, 1]");

  Random rng(seed);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double u = rng.uniform();
      const double w = 1.0 - rng.uniform();
      if (u < edge_prob) edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(j), w});
    }
  }
  std::vector<LabelId> first(n_labels);
  for (std::size_t l = 0; l < n_labels; ++l) first[l] = static_cast<LabelId>(l);
  for (std::size_t l = n_labels; l > 1; --l) std::swap(first[l - 1], first[rng.below(l)]);
  std::vector<LabelId> assigned(n);
  for (std::size_t v = 0; v < n; ++v) {
    assigned[v] = v < n_labels ? first[v] : static_cast<LabelId>(rng.below(n_labels));
  }
  std::vector<std::string> vocabulary;
  for (std::size_t l = 0; l < n_labels; ++l) vocabulary.push_back("L" + std::to_string(l));
  return {RelationshipGraph(n, std::move(edges)), LabelAssignment(std::move(assigned), std::move(vocabulary))};
}

double max_difference(const MetricReport& a, const MetricReport& b) {
  constexpr double kMismatch = std::numeric_limits<double>::infinity();
  if (a.per_vertex.size() != b.per_vertex.size() || a.per_label.size() != b.per_label.size()) return kMismatch;
  double worst = 0.0;
  auto track = [&](double x, double y) { worst = std::max(worst, std::abs(x - y)); };
  for (std::size_t v = 0; v < a.per_vertex.size(); ++v) {
    track(a.per_vertex[v].precision, b.per_vertex[v].precision);
    track(a.per_vertex[v].recall, b.per_vertex[v].recall);
    track(a.per_vertex[v].fscore, b.per_vertex[v].fscore);
  }
  for (std::size_t l = 0; l < a.per_label.size(); ++l) {
    const auto& x = a.per_label[l];
    const auto& y = b.per_label[l];
    if (x.size != y.size || x.quadrant != y.quadrant || x.weight_share.size() != y.weight_share.size()) {
      return kMismatch;
    }
    track(x.precision, y.precision);
    track(x.recall, y.recall);
    track(x.fscore, y.fscore);
    for (std::size_t t = 0; t < x.weight_share.size(); ++t) track(x.weight_share[t], y.weight_share[t]);
  }
  track(a.precision, b.precision);
  track(a.recall, b.recall);
  track(a.fscore, b.fscore);
  return worst;
}

}  // namespace drpr::oracle
