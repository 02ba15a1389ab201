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

#include <cmath>
#include <numeric>

#include <doctest.h>

#include "drpr/dataset.hpp"
#include "drpr/error.hpp"
#include "drpr/metrics.hpp"
#include "drpr/oracle.hpp"
#include "drpr/relgraph.hpp"
#include "../support/properties.hpp"

using namespace drpr;

namespace {

LabelAssignment names(std::initializer_list<const char*> list) {
  std::vector<std::string> v(list.begin(), list.end());
  return LabelAssignment::from_names(v);
}

// a b c (white) - d e (gray) - f g (white), chained.
RelationshipGraph two_white_islands() {
  return RelationshipGraph(7, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {4, 5, 1}, {5, 6, 1}});
}
const LabelAssignment kIslandLabels = names({"w", "w", "w", "g", "g", "w", "w"});

// Vertex 0 has three same-label neighbors and one of another label.
RelationshipGraph six_vertex() { return RelationshipGraph(6, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {0, 4, 1}, {4, 5, 1}}); }
const LabelAssignment kSixLabels = names({"a", "a", "a", "a", "b", "b"});

// Label of size 4: v=0 touches 1 directly, 1-2-3 is a path.
RelationshipGraph group_of_four() { return RelationshipGraph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}}); }

VertexTallies tallies_of(const RelationshipGraph& g, const LabelAssignment& labels, std::size_t v) {
  const auto comps = intra_label_components(g, labels);
  const auto sizes = labels.group_sizes();
  return vertex_tallies(g, labels, comps, sizes, v);
}

const LabeledDataset& blobs() {
  static const auto data = generate_blobs(three_blobs_spec(7));
  return data;
}

}  // namespace

TEST_CASE("neighbor classification") {
  const RelationshipGraph g(4, {{0, 1, 0.6}, {0, 2, 0.2}, {0, 3, 0.2}});
  const auto labels = names({"x", "x", "x", "y"});
  const auto t = classify_neighbors(g, labels, 0);
  CHECK(t.tp_weight == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(t.fp_weight == 0.2);
  CHECK(t.tp_ids == std::vector<VertexId>{1, 2});
  CHECK(t.fp_ids == std::vector<VertexId>{3});
  CHECK(precision_vertex(t) == doctest::Approx(0.8).epsilon(1e-15));

  const RelationshipGraph empty(3, {});
  const auto iso = classify_neighbors(empty, names({"x", "x", "y"}), 0);
  CHECK(iso.tp_ids.empty());
  CHECK(iso.fp_ids.empty());
  CHECK(precision_vertex(iso) == 1.0);

  const RelationshipGraph tri(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  for (std::size_t v = 0; v < 3; ++v) CHECK(classify_neighbors(tri, names({"s", "s", "s"}), v).fp_ids.empty());
}

TEST_CASE("intra-label components split and merge") {
  const auto split = intra_label_components(two_white_islands(), kIslandLabels);
  CHECK(split[0] == 0);
  CHECK(split[1] == 0);
  CHECK(split[2] == 0);
  CHECK(split[5] == 5);
  CHECK(split[6] == 5);
  CHECK(split[3] == 3);
  CHECK(split[4] == 3);
  CHECK(split.count() == 3);
  CHECK(split.size_of(0) == 3);
  CHECK(split.size_of(6) == 2);

  const auto base = two_white_islands();
  auto edges = std::vector<Edge>(base.edges().begin(), base.edges().end());
  edges.push_back({0, 5, 1});
  const auto merged = intra_label_components(RelationshipGraph(7, edges), kIslandLabels);
  for (VertexId v : {0u, 1u, 2u, 5u, 6u}) CHECK(merged[v] == 0);
  CHECK(merged.size_of(5) == 5);

  const auto lone = intra_label_components(RelationshipGraph(4, {}), names({"a", "a", "b", "b"}));
  CHECK(lone.count() == 4);
  for (VertexId v = 0; v < 4; ++v) CHECK(lone[v] == v);
}

TEST_CASE("six-vertex precision") {
  const auto t = classify_neighbors(six_vertex(), kSixLabels, 0);
  CHECK(precision_vertex(t) == 0.75);
  const auto ref = oracle::brute_force_report(six_vertex(), kSixLabels, 1.0, 1.0);
  CHECK(ref.per_vertex[0].precision == 0.75);
}

TEST_CASE("recall on a group of four") {
  const auto g = group_of_four();
  const auto labels = names({"q", "q", "q", "q"});
  const auto t = tallies_of(g, labels, 0);
  CHECK(t.fn_edge_count == 2);
  CHECK(t.fn_component_count == 0);
  CHECK(recall_vertex(t, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(recall_vertex(t, 0.0) == 1.0);
  CHECK(recall_vertex(t, 0.5) == 0.5);
  const auto ref = oracle::brute_force_report(g, labels, 0.5, 1.0);
  CHECK(ref.per_vertex[0].recall == 0.5);
}

TEST_CASE("recall edge cases") {
  const RelationshipGraph g(3, {{0, 1, 1}});
  const auto labels = names({"a", "b", "b"});
  CHECK(recall_vertex(tallies_of(g, labels, 0), 1.0) == 1.0);
  // v adjacent to every same-label vertex.
  const RelationshipGraph star(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}});
  for (double a : {0.0, 0.3, 1.0}) CHECK(recall_vertex(tallies_of(star, names({"s", "s", "s", "s"}), 0), a) == 1.0);
  // Components across the same label count toward the component term only.
  const auto split = tallies_of(two_white_islands(), kIslandLabels, 0);
  CHECK(split.fn_edge_count == 3);
  CHECK(split.fn_component_count == 2);
  CHECK(recall_vertex(split, 0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(recall_vertex(split, 1.0) == doctest::Approx(1.0 / 4.0).epsilon(1e-15));
}

TEST_CASE("fscore") {
  for (double x : {0.1, 0.5, 0.9}) {
    for (double b : {0.5, 1.0, 2.0}) CHECK(fscore_vertex(x, x, b) == doctest::Approx(x).epsilon(1e-15));
  }
  CHECK(fscore_vertex(1.0, 1.0 / 3.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(fscore_vertex(0.92, 1.0, 1.0) == doctest::Approx(1.84 / 1.92).epsilon(1e-15));
  CHECK(std::abs(fscore_vertex(0.92, 1.0, 1.0) - 0.9583) < 1e-4);
  CHECK(fscore_vertex(0.0, 0.0, 1.0) == 0.0);
  // Larger beta leans toward recall.
  CHECK(fscore_vertex(0.2, 0.8, 2.0) > fscore_vertex(0.2, 0.8, 1.0));
}

TEST_CASE("quadrants use a strict lower bound for low") {
  MetricConfig c;
  CHECK(classify_quadrant(0.5, 0.5, c) == Quadrant::kHighPrecisionHighRecall);
  CHECK(classify_quadrant(0.49, 0.9, c) == Quadrant::kLowPrecisionHighRecall);
  CHECK(classify_quadrant(0.9, 0.1, c) == Quadrant::kHighPrecisionLowRecall);
  CHECK(classify_quadrant(0.1, 0.1, c) == Quadrant::kLowPrecisionLowRecall);
  c.precision_threshold = 0.95;
  CHECK(classify_quadrant(0.9, 0.9, c) == Quadrant::kLowPrecisionHighRecall);
  CHECK(to_string(Quadrant::kHighPrecisionLowRecall) == "high-precision/low-recall");
  CHECK_FALSE(describe(Quadrant::kLowPrecisionLowRecall).empty());
}

TEST_CASE("metric config validation") {
  MetricConfig c;
  c.alpha = 1.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.beta = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.recall_threshold = -0.1;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("report rejects mismatched vertex counts and names both") {
  try {
    report(group_of_four(), names({"a", "a", "b"}), {});
    FAIL("expected an error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find('4') != std::string::npos);
    CHECK(msg.find('3') != std::string::npos);
  }
}

TEST_CASE("single label everywhere scores one") {
  const auto inst = oracle::random_graph(25, 1, 0.3, 4);
  for (double a : {0.0, 1.0}) {
    MetricConfig c;
    c.alpha = a;
    const auto r = report(inst.graph, inst.labels, c);
    CHECK(r.precision == 1.0);
    CHECK(r.per_label[0].precision == 1.0);
    if (a == 0.0) CHECK(r.recall == 1.0);
  }
  // A complete single-label graph is perfect for every alpha and beta.
  std::vector<Edge> edges;
  for (VertexId i = 0; i < 6; ++i) {
    for (VertexId j = i + 1; j < 6; ++j) edges.push_back({i, j, 0.1 + i + j});
  }
  const RelationshipGraph clique(6, edges);
  const auto labels = names({"c", "c", "c", "c", "c", "c"});
  for (double a : {0.0, 0.5, 1.0}) {
    for (double b : {0.5, 2.0}) {
      MetricConfig c;
      c.alpha = a;
      c.beta = b;
      const auto r = report(clique, labels, c);
      CHECK(r.precision == 1.0);
      CHECK(r.recall == 1.0);
      CHECK(r.fscore == 1.0);
    }
  }
}

TEST_CASE("fully connected class without external edges is perfect") {
  // Label x is a clique {0,1,2}; y is a noisy rest with an edge into nothing of x.
  const RelationshipGraph g(6, {{0, 1, 1}, {1, 2, 2}, {0, 2, 3}, {3, 4, 1}, {4, 5, 1}});
  const auto labels = names({"x", "x", "x", "y", "z", "y"});
  MetricConfig c;
  c.alpha = 1.0;
  c.beta = 2.0;
  const auto r = report(g, labels, c);
  CHECK(r.per_label[0].precision == 1.0);
  CHECK(r.per_label[0].recall == 1.0);
  CHECK(r.per_label[0].fscore == 1.0);
}

TEST_CASE("global score is the unweighted mean over labels") {
  // Label a has 10 vertices in a clique, label b has 2 vertices with one bad link each.
  std::vector<Edge> edges;
  for (VertexId i = 0; i < 10; ++i) {
    for (VertexId j = i + 1; j < 10; ++j) edges.push_back({i, j, 1});
  }
  edges.push_back({10, 0, 1});
  edges.push_back({11, 1, 1});
  std::vector<std::string> labs(10, "a");
  labs.push_back("b");
  labs.push_back("b");
  const auto labels = LabelAssignment::from_names(labs);
  const auto r = report(RelationshipGraph(12, edges), labels, {});
  CHECK(r.precision == doctest::Approx((r.per_label[0].precision + r.per_label[1].precision) / 2).epsilon(1e-15));
  CHECK(r.per_label[1].precision == 0.0);

  // Duplicate every b vertex with the same connectivity: b's mean is unchanged,
  // and the global score still weights both labels equally.
  edges.push_back({12, 0, 1});
  edges.push_back({13, 1, 1});
  labs.push_back("b");
  labs.push_back("b");
  const auto r2 = report(RelationshipGraph(14, edges), LabelAssignment::from_names(labs), {});
  CHECK(r2.per_label[1].precision == 0.0);
  CHECK(r2.precision == doctest::Approx((r2.per_label[0].precision + r2.per_label[1].precision) / 2).epsilon(1e-15));
  double vertex_mean = 0;
  for (const auto& v : r2.per_vertex) vertex_mean += v.precision / 14;
  CHECK(std::abs(vertex_mean - r2.precision) > 0.05);
}

TEST_CASE("decomposition rows sum to one around the precision") {
  const auto inst = oracle::random_graph(30, 4, 0.2, 17);
  const auto r = report(inst.graph, inst.labels, {});
  for (std::size_t l = 0; l < r.per_label.size(); ++l) {
    const auto& s = r.per_label[l].weight_share;
    CHECK(s[l] == doctest::Approx(r.per_label[l].precision).epsilon(1e-14));
    const double sum = std::accumulate(s.begin(), s.end(), 0.0);
    // Isolated vertices contribute precision 1 with no weight elsewhere.
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto csv = decomposition_csv(r);
  CHECK(csv.rfind("label,target,share\n", 0) == 0);
}

TEST_CASE("score bounds hold on random graphs") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = oracle::random_graph(20, 3, 0.25, seed);
    const auto r0 = testing::score(inst.graph, inst.labels, 0.0);
    const auto rh = testing::score(inst.graph, inst.labels, 0.4);
    const auto r1 = testing::score(inst.graph, inst.labels, 1.0);
    for (std::size_t v = 0; v < 20; ++v) {
      const auto& s = rh.per_vertex[v];
      CHECK(r1.per_vertex[v].recall <= s.recall);
      CHECK(s.recall <= r0.per_vertex[v].recall);
      CHECK(s.precision >= 0.0);
      CHECK(s.precision <= 1.0);
      CHECK(std::min(s.precision, s.recall) <= s.fscore + 1e-15);
      CHECK(s.fscore <= std::max(s.precision, s.recall) + 1e-15);
    }
  }
}

TEST_CASE("invariance and monotonicity properties") {
  const auto alpha = testing::alpha_monotonicity(100, 1);
  CHECK(alpha.checks > 0);
  CHECK(alpha.violations == 0);
  const auto edges = testing::edge_addition_monotonicity(200, 2);
  CHECK(edges.checks > 0);
  CHECK(edges.violations == 0);
  CHECK(testing::scaling_invariance(20, 3, 1e6).violations == 0);
  CHECK(testing::scaling_invariance(20, 4, 1e-6).violations == 0);
  CHECK(testing::permutation_invariance(20, 5).violations == 0);
}

TEST_CASE("report does not depend on the thread count") {
  const auto inst = oracle::random_graph(200, 4, 0.05, 8);
  const auto a = report(inst.graph, inst.labels, {}, 1);
  const auto b = report(inst.graph, inst.labels, {}, 6);
  CHECK(report_to_json(a) == report_to_json(b));
}

TEST_CASE("three-blob reports follow the perplexity trend") {
  MetricConfig c;
  const auto at = [&](double perp) {
    return report(build_graph(blobs().data, GraphMethod::kTsne, perp, {}, 0).graph, blobs().labels, c);
  };
  const auto low = at(2.0);
  CHECK(low.precision == 1.0);
  CHECK(low.recall < 0.5);
  CHECK(at(149.0).precision <= 0.5);
}

TEST_CASE("sweep table") {
  const std::vector<double> ks{80, 2, 5};
  const auto result = sweep(blobs().data, blobs().labels, GraphMethod::kTsne, ks, {});
  REQUIRE(result.rows.size() == 3);
  CHECK(result.rows[0].k == 2);
  CHECK(result.rows[0].precision == 1.0);
  CHECK(result.rows[1].recall_a0 == 1.0);
  CHECK(sweep_to_csv(result).rfind("k,precision,recall_a0,recall_a1,fscore\n", 0) == 0);

  CHECK(sweep(blobs().data, blobs().labels, GraphMethod::kTsne, std::vector<double>{}, {}).rows.empty());

  const std::vector<double> one{30};
  const auto single = sweep(blobs().data, blobs().labels, GraphMethod::kUmap, one, {});
  MetricConfig a1;
  const auto rep = report(build_graph(blobs().data, GraphMethod::kUmap, 30, {}, 1).graph, blobs().labels, a1);
  CHECK(single.rows[0].precision == rep.precision);
  CHECK(single.rows[0].recall_a1 == rep.recall);
  CHECK(single.rows[0].fscore == rep.fscore);

  const std::vector<double> bad{5, 500, 2.5};
  const auto partial = sweep(blobs().data, blobs().labels, GraphMethod::kUmap, bad, {});
  REQUIRE(partial.rows.size() == 3);
  CHECK(partial.rows[0].k == 2.5);
  CHECK(partial.rows[0].error.has_value());
  CHECK_FALSE(partial.rows[1].error.has_value());
  CHECK(partial.rows[2].error.has_value());
  CHECK(sweep_to_json(partial).find("error") != std::string::npos);
}

TEST_CASE("report serializers") {
  const auto r = report(six_vertex(), kSixLabels, {});
  const auto json = report_to_json(r);
  CHECK(json.find("\"global\"") != std::string::npos);
  CHECK(json.find("\"quadrant\"") != std::string::npos);
  const auto vcsv = per_vertex_csv(r, kSixLabels);
  CHECK(vcsv.rfind("id,label,precision,recall,fscore\n0,a,0.75,", 0) == 0);
  CHECK(per_label_csv(r).rfind("label,size,precision,recall,fscore,quadrant\n", 0) == 0);
}
