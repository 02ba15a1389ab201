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
#include <cstdint>

#include "drpr/dataset.hpp"
#include "drpr/metrics.hpp"
#include "drpr/relgraph.hpp"

namespace drpr::oracle {

inline constexpr std::size_t kMaxVertices = 1000;

// Reference evaluation on a dense adjacency matrix: scans every ordered pair,
// finds components by repeated breadth-first search, and evaluates the
// formulas directly. Shares no code with the metrics implementation.
MetricReport brute_force_report(const RelationshipGraph& graph, const LabelAssignment& labels, double alpha,
                                double beta);

struct RandomInstance {
  RelationshipGraph graph;
  LabelAssignment labels;
};

// Each pair is joined with probability edge_prob, weight uniform in (0, 1].
// The first n_labels vertices take a random permutation of the labels so no
// label is empty; the rest are uniform.
RandomInstance random_graph(std::size_t n, std::size_t n_labels, double edge_prob, std::uint64_t seed);

// Largest absolute difference over every per-vertex, per-label, decomposition
// and global value. Infinity when the shapes disagree.
double max_difference(const MetricReport& a, const MetricReport& b);

}  // namespace drpr::oracle
