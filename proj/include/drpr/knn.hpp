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
#include <span>
#include <string>
#include <vector>

#include "drpr/dataset.hpp"

namespace drpr {

struct Neighbor {
  VertexId id;
  double distance;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// k nearest other vertices per vertex, ascending by (distance, id).
class NeighborLists {
 public:
  NeighborLists(std::size_t vertices, std::size_t k, std::vector<Neighbor> flat, std::string metric = "euclidean");

  std::size_t vertices() const noexcept { return vertices_; }
  std::size_t k() const noexcept { return k_; }
  const std::string& metric() const noexcept { return metric_; }
  std::span<const Neighbor> operator[](std::size_t v) const { return {flat_.data() + v * k_, k_}; }

  friend bool operator==(const NeighborLists&, const NeighborLists&) = default;

 private:
  std::size_t vertices_;
  std::size_t k_;
  std::vector<Neighbor> flat_;
  std::string metric_;
};

double squared_euclidean(std::span<const double> a, std::span<const double> b);
double euclidean(std::span<const double> a, std::span<const double> b);

// Brute force, O(N^2 m). Ties in distance go to the smaller vertex id.
NeighborLists exact_knn(const Dataset& data, std::size_t k, unsigned threads = 1);

}  // namespace drpr
