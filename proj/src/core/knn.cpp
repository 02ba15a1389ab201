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

#include "drpr/knn.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "drpr/error.hpp"
#include "drpr/parallel.hpp"

namespace drpr {

NeighborLists::NeighborLists(std::size_t vertices, std::size_t k, std::vector<Neighbor> flat, std::string metric)
    : vertices_(vertices), k_(k), flat_(std::move(flat)), metric_(std::move(metric)) {
  require(flat_.size() == vertices_ * k_, "neighbor list size does not match vertices x k");
}

double squared_euclidean(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(),
          "dimension mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  double sum = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    sum += diff * diff;
  }
  return sum;
}

double euclidean(std::span<const double> a, std::span<const double> b) { return std::sqrt(squared_euclidean(a, b)); }

NeighborLists exact_knn(const Dataset& data, std::size_t k, unsigned threads) {
  const std::size_t n = data.rows();
  if (k < 1 || k > n - 1) {
    fail(ErrorCode::kOutOfRange,
         "k = " + std::to_string(k) + " is outside [1, " + std::to_string(n - 1) + "] for N = " + std::to_string(n));
  }
  std::vector<Neighbor> flat(n * k);
  parallel_for(n, threads, [&](std::size_t i) {
    std::vector<std::pair<double, VertexId>> candidates;
    candidates.reserve(n - 1);
    const auto self = data.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      candidates.emplace_back(squared_euclidean(self, data.row(j)), static_cast<VertexId>(j));
    }
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k), candidates.end());
    for (std::size_t r = 0; r < k; ++r) {
      flat[i * k + r] = {candidates[r].second, std::sqrt(candidates[r].first)};
    }
  });
  return {n, k, std::move(flat)};
}

}  // namespace drpr
