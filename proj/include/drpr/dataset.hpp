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
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace drpr {

using VertexId = std::uint32_t;
using LabelId = std::uint32_t;

/// Dense N x m matrix of finite features, stored row-major, plus row ids.
class Dataset {
 public:
  Dataset(std::size_t rows, std::size_t cols, std::vector<double> values,
          std::vector<std::string> feature_names = {}, std::vector<std::int64_t> ids = {});

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  const std::vector<std::int64_t>& ids() const noexcept { return ids_; }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
  std::vector<std::string> feature_names_;
  std::vector<std::int64_t> ids_;
};

/// Categorical label per vertex, interned to dense ids. Every vocabulary
/// entry is used by at least one vertex.
class LabelAssignment {
 public:
  LabelAssignment(std::vector<LabelId> labels, std::vector<std::string> vocabulary);

  // Interns names in order of first appearance.
  static LabelAssignment from_names(std::span<const std::string> names);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t label_count() const noexcept { return vocabulary_.size(); }
  LabelId operator[](std::size_t v) const { return labels_[v]; }
  std::span<const LabelId> labels() const noexcept { return labels_; }
  const std::vector<std::string>& vocabulary() const noexcept { return vocabulary_; }
  const std::string& name(LabelId l) const { return vocabulary_.at(l); }

  // Members per label, vertex ids ascending.
  std::vector<std::vector<VertexId>> groups() const;
  std::vector<std::size_t> group_sizes() const;

  friend bool operator==(const LabelAssignment&, const LabelAssignment&) = default;

 private:
  std::vector<LabelId> labels_;
  std::vector<std::string> vocabulary_;
};

struct BlobCluster {
  std::vector<double> center;
  double stddev = 1.0;
  std::size_t count = 0;
};

struct BlobSpec {
  std::vector<BlobCluster> clusters;
  std::uint64_t seed = 0;

  void validate() const;
};

struct LabeledDataset {
  Dataset data;
  LabelAssignment labels;
};

LabeledDataset load_dataset(const std::filesystem::path& path, const std::string& label_column);

// Reads one categorical column of a CSV; the other columns are ignored.
LabelAssignment load_labels(const std::filesystem::path& path, const std::string& column);

void save_dataset(const std::filesystem::path& path, const Dataset& data, const LabelAssignment& labels,
                  const std::string& label_column = "label");
void save_labels(const std::filesystem::path& path, const LabelAssignment& labels,
                 const std::string& column = "label");

/// Isotropic Gaussian samples, cluster by cluster, label = cluster index.
/// Samples are drawn point-major then coordinate order from a single stream.
LabeledDataset generate_blobs(const BlobSpec& spec);

BlobSpec blob_spec_from_json(const std::string& text);

// Named synthetic setups.
//   three-blobs:  centers (0,0),(20,0),(0,20), stddev 1, 50 points each.
//   split-labels: the same points; each blob's points alternate between two
//                 labels "<blob>a"/"<blob>b". `truth` receives the blob labels.
LabeledDataset generate_preset(const std::string& name, std::uint64_t seed, LabelAssignment* truth = nullptr);
BlobSpec three_blobs_spec(std::uint64_t seed);

/// mapping[old] = new. Must be a bijection over [0, label_count).
LabelAssignment relabel(const LabelAssignment& labels, std::span<const LabelId> mapping);

// Shortest round-trippable decimal form.
std::string format_double(double value);

}  // namespace drpr
