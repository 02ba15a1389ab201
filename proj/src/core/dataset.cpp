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

#include "drpr/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "csv.hpp"
#include "drpr/error.hpp"
#include "drpr/random.hpp"

namespace drpr {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool parse_finite(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && end == text.data() + text.size() && std::isfinite(out);
}

std::size_t find_column(const csv::Table& table, const std::string& column, const std::string& file) {
  const auto count = std::count(table.header.begin(), table.header.end(), column);
  if (count == 0) fail(ErrorCode::kInvalidArgument, file + ": no column named '" + column + "'");
  if (count > 1) fail(ErrorCode::kInvalidArgument, file + ": column '" + column + "' appears more than once");
  return static_cast<std::size_t>(std::find(table.header.begin(), table.header.end(), column) - table.header.begin());
}

}  // namespace

Dataset::Dataset(std::size_t rows, std::size_t cols, std::vector<double> values, std::vector<std::string> feature_names,
                 std::vector<std::int64_t> ids)
    : rows_(rows), cols_(cols), values_(std::move(values)), feature_names_(std::move(feature_names)),
      ids_(std::move(ids)) {
  require(rows_ >= 2, "dataset needs at least 2 rows, got " + std::to_string(rows_));
  require(cols_ >= 1, "dataset needs at least 1 feature column");
  require(values_.size() == rows_ * cols_, "dataset value count does not match rows x cols");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      fail(ErrorCode::kInvalidArgument,
           "non-finite value at row " + std::to_string(k / cols_) + ", column " + std::to_string(k % cols_));
    }
  }
  if (feature_names_.empty()) {
    for (std::size_t c = 0; c < cols_; ++c) feature_names_.push_back("x" + std::to_string(c));
  }
  require(feature_names_.size() == cols_, "feature name count does not match column count");
  if (ids_.empty()) {
    ids_.resize(rows_);
    std::iota(ids_.begin(), ids_.end(), std::int64_t{0});
  }
  require(ids_.size() == rows_, "row id count does not match row count");
  std::unordered_set<std::int64_t> seen(ids_.begin(), ids_.end());
  require(seen.size() == ids_.size(), "row ids are not unique");
}

LabelAssignment::LabelAssignment(std::vector<LabelId> labels, std::vector<std::string> vocabulary)
    : labels_(std::move(labels)), vocabulary_(std::move(vocabulary)) {
  require(!vocabulary_.empty(), "label vocabulary is empty");
  require(vocabulary_.size() <= labels_.size(), "more labels than vertices");
  std::unordered_set<std::string> distinct(vocabulary_.begin(), vocabulary_.end());
  require(distinct.size() == vocabulary_.size(), "label vocabulary has duplicate names");
  std::vector<bool> used(vocabulary_.size(), false);
  for (std::size_t v = 0; v < labels_.size(); ++v) {
    if (labels_[v] >= vocabulary_.size()) {
      fail(ErrorCode::kInvalidArgument, "vertex " + std::to_string(v) + " has label id " +
                                            std::to_string(labels_[v]) + " outside the vocabulary");
    }
    used[labels_[v]] = true;
  }
  for (std::size_t l = 0; l < used.size(); ++l) {
    require(used[l], "label '" + vocabulary_[l] + "' has no members");
  }
}

LabelAssignment LabelAssignment::from_names(std::span<const std::string> names) {
  std::unordered_map<std::string, LabelId> index;
  std::vector<std::string> vocabulary;
  std::vector<LabelId> labels;
  labels.reserve(names.size());
  for (const auto& name : names) {
    auto [it, inserted] = index.try_emplace(name, static_cast<LabelId>(vocabulary.size()));
    if (inserted) vocabulary.push_back(name);
    labels.push_back(it->second);
  }
  return {std::move(labels), std::move(vocabulary)};
}

std::vector<std::vector<VertexId>> LabelAssignment::groups() const {
  std::vector<std::vector<VertexId>> out(vocabulary_.size());
  for (std::size_t v = 0; v < labels_.size(); ++v) out[labels_[v]].push_back(static_cast<VertexId>(v));
  return out;
}

std::vector<std::size_t> LabelAssignment::group_sizes() const {
  std::vector<std::size_t> out(vocabulary_.size(), 0);
  for (LabelId l : labels_) ++out[l];
  return out;
}

void BlobSpec::validate() const {
  require(!clusters.empty(), "blob spec has no clusters");
  const std::size_t dim = clusters.front().center.size();
  require(dim >= 1, "blob centers must have at least one coordinate");
  std::size_t total = 0;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto& cl = clusters[c];
    const std::string where = "cluster " + std::to_string(c) + ": ";
    require(cl.center.size() == dim, where + "center dimension differs from cluster 0");
    require(std::all_of(cl.center.begin(), cl.center.end(), [](double x) { return std::isfinite(x); }),
            where + "center must be finite");
    require(std::isfinite(cl.stddev) && cl.stddev > 0.0, where + "stddev must be positive");
    require(cl.count >= 1, where + "count must be positive");
    total += cl.count;
  }
  require(total >= 2, "blob spec must produce at least 2 points");
}

LabeledDataset load_dataset(const std::filesystem::path& path, const std::string& label_column) {
  const auto table = csv::read(path);
  const std::string file = path.string();
  const std::size_t label_col = find_column(table, label_column, file);

  std::vector<std::string> feature_names;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c != label_col) feature_names.push_back(table.header[c]);
  }
  if (feature_names.empty()) fail(ErrorCode::kInvalidArgument, file + ": no feature columns besides the label");
  if (table.rows.size() < 2) {
    fail(ErrorCode::kInvalidArgument, file + ": need at least 2 data rows, found " + std::to_string(table.rows.size()));
  }

  std::vector<double> values;
  values.reserve(table.rows.size() * feature_names.size());
  std::vector<std::string> names;
  names.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == label_col) continue;
      double x = 0.0;
      if (!parse_finite(row[c], x)) {
        fail(ErrorCode::kParse, file + ":" + std::to_string(table.lines[r]) + ": row " + std::to_string(r) +
                                    ", column '" + table.header[c] + "': not a finite number: '" + row[c] + "'");
      }
      values.push_back(x);
    }
    names.push_back(row[label_col]);
  }
  const std::size_t cols = feature_names.size();
  Dataset data(table.rows.size(), cols, std::move(values), std::move(feature_names));
  return {std::move(data), LabelAssignment::from_names(names)};
}

LabelAssignment load_labels(const std::filesystem::path& path, const std::string& column) {
  const auto table = csv::read(path);
  const std::size_t col = find_column(table, column, path.string());
  if (table.rows.empty()) fail(ErrorCode::kInvalidArgument, path.string() + ": no label rows");
  std::vector<std::string> names;
  names.reserve(table.rows.size());
  for (const auto& row : table.rows) names.push_back(row[col]);
  return LabelAssignment::from_names(names);
}

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) fail(ErrorCode::kInternal, "failed to format number");
  return {buf, end};
}

void save_dataset(const std::filesystem::path& path, const Dataset& data, const LabelAssignment& labels,
                  const std::string& label_column) {
  require(labels.size() == data.rows(), "label count " + std::to_string(labels.size()) +
                                            " does not match row count " + std::to_string(data.rows()));
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  for (const auto& name : data.feature_names()) out << csv::escape(name) << ',';
  out << csv::escape(label_column) << '\n';
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (double x : data.row(r)) out << format_double(x) << ',';
    out << csv::escape(labels.name(labels[r])) << '\n';
  }
  if (!out) fail(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

void save_labels(const std::filesystem::path& path, const LabelAssignment& labels, const std::string& column) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << csv::escape(column) << '\n';
  for (std::size_t v = 0; v < labels.size(); ++v) out << csv::escape(labels.name(labels[v])) << '\n';
  if (!out) fail(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

LabeledDataset generate_blobs(const BlobSpec& spec) {
  spec.validate();
  const std::size_t dim = spec.clusters.front().center.size();
  std::size_t total = 0;
  for (const auto& cl : spec.clusters) total += cl.count;

  Random rng(spec.seed);
  std::vector<double> values;
  values.reserve(total * dim);
  std::vector<LabelId> labels;
  labels.reserve(total);
  for (std::size_t c = 0; c < spec.clusters.size(); ++c) {
    const auto& cl = spec.clusters[c];
    for (std::size_t p = 0; p < cl.count; ++p) {
      for (std::size_t d = 0; d < dim; ++d) values.push_back(cl.center[d] + cl.stddev * rng.normal());
      labels.push_back(static_cast<LabelId>(c));
    }
  }
  std::vector<std::string> vocabulary;
  for (std::size_t c = 0; c < spec.clusters.size(); ++c) vocabulary.push_back(std::to_string(c));
  return {Dataset(total, dim, std::move(values)), LabelAssignment(std::move(labels), std::move(vocabulary))};
}

BlobSpec blob_spec_from_json(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("blob spec: ") + e.what());
  }
  try {
    require(doc.is_object(), "blob spec: expected a JSON object");
    for (const auto& [key, _] : doc.items()) {
      require(key == "centers" || key == "stddev" || key == "count" || key == "seed",
              "blob spec: unknown field '" + key + "'");
    }
    require(doc.contains("centers") && doc["centers"].is_array(), "blob spec: 'centers' must be an array of points");
    const auto& centers = doc["centers"];
    const std::size_t n = centers.size();
    auto per_cluster = [&](const char* key, auto fallback) {
      using T = decltype(fallback);
      std::vector<T> out(n, fallback);
      if (!doc.contains(key)) return out;
      const auto& node = doc[key];
      if (node.is_array()) {
        require(node.size() == n, std::string("blob spec: '") + key + "' length must match 'centers'");
        for (std::size_t i = 0; i < n; ++i) out[i] = node[i].get<T>();
      } else {
        std::fill(out.begin(), out.end(), node.get<T>());
      }
      return out;
    };
    const auto stddevs = per_cluster("stddev", 1.0);
    const auto counts = per_cluster("count", std::int64_t{50});
    BlobSpec spec;
    spec.seed = doc.value("seed", std::uint64_t{0});
    for (std::size_t i = 0; i < n; ++i) {
      require(counts[i] > 0, "blob spec: counts must be positive");
      spec.clusters.push_back({centers[i].get<std::vector<double>>(), stddevs[i], static_cast<std::size_t>(counts[i])});
    }
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("blob spec: ") + e.what());
  }
}

BlobSpec three_blobs_spec(std::uint64_t seed) {
  BlobSpec spec;
  spec.seed = seed;
  spec.clusters = {{{0.0, 0.0}, 1.0, 50}, {{20.0, 0.0}, 1.0, 50}, {{0.0, 20.0}, 1.0, 50}};
  return spec;
}

LabeledDataset generate_preset(const std::string& name, std::uint64_t seed, LabelAssignment* truth) {
  if (name == "three-blobs") {
    auto out = generate_blobs(three_blobs_spec(seed));
    if (truth != nullptr) *truth = out.labels;
    return out;
  }
  if (name == "split-labels") {
    auto blobs = generate_blobs(three_blobs_spec(seed));
    std::vector<std::string> names;
    names.reserve(blobs.labels.size());
    for (std::size_t v = 0; v < blobs.labels.size(); ++v) {
      names.push_back(blobs.labels.name(blobs.labels[v]) + (v % 2 == 0 ? "a" : "b"));
    }
    if (truth != nullptr) *truth = blobs.labels;
    return {std::move(blobs.data), LabelAssignment::from_names(names)};
  }
  fail(ErrorCode::kInvalidArgument, "unknown preset '" + name + "' (expected three-blobs or split-labels)");
}

LabelAssignment relabel(const LabelAssignment& labels, std::span<const LabelId> mapping) {
  const std::size_t n = labels.label_count();
  require(mapping.size() == n, "relabel mapping has " + std::to_string(mapping.size()) + " entries, vocabulary has " +
                                   std::to_string(n));
  std::vector<bool> hit(n, false);
  for (LabelId target : mapping) {
    require(target < n, "relabel mapping target " + std::to_string(target) + " is outside the vocabulary");
    require(!hit[target], "relabel mapping is not a bijection: label id " + std::to_string(target) + " is hit twice");
    hit[target] = true;
  }
  std::vector<std::string> vocabulary(n);
  for (std::size_t l = 0; l < n; ++l) vocabulary[mapping[l]] = labels.vocabulary()[l];
  std::vector<LabelId> out(labels.size());
  for (std::size_t v = 0; v < labels.size(); ++v) out[v] = mapping[labels[v]];
  return {std::move(out), std::move(vocabulary)};
}

}  // namespace drpr
