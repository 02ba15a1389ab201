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

#include <cstring>
#include <string>
#include <vector>

#include <doctest.h>

#include "drpr/drpr.h"
#include "test_util.hpp"

namespace {

std::string take(char* s) {
  std::string out = s != nullptr ? s : "";
  drpr_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("c api: version and status strings") {
  CHECK(std::string(drpr_version()) == "0.1.0");
  CHECK(std::string(drpr_status_string(DRPR_OK)) != "");
  CHECK(std::string(drpr_status_string(DRPR_ERR_PARSE)) != std::string(drpr_status_string(DRPR_ERR_IO)));
}

TEST_CASE("c api: null arguments are reported, not dereferenced") {
  drpr_dataset* d = nullptr;
  drpr_labels* l = nullptr;
  CHECK(drpr_dataset_load_csv(nullptr, "label", &d, &l) == DRPR_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(drpr_last_error()) > 0);
  CHECK(drpr_graph_build_tsne(nullptr, 5.0, -1.0, 1, nullptr) == DRPR_ERR_INVALID_ARGUMENT);
  drpr_dataset_free(nullptr);
  drpr_graph_free(nullptr);
  drpr_string_free(nullptr);
}

TEST_CASE("c api: pipeline from preset to report") {
  drpr::test::TempDir dir;
  drpr_dataset* d = nullptr;
  drpr_labels* l = nullptr;
  drpr_labels* truth = nullptr;
  REQUIRE(drpr_preset_generate("split-labels", 7, &d, &l, &truth) == DRPR_OK);
  CHECK(drpr_dataset_rows(d) == 150);
  CHECK(drpr_dataset_cols(d) == 2);
  CHECK(drpr_labels_count(l) == 6);
  CHECK(drpr_labels_count(truth) == 3);
  CHECK(std::string(drpr_labels_name(l, drpr_labels_get(l, 0))) == "0a");

  std::vector<double> buf(300);
  CHECK(drpr_dataset_values(d, buf.data(), buf.size()) == DRPR_OK);
  CHECK(drpr_dataset_values(d, buf.data(), 10) == DRPR_ERR_INVALID_ARGUMENT);

  drpr_graph* g = nullptr;
  REQUIRE(drpr_graph_build_umap(d, 15, 2, &g) == DRPR_OK);
  CHECK(drpr_graph_vertices(g) == 150);
  CHECK(drpr_graph_method(g) == DRPR_METHOD_UMAP);
  CHECK(drpr_graph_calibrated(g) == 150);
  CHECK(drpr_graph_converged(g) == 150);
  uint32_t i = 0, j = 0;
  double w = 0;
  CHECK(drpr_graph_edge(g, 0, &i, &j, &w) == DRPR_OK);
  CHECK(i < j);
  CHECK(drpr_graph_edge(g, drpr_graph_edges(g), &i, &j, &w) == DRPR_ERR_OUT_OF_RANGE);

  const auto opts = drpr_metric_options_default();
  drpr_report* split = nullptr;
  drpr_report* whole = nullptr;
  REQUIRE(drpr_report_compute(g, l, &opts, 1, &split) == DRPR_OK);
  REQUIRE(drpr_report_compute(g, truth, &opts, 1, &whole) == DRPR_OK);
  double p_split = 0, p_whole = 0, r = 0, f = 0;
  CHECK(drpr_report_global(split, &p_split, &r, &f) == DRPR_OK);
  CHECK(drpr_report_global(whole, &p_whole, &r, &f) == DRPR_OK);
  CHECK(p_split < p_whole);
  CHECK(drpr_report_vertex(split, 149, &p_split, &r, &f) == DRPR_OK);
  CHECK(drpr_report_vertex(split, 150, &p_split, &r, &f) == DRPR_ERR_OUT_OF_RANGE);
  CHECK(drpr_report_label(split, 5, &p_split, &r, &f) == DRPR_OK);
  CHECK(drpr_report_label(split, 6, &p_split, &r, &f) == DRPR_ERR_OUT_OF_RANGE);

  char* text = nullptr;
  REQUIRE(drpr_report_json(split, &text) == DRPR_OK);
  CHECK(take(text).find("\"global\"") != std::string::npos);
  REQUIRE(drpr_report_decomposition_csv(split, &text) == DRPR_OK);
  CHECK(take(text).rfind("label,target,share", 0) == 0);

  const auto path = (dir / "g.json").string();
  REQUIRE(drpr_graph_save(g, path.c_str()) == DRPR_OK);
  drpr_graph* loaded = nullptr;
  REQUIRE(drpr_graph_load(path.c_str(), &loaded) == DRPR_OK);
  CHECK(drpr_graph_edges(loaded) == drpr_graph_edges(g));
  CHECK(drpr_graph_calibrated(loaded) == 0);

  double diff = 1;
  CHECK(drpr_verify_graph(loaded, l, 0.5, 2.0, &diff) == DRPR_OK);
  CHECK(diff <= 1e-12);

  drpr_report_free(split);
  drpr_report_free(whole);
  drpr_graph_free(loaded);
  drpr_graph_free(g);
  drpr_labels_free(truth);
  drpr_labels_free(l);
  drpr_dataset_free(d);
}

TEST_CASE("c api: errors carry status codes") {
  drpr::test::TempDir dir;
  drpr_graph* g = nullptr;
  CHECK(drpr_graph_load((dir / "absent.json").string().c_str(), &g) == DRPR_ERR_IO);
  dir.write("bad.json", "{\"n\": 3, \"edges\": [[0, 0, 1]]}");
  CHECK(drpr_graph_load((dir / "bad.json").string().c_str(), &g) != DRPR_OK);
  CHECK(std::string(drpr_last_error()).find("edges[0]") != std::string::npos);

  const uint32_t is[] = {0, 1}, js[] = {1, 2};
  const double ws[] = {0.5, 1.0};
  REQUIRE(drpr_graph_from_edges(3, is, js, ws, 2, &g) == DRPR_OK);
  CHECK(drpr_graph_method(g) == DRPR_METHOD_EXTERNAL);
  drpr_labels* l = nullptr;
  dir.write("l.csv", "label\na\nb\n");
  REQUIRE(drpr_labels_load_csv((dir / "l.csv").string().c_str(), "label", &l) == DRPR_OK);
  drpr_report* r = nullptr;
  CHECK(drpr_report_compute(g, l, nullptr, 1, &r) == DRPR_ERR_INVALID_ARGUMENT);
  const std::string msg = drpr_last_error();
  CHECK(msg.find('3') != std::string::npos);
  CHECK(msg.find('2') != std::string::npos);

  const uint32_t swap[] = {1, 0};
  drpr_labels* swapped = nullptr;
  REQUIRE(drpr_labels_relabel(l, swap, 2, &swapped) == DRPR_OK);
  CHECK(drpr_labels_get(swapped, 0) == 1);
  const uint32_t collapse[] = {0, 0};
  drpr_labels* bad = nullptr;
  CHECK(drpr_labels_relabel(l, collapse, 2, &bad) == DRPR_ERR_INVALID_ARGUMENT);
  drpr_labels_free(swapped);
  drpr_labels_free(l);
  drpr_graph_free(g);
}

TEST_CASE("c api: sweep and estimate") {
  drpr_dataset* d = nullptr;
  drpr_labels* l = nullptr;
  REQUIRE(drpr_preset_generate("three-blobs", 7, &d, &l, nullptr) == DRPR_OK);
  const double ks[] = {2, 5, 30};
  char* csv = nullptr;
  char* json = nullptr;
  REQUIRE(drpr_sweep(d, l, DRPR_METHOD_TSNE, ks, 3, nullptr, -1.0, 0, &csv, &json) == DRPR_OK);
  const auto table = take(csv);
  take(json);
  CHECK(table.rfind("k,precision,recall_a0,recall_a1,fscore\n2,1,", 0) == 0);

  auto opts = drpr_optimizer_options_default();
  opts.k_min = 2;
  opts.k_max = 40;
  opts.budget = 7;
  opts.seed = 3;
  drpr_trace* t = nullptr;
  REQUIRE(drpr_estimate(d, l, DRPR_METHOD_UMAP, &opts, &t) == DRPR_OK);
  CHECK(drpr_trace_trials(t) == 7);
  int64_t k = 0;
  double f = 0;
  CHECK(drpr_trace_best(t, &k, &f) == DRPR_OK);
  CHECK(k >= 2);
  CHECK(k <= 40);
  char* trace_json = nullptr;
  REQUIRE(drpr_trace_json(t, &trace_json) == DRPR_OK);
  CHECK(take(trace_json).find("\"trials\"") != std::string::npos);
  drpr_trace_free(t);

  opts.k_max = 500;
  CHECK(drpr_estimate(d, l, DRPR_METHOD_UMAP, &opts, &t) == DRPR_ERR_OUT_OF_RANGE);
  drpr_labels_free(l);
  drpr_dataset_free(d);
}

TEST_CASE("c api: random verification") {
  double diff = 1;
  REQUIRE(drpr_verify_random(40, 30, 4, 0.2, 1, &diff) == DRPR_OK);
  CHECK(diff <= 1e-12);
}
