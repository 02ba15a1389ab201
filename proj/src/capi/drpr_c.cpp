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

#include "drpr/drpr.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "drpr/dataset.hpp"
#include "drpr/error.hpp"
#include "drpr/metrics.hpp"
#include "drpr/optimizer.hpp"
#include "drpr/oracle.hpp"
#include "drpr/relgraph.hpp"

struct drpr_dataset {
  drpr::Dataset value;
};
struct drpr_labels {
  drpr::LabelAssignment value;
};
struct drpr_graph {
  drpr::RelationshipGraph value;
  std::optional<drpr::BandwidthCalibration> calibration;
};
struct drpr_report {
  drpr::MetricReport value;
};
struct drpr_trace {
  drpr::OptimizationTrace value;
  drpr::OptimizerConfig config;
  drpr::GraphMethod method;
};

namespace {

thread_local std::string last_error;

drpr_status to_status(drpr::ErrorCode code) {
  switch (code) {
    case drpr::ErrorCode::kInvalidArgument:
      return DRPR_ERR_INVALID_ARGUMENT;
    case drpr::ErrorCode::kIo:
      return DRPR_ERR_IO;
    case drpr::ErrorCode::kParse:
      return DRPR_ERR_PARSE;
    case drpr::ErrorCode::kOutOfRange:
      return DRPR_ERR_OUT_OF_RANGE;
    case drpr::ErrorCode::kInternal:
      return DRPR_ERR_INTERNAL;
  }
  return DRPR_ERR_INTERNAL;
}

template <typename F>
drpr_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return DRPR_OK;
  } catch (const drpr::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return DRPR_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return DRPR_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return DRPR_ERR_INTERNAL;
  }
}

template <typename T>
T& deref(T* p, const char* what) {
  if (p == nullptr) drpr::fail(drpr::ErrorCode::kInvalidArgument, std::string(what) + " must not be NULL");
  return *p;
}

std::string text_arg(const char* p, const char* what) {
  if (p == nullptr) drpr::fail(drpr::ErrorCode::kInvalidArgument, std::string(what) + " must not be NULL");
  return p;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

drpr::MetricConfig to_config(const drpr_metric_options* options) {
  const drpr_metric_options o = options != nullptr ? *options : drpr_metric_options_default();
  return {o.alpha, o.beta, o.precision_threshold, o.recall_threshold};
}

drpr::GraphMethod to_method(drpr_method m) {
  switch (m) {
    case DRPR_METHOD_TSNE:
      return drpr::GraphMethod::kTsne;
    case DRPR_METHOD_UMAP:
      return drpr::GraphMethod::kUmap;
    case DRPR_METHOD_EXTERNAL:
      return drpr::GraphMethod::kExternal;
  }
  drpr::fail(drpr::ErrorCode::kInvalidArgument, "unknown method");
}

std::optional<double> to_prune(double prune_eps) {
  if (prune_eps < 0.0) return std::nullopt;
  return prune_eps;
}

void emit_dataset(drpr::LabeledDataset&& in, drpr_dataset** data, drpr_labels** labels) {
  deref(data, "data");
  deref(labels, "labels");
  auto d = std::make_unique<drpr_dataset>(drpr_dataset{std::move(in.data)});
  auto l = std::make_unique<drpr_labels>(drpr_labels{std::move(in.labels)});
  *data = d.release();
  *labels = l.release();
}

}  // namespace

extern "C" {

const char* drpr_version(void) { return "0.1.0"; }

const char* drpr_status_string(drpr_status status) {
  switch (status) {
    case DRPR_OK:
      return "ok";
    case DRPR_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case DRPR_ERR_IO:
      return "i/o error";
    case DRPR_ERR_PARSE:
      return "parse error";
    case DRPR_ERR_OUT_OF_RANGE:
      return "out of range";
    case DRPR_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* drpr_last_error(void) { return last_error.c_str(); }

void drpr_string_free(char* s) { std::free(s); }

drpr_status drpr_dataset_load_csv(const char* path, const char* label_column, drpr_dataset** data,
                                  drpr_labels** labels) {
  return guarded([&] {
    emit_dataset(drpr::load_dataset(text_arg(path, "path"), text_arg(label_column, "label_column")), data, labels);
  });
}

drpr_status drpr_dataset_save_csv(const drpr_dataset* data, const drpr_labels* labels, const char* label_column,
                                  const char* path) {
  return guarded([&] {
    drpr::save_dataset(text_arg(path, "path"), deref(data, "data").value, deref(labels, "labels").value,
                       label_column != nullptr ? label_column : "label");
  });
}

size_t drpr_dataset_rows(const drpr_dataset* data) { return data != nullptr ? data->value.rows() : 0; }
size_t drpr_dataset_cols(const drpr_dataset* data) { return data != nullptr ? data->value.cols() : 0; }

drpr_status drpr_dataset_values(const drpr_dataset* data, double* out, size_t capacity) {
  return guarded([&] {
    const auto values = deref(data, "data").value.values();
    drpr::require(out != nullptr && capacity >= values.size(), "output buffer too small");
    std::memcpy(out, values.data(), values.size() * sizeof(double));
  });
}

void drpr_dataset_free(drpr_dataset* data) { delete data; }

drpr_status drpr_blobs_generate(const double* centers, size_t n_clusters, size_t dim, const double* stddevs,
                                const size_t* counts, uint64_t seed, drpr_dataset** data, drpr_labels** labels) {
  return guarded([&] {
    drpr::require(centers != nullptr && stddevs != nullptr && counts != nullptr, "blob arrays must not be NULL");
    drpr::BlobSpec spec;
    spec.seed = seed;
    for (size_t c = 0; c < n_clusters; ++c) {
      spec.clusters.push_back({std::vector<double>(centers + c * dim, centers + (c + 1) * dim), stddevs[c], counts[c]});
    }
    emit_dataset(drpr::generate_blobs(spec), data, labels);
  });
}

drpr_status drpr_blobs_generate_json(const char* json, drpr_dataset** data, drpr_labels** labels) {
  return guarded([&] { emit_dataset(drpr::generate_blobs(drpr::blob_spec_from_json(text_arg(json, "json"))), data, labels); });
}

drpr_status drpr_preset_generate(const char* name, uint64_t seed, drpr_dataset** data, drpr_labels** labels,
                                 drpr_labels** truth) {
  return guarded([&] {
    drpr::LabelAssignment scratch({0}, {"0"});
    auto out = drpr::generate_preset(text_arg(name, "name"), seed, truth != nullptr ? &scratch : nullptr);
    std::unique_ptr<drpr_labels> t;
    if (truth != nullptr) t = std::make_unique<drpr_labels>(drpr_labels{std::move(scratch)});
    emit_dataset(std::move(out), data, labels);
    if (truth != nullptr) *truth = t.release();
  });
}

drpr_status drpr_labels_load_csv(const char* path, const char* column, drpr_labels** labels) {
  return guarded([&] {
    auto loaded = drpr::load_labels(text_arg(path, "path"), text_arg(column, "column"));
    deref(labels, "labels") = new drpr_labels{std::move(loaded)};
  });
}

drpr_status drpr_labels_save_csv(const drpr_labels* labels, const char* column, const char* path) {
  return guarded([&] {
    drpr::save_labels(text_arg(path, "path"), deref(labels, "labels").value, column != nullptr ? column : "label");
  });
}

size_t drpr_labels_size(const drpr_labels* labels) { return labels != nullptr ? labels->value.size() : 0; }
size_t drpr_labels_count(const drpr_labels* labels) { return labels != nullptr ? labels->value.label_count() : 0; }

uint32_t drpr_labels_get(const drpr_labels* labels, size_t vertex) {
  if (labels == nullptr || vertex >= labels->value.size()) return UINT32_MAX;
  return labels->value[vertex];
}

const char* drpr_labels_name(const drpr_labels* labels, uint32_t label) {
  if (labels == nullptr || label >= labels->value.label_count()) return nullptr;
  return labels->value.name(label).c_str();
}

drpr_status drpr_labels_relabel(const drpr_labels* labels, const uint32_t* mapping, size_t length, drpr_labels** out) {
  return guarded([&] {
    drpr::require(mapping != nullptr || length == 0, "mapping must not be NULL");
    auto result = drpr::relabel(deref(labels, "labels").value, std::span<const uint32_t>(mapping, length));
    deref(out, "out") = new drpr_labels{std::move(result)};
  });
}

void drpr_labels_free(drpr_labels* labels) { delete labels; }

drpr_status drpr_graph_build_tsne(const drpr_dataset* data, double perplexity, double prune_eps, unsigned threads,
                                  drpr_graph** graph) {
  return guarded([&] {
    drpr::TsneOptions options;
    options.perplexity = perplexity;
    options.prune_eps = to_prune(prune_eps);
    options.threads = threads;
    auto build = drpr::build_tsne_graph(deref(data, "data").value, options);
    deref(graph, "graph") = new drpr_graph{std::move(build.graph), std::move(build.calibration)};
  });
}

drpr_status drpr_graph_build_umap(const drpr_dataset* data, size_t n_neighbors, unsigned threads, drpr_graph** graph) {
  return guarded([&] {
    drpr::UmapOptions options;
    options.n_neighbors = n_neighbors;
    options.threads = threads;
    auto build = drpr::build_umap_graph(deref(data, "data").value, options);
    deref(graph, "graph") = new drpr_graph{std::move(build.graph), std::move(build.calibration)};
  });
}

drpr_status drpr_graph_from_edges(size_t n, const uint32_t* i, const uint32_t* j, const double* w, size_t edge_count,
                                  drpr_graph** graph) {
  return guarded([&] {
    drpr::require(edge_count == 0 || (i != nullptr && j != nullptr && w != nullptr), "edge arrays must not be NULL");
    std::vector<drpr::Edge> edges;
    edges.reserve(edge_count);
    for (size_t e = 0; e < edge_count; ++e) edges.push_back({i[e], j[e], w[e]});
    deref(graph, "graph") = new drpr_graph{drpr::RelationshipGraph(n, std::move(edges)), std::nullopt};
  });
}

drpr_status drpr_graph_load(const char* path, drpr_graph** graph) {
  return guarded([&] {
    auto loaded = drpr::load_graph(text_arg(path, "path"));
    deref(graph, "graph") = new drpr_graph{std::move(loaded), std::nullopt};
  });
}

drpr_status drpr_graph_save(const drpr_graph* graph, const char* path) {
  return guarded([&] { drpr::save_graph(text_arg(path, "path"), deref(graph, "graph").value); });
}

size_t drpr_graph_vertices(const drpr_graph* graph) { return graph != nullptr ? graph->value.vertices() : 0; }
size_t drpr_graph_edges(const drpr_graph* graph) { return graph != nullptr ? graph->value.edges().size() : 0; }

drpr_method drpr_graph_method(const drpr_graph* graph) {
  if (graph == nullptr) return DRPR_METHOD_EXTERNAL;
  switch (graph->value.provenance().method) {
    case drpr::GraphMethod::kTsne:
      return DRPR_METHOD_TSNE;
    case drpr::GraphMethod::kUmap:
      return DRPR_METHOD_UMAP;
    case drpr::GraphMethod::kExternal:
      break;
  }
  return DRPR_METHOD_EXTERNAL;
}

drpr_status drpr_graph_edge(const drpr_graph* graph, size_t index, uint32_t* i, uint32_t* j, double* w) {
  return guarded([&] {
    const auto edges = deref(graph, "graph").value.edges();
    if (index >= edges.size()) drpr::fail(drpr::ErrorCode::kOutOfRange, "edge index out of range");
    deref(i, "i") = edges[index].i;
    deref(j, "j") = edges[index].j;
    deref(w, "w") = edges[index].weight;
  });
}

size_t drpr_graph_converged(const drpr_graph* graph) {
  return graph != nullptr && graph->calibration ? graph->calibration->converged_count() : 0;
}

size_t drpr_graph_calibrated(const drpr_graph* graph) {
  return graph != nullptr && graph->calibration ? graph->calibration->converged.size() : 0;
}

drpr_status drpr_graph_calibration_json(const drpr_graph* graph, char** out) {
  return guarded([&] {
    const auto& g = deref(graph, "graph");
    std::string text = "{\"target\":";
    if (!g.calibration) {
      text += "null,\"vertices\":[]}\n";
    } else {
      const auto& c = *g.calibration;
      text += drpr::format_double(c.target) + ",\"vertices\":[";
      for (size_t v = 0; v < c.sigma.size(); ++v) {
        if (v > 0) text += ',';
        text += "{\"vertex\":" + std::to_string(v) + ",\"sigma\":" + drpr::format_double(c.sigma[v]) +
                ",\"achieved\":" + drpr::format_double(c.achieved[v]) +
                ",\"converged\":" + (c.converged[v] ? "true" : "false") + "}";
      }
      text += "]}\n";
    }
    deref(out, "out") = copy_string(text);
  });
}

void drpr_graph_free(drpr_graph* graph) { delete graph; }

drpr_metric_options drpr_metric_options_default(void) { return {1.0, 1.0, 0.5, 0.5}; }

drpr_status drpr_report_compute(const drpr_graph* graph, const drpr_labels* labels, const drpr_metric_options* options,
                                unsigned threads, drpr_report** report) {
  return guarded([&] {
    auto r = drpr::report(deref(graph, "graph").value, deref(labels, "labels").value, to_config(options), threads);
    deref(report, "report") = new drpr_report{std::move(r)};
  });
}

drpr_status drpr_report_global(const drpr_report* report, double* precision, double* recall, double* fscore) {
  return guarded([&] {
    const auto& r = deref(report, "report").value;
    if (precision != nullptr) *precision = r.precision;
    if (recall != nullptr) *recall = r.recall;
    if (fscore != nullptr) *fscore = r.fscore;
  });
}

drpr_status drpr_report_vertex(const drpr_report* report, size_t vertex, double* precision, double* recall,
                               double* fscore) {
  return guarded([&] {
    const auto& r = deref(report, "report").value;
    if (vertex >= r.per_vertex.size()) drpr::fail(drpr::ErrorCode::kOutOfRange, "vertex index out of range");
    const auto& s = r.per_vertex[vertex];
    if (precision != nullptr) *precision = s.precision;
    if (recall != nullptr) *recall = s.recall;
    if (fscore != nullptr) *fscore = s.fscore;
  });
}

drpr_status drpr_report_label(const drpr_report* report, uint32_t label, double* precision, double* recall,
                              double* fscore) {
  return guarded([&] {
    const auto& r = deref(report, "report").value;
    if (label >= r.per_label.size()) drpr::fail(drpr::ErrorCode::kOutOfRange, "label index out of range");
    const auto& s = r.per_label[label];
    if (precision != nullptr) *precision = s.precision;
    if (recall != nullptr) *recall = s.recall;
    if (fscore != nullptr) *fscore = s.fscore;
  });
}

drpr_status drpr_report_json(const drpr_report* report, char** out) {
  return guarded([&] { deref(out, "out") = copy_string(drpr::report_to_json(deref(report, "report").value)); });
}

drpr_status drpr_report_vertex_csv(const drpr_report* report, const drpr_labels* labels, char** out) {
  return guarded([&] {
    deref(out, "out") =
        copy_string(drpr::per_vertex_csv(deref(report, "report").value, deref(labels, "labels").value));
  });
}

drpr_status drpr_report_label_csv(const drpr_report* report, char** out) {
  return guarded([&] { deref(out, "out") = copy_string(drpr::per_label_csv(deref(report, "report").value)); });
}

drpr_status drpr_report_decomposition_csv(const drpr_report* report, char** out) {
  return guarded([&] { deref(out, "out") = copy_string(drpr::decomposition_csv(deref(report, "report").value)); });
}

void drpr_report_free(drpr_report* report) { delete report; }

drpr_status drpr_sweep(const drpr_dataset* data, const drpr_labels* labels, drpr_method method,
                       const double* k_values, size_t k_count, const drpr_metric_options* options, double prune_eps,
                       unsigned threads, char** csv, char** json) {
  return guarded([&] {
    drpr::require(k_values != nullptr || k_count == 0, "k_values must not be NULL");
    drpr::SweepOptions sweep_options;
    sweep_options.prune_eps = to_prune(prune_eps);
    sweep_options.threads = threads;
    const auto result = drpr::sweep(deref(data, "data").value, deref(labels, "labels").value, to_method(method),
                                    std::span<const double>(k_values, k_count), to_config(options), sweep_options);
    char* csv_text = csv != nullptr ? copy_string(drpr::sweep_to_csv(result)) : nullptr;
    if (json != nullptr) {
      try {
        *json = copy_string(drpr::sweep_to_json(result));
      } catch (...) {
        std::free(csv_text);
        throw;
      }
    }
    if (csv != nullptr) *csv = csv_text;
  });
}

drpr_optimizer_options drpr_optimizer_options_default(void) {
  drpr_optimizer_options o;
  o.k_min = 0;
  o.k_max = 0;
  o.n_init = 5;
  o.budget = 25;
  o.seed = 0;
  o.target_label = nullptr;
  o.metric = drpr_metric_options_default();
  o.prune_eps = -1.0;
  o.threads = 1;
  return o;
}

drpr_status drpr_estimate(const drpr_dataset* data, const drpr_labels* labels, drpr_method method,
                          const drpr_optimizer_options* options, drpr_trace** trace) {
  return guarded([&] {
    const auto& o = deref(options, "options");
    drpr::OptimizerConfig config;
    config.k_min = o.k_min;
    config.k_max = o.k_max;
    config.n_init = o.n_init;
    config.budget = o.budget;
    config.seed = o.seed;
    if (o.target_label != nullptr) config.target_label = std::string(o.target_label);
    config.metric = to_config(&o.metric);
    config.prune_eps = to_prune(o.prune_eps);
    config.threads = o.threads;
    const auto m = to_method(method);
    auto t = drpr::estimate(deref(data, "data").value, deref(labels, "labels").value, m, config);
    deref(trace, "trace") = new drpr_trace{std::move(t), config, m};
  });
}

drpr_status drpr_trace_best(const drpr_trace* trace, int64_t* k, double* fscore) {
  return guarded([&] {
    const auto& t = deref(trace, "trace").value;
    if (k != nullptr) *k = t.best_k;
    if (fscore != nullptr) *fscore = t.best_score;
  });
}

size_t drpr_trace_trials(const drpr_trace* trace) { return trace != nullptr ? trace->value.trials.size() : 0; }

drpr_status drpr_trace_json(const drpr_trace* trace, char** out) {
  return guarded([&] {
    const auto& t = deref(trace, "trace");
    deref(out, "out") = copy_string(drpr::trace_to_json(t.value, t.config, t.method));
  });
}

void drpr_trace_free(drpr_trace* trace) { delete trace; }

drpr_status drpr_verify_random(size_t instances, size_t n, size_t n_labels, double edge_prob, uint64_t seed,
                               double* max_difference) {
  return guarded([&] {
    static constexpr double kAlphas[] = {0.0, 0.25, 0.5, 1.0};
    static constexpr double kBetas[] = {0.5, 1.0, 2.0};
    double worst = 0.0;
    for (size_t r = 0; r < instances; ++r) {
      const auto inst = drpr::oracle::random_graph(n, n_labels, edge_prob, seed + r);
      const double alpha = kAlphas[r % 4];
      const double beta = kBetas[(r / 4) % 3];
      const auto expected = drpr::oracle::brute_force_report(inst.graph, inst.labels, alpha, beta);
      drpr::MetricConfig config;
      config.alpha = alpha;
      config.beta = beta;
      const auto actual = drpr::report(inst.graph, inst.labels, config);
      worst = std::max(worst, drpr::oracle::max_difference(expected, actual));
    }
    deref(max_difference, "max_difference") = worst;
  });
}

drpr_status drpr_verify_graph(const drpr_graph* graph, const drpr_labels* labels, double alpha, double beta,
                              double* max_difference) {
  return guarded([&] {
    const auto& g = deref(graph, "graph").value;
    const auto& l = deref(labels, "labels").value;
    const auto expected = drpr::oracle::brute_force_report(g, l, alpha, beta);
    drpr::MetricConfig config;
    config.alpha = alpha;
    config.beta = beta;
    const auto actual = drpr::report(g, l, config);
    deref(max_difference, "max_difference") = drpr::oracle::max_difference(expected, actual);
  });
}

}  // extern "C"
