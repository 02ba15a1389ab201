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

/*
 * C interface to the drpr library.
 *
 * Every object is an opaque handle created by a drpr_*_create/load/build call
 * and released with the matching drpr_*_free. Functions return a
 * drpr_status; on failure the thread-local drpr_last_error() describes it.
 * Strings returned through `char**` are heap copies owned by the caller and
 * must be released with drpr_string_free.
 */
#ifndef DRPR_DRPR_H_
#define DRPR_DRPR_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DRPR_API __declspec(dllexport)
#else
#define DRPR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum drpr_status {
  DRPR_OK = 0,
  DRPR_ERR_INVALID_ARGUMENT = 1,
  DRPR_ERR_IO = 2,
  DRPR_ERR_PARSE = 3,
  DRPR_ERR_OUT_OF_RANGE = 4,
  DRPR_ERR_INTERNAL = 5
} drpr_status;

typedef enum drpr_method { DRPR_METHOD_TSNE = 0, DRPR_METHOD_UMAP = 1, DRPR_METHOD_EXTERNAL = 2 } drpr_method;

typedef struct drpr_dataset drpr_dataset;
typedef struct drpr_labels drpr_labels;
typedef struct drpr_graph drpr_graph;
typedef struct drpr_report drpr_report;
typedef struct drpr_trace drpr_trace;

DRPR_API const char* drpr_version(void);
DRPR_API const char* drpr_status_string(drpr_status status);
DRPR_API const char* drpr_last_error(void);
DRPR_API void drpr_string_free(char* s);

/* ---- datasets and labels ---- */

DRPR_API drpr_status drpr_dataset_load_csv(const char* path, const char* label_column, drpr_dataset** data,
                                           drpr_labels** labels);
DRPR_API drpr_status drpr_dataset_save_csv(const drpr_dataset* data, const drpr_labels* labels,
                                           const char* label_column, const char* path);
DRPR_API size_t drpr_dataset_rows(const drpr_dataset* data);
DRPR_API size_t drpr_dataset_cols(const drpr_dataset* data);
/* Copies row-major values into out (capacity rows * cols). */
DRPR_API drpr_status drpr_dataset_values(const drpr_dataset* data, double* out, size_t capacity);
DRPR_API void drpr_dataset_free(drpr_dataset* data);

/* centers: n_clusters * dim values; stddevs and counts: n_clusters each. */
DRPR_API drpr_status drpr_blobs_generate(const double* centers, size_t n_clusters, size_t dim, const double* stddevs,
                                         const size_t* counts, uint64_t seed, drpr_dataset** data,
                                         drpr_labels** labels);
/* JSON document {"centers": [[...], ...], "stddev": x|[...], "count": n|[...], "seed": s}. */
DRPR_API drpr_status drpr_blobs_generate_json(const char* json, drpr_dataset** data, drpr_labels** labels);
/* Presets "three-blobs" and "split-labels"; truth may be NULL. */
DRPR_API drpr_status drpr_preset_generate(const char* name, uint64_t seed, drpr_dataset** data, drpr_labels** labels,
                                          drpr_labels** truth);

DRPR_API drpr_status drpr_labels_load_csv(const char* path, const char* column, drpr_labels** labels);
DRPR_API drpr_status drpr_labels_save_csv(const drpr_labels* labels, const char* column, const char* path);
DRPR_API size_t drpr_labels_size(const drpr_labels* labels);
DRPR_API size_t drpr_labels_count(const drpr_labels* labels);
DRPR_API uint32_t drpr_labels_get(const drpr_labels* labels, size_t vertex);
/* Pointer stays valid for the lifetime of the handle. */
DRPR_API const char* drpr_labels_name(const drpr_labels* labels, uint32_t label);
/* mapping[old] = new, length drpr_labels_count(labels). */
DRPR_API drpr_status drpr_labels_relabel(const drpr_labels* labels, const uint32_t* mapping, size_t length,
                                         drpr_labels** out);
DRPR_API void drpr_labels_free(drpr_labels* labels);

/* ---- relationship graphs ---- */

/* prune_eps < 0 selects the default 1e-8 / N. threads 0 = all cores. */
DRPR_API drpr_status drpr_graph_build_tsne(const drpr_dataset* data, double perplexity, double prune_eps,
                                           unsigned threads, drpr_graph** graph);
DRPR_API drpr_status drpr_graph_build_umap(const drpr_dataset* data, size_t n_neighbors, unsigned threads,
                                           drpr_graph** graph);
DRPR_API drpr_status drpr_graph_from_edges(size_t n, const uint32_t* i, const uint32_t* j, const double* w,
                                           size_t edge_count, drpr_graph** graph);
DRPR_API drpr_status drpr_graph_load(const char* path, drpr_graph** graph);
DRPR_API drpr_status drpr_graph_save(const drpr_graph* graph, const char* path);
DRPR_API size_t drpr_graph_vertices(const drpr_graph* graph);
DRPR_API size_t drpr_graph_edges(const drpr_graph* graph);
DRPR_API drpr_method drpr_graph_method(const drpr_graph* graph);
DRPR_API drpr_status drpr_graph_edge(const drpr_graph* graph, size_t index, uint32_t* i, uint32_t* j, double* w);
/* Graphs built here carry calibration results; loaded ones report 0 / 0. */
DRPR_API size_t drpr_graph_converged(const drpr_graph* graph);
DRPR_API size_t drpr_graph_calibrated(const drpr_graph* graph);
/* JSON array of {"vertex","sigma","achieved","converged"} plus the target. */
DRPR_API drpr_status drpr_graph_calibration_json(const drpr_graph* graph, char** out);
DRPR_API void drpr_graph_free(drpr_graph* graph);

/* ---- metrics ---- */

typedef struct drpr_metric_options {
  double alpha;
  double beta;
  double precision_threshold;
  double recall_threshold;
} drpr_metric_options;

/* alpha 1, beta 1, thresholds 0.5. */
DRPR_API drpr_metric_options drpr_metric_options_default(void);

DRPR_API drpr_status drpr_report_compute(const drpr_graph* graph, const drpr_labels* labels,
                                         const drpr_metric_options* options, unsigned threads, drpr_report** report);
DRPR_API drpr_status drpr_report_global(const drpr_report* report, double* precision, double* recall,
                                        double* fscore);
DRPR_API drpr_status drpr_report_vertex(const drpr_report* report, size_t vertex, double* precision, double* recall,
                                        double* fscore);
DRPR_API drpr_status drpr_report_label(const drpr_report* report, uint32_t label, double* precision, double* recall,
                                       double* fscore);
DRPR_API drpr_status drpr_report_json(const drpr_report* report, char** out);
DRPR_API drpr_status drpr_report_vertex_csv(const drpr_report* report, const drpr_labels* labels, char** out);
DRPR_API drpr_status drpr_report_label_csv(const drpr_report* report, char** out);
DRPR_API drpr_status drpr_report_decomposition_csv(const drpr_report* report, char** out);
DRPR_API void drpr_report_free(drpr_report* report);

/* One graph + report per k; failing k values are annotated, not fatal. */
DRPR_API drpr_status drpr_sweep(const drpr_dataset* data, const drpr_labels* labels, drpr_method method,
                                const double* k_values, size_t k_count, const drpr_metric_options* options,
                                double prune_eps, unsigned threads, char** csv, char** json);

/* ---- neighborhood parameter estimation ---- */

typedef struct drpr_optimizer_options {
  int64_t k_min;
  int64_t k_max;
  size_t n_init;
  size_t budget;
  uint64_t seed;
  const char* target_label; /* NULL for the global f-score */
  drpr_metric_options metric;
  double prune_eps; /* < 0: default */
  unsigned threads;
} drpr_optimizer_options;

/* n_init 5, budget 25, seed 0, global target, default metrics. Bounds unset. */
DRPR_API drpr_optimizer_options drpr_optimizer_options_default(void);

DRPR_API drpr_status drpr_estimate(const drpr_dataset* data, const drpr_labels* labels, drpr_method method,
                                   const drpr_optimizer_options* options, drpr_trace** trace);
DRPR_API drpr_status drpr_trace_best(const drpr_trace* trace, int64_t* k, double* fscore);
DRPR_API size_t drpr_trace_trials(const drpr_trace* trace);
DRPR_API drpr_status drpr_trace_json(const drpr_trace* trace, char** out);
DRPR_API void drpr_trace_free(drpr_trace* trace);

/* ---- independent cross-check ---- */

/* Compares the metrics implementation with the brute-force reference on
 * `instances` random graphs (n vertices, n_labels labels), sweeping alpha over
 * {0, 0.25, 0.5, 1} and beta over {0.5, 1, 2}. Writes the largest absolute
 * difference seen. */
DRPR_API drpr_status drpr_verify_random(size_t instances, size_t n, size_t n_labels, double edge_prob, uint64_t seed,
                                        double* max_difference);
DRPR_API drpr_status drpr_verify_graph(const drpr_graph* graph, const drpr_labels* labels, double alpha, double beta,
                                       double* max_difference);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DRPR_DRPR_H_ */
