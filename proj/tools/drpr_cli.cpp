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

// drpr command-line tool. Talks to the library only through the C API.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "drpr/drpr.h"
#include "manifest.hpp"

namespace fs = std::filesystem;

namespace {

// Thrown for failures reported by the library; carries its status.
struct LibraryError : std::runtime_error {
  drpr_status status;
  LibraryError(drpr_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

// Bad flag combinations and similar user errors (exit code 1).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(drpr_status status) {
  if (status != DRPR_OK) throw LibraryError(status, drpr_last_error());
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Dataset = std::unique_ptr<drpr_dataset, Deleter<drpr_dataset, drpr_dataset_free>>;
using Labels = std::unique_ptr<drpr_labels, Deleter<drpr_labels, drpr_labels_free>>;
using Graph = std::unique_ptr<drpr_graph, Deleter<drpr_graph, drpr_graph_free>>;
using Report = std::unique_ptr<drpr_report, Deleter<drpr_report, drpr_report_free>>;
using Trace = std::unique_ptr<drpr_trace, Deleter<drpr_trace, drpr_trace_free>>;
using Text = std::unique_ptr<char, Deleter<char, drpr_string_free>>;

// Relative output paths land under $DRPR_OUTPUT_DIR when it is set.
fs::path output_path(const std::string& raw) {
  fs::path p(raw);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("DRPR_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
      fs::create_directories(dir);
      return fs::path(dir) / p;
    }
  }
  return p;
}

void write_text(const std::string& raw, const std::string& text, drpr::cli::RunManifest& manifest) {
  if (raw == "-") {
    std::cout << text;
    return;
  }
  const auto path = output_path(raw);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LibraryError(DRPR_ERR_IO, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw LibraryError(DRPR_ERR_IO, "write failed for '" + path.string() + "'");
  out.close();
  manifest.output(path);
}

std::string take(char* raw) { return Text(raw).get(); }

drpr_method parse_method(const std::string& name) {
  if (name == "tsne") return DRPR_METHOD_TSNE;
  if (name == "umap") return DRPR_METHOD_UMAP;
  throw UsageError("unknown method '" + name + "' (expected tsne or umap)");
}

std::vector<double> parse_number_list(const std::string& text, char sep, const std::string& what) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("cannot parse " + what + " value '" + item + "'");
    }
  }
  return out;
}

// Records every option of the subcommand, resolved to its effective value.
void record_flags(const CLI::App& sub, drpr::cli::RunManifest& manifest) {
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_name();
    if (name.empty() || name == "--help" || name == "-h") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    manifest.flag(name, value);
  }
}

struct LabeledInput {
  Dataset data;
  Labels labels;
};

LabeledInput load_labeled(const std::string& data_path, const std::string& label_col, const std::string& labels_path,
                          const std::string& labels_col, drpr::cli::RunManifest& manifest) {
  drpr_dataset* d = nullptr;
  drpr_labels* l = nullptr;
  check(drpr_dataset_load_csv(data_path.c_str(), label_col.c_str(), &d, &l));
  LabeledInput in{Dataset(d), Labels(l)};
  manifest.input(data_path);
  if (!labels_path.empty()) {
    drpr_labels* external = nullptr;
    check(drpr_labels_load_csv(labels_path.c_str(), labels_col.c_str(), &external));
    in.labels.reset(external);
    manifest.input(labels_path);
    const auto rows = drpr_dataset_rows(in.data.get());
    const auto count = drpr_labels_size(in.labels.get());
    if (rows != count) {
      throw LibraryError(DRPR_ERR_INVALID_ARGUMENT, "label file has " + std::to_string(count) +
                                                        " rows but the dataset has " + std::to_string(rows));
    }
  }
  return in;
}

struct MetricFlags {
  double alpha = 1.0;
  double beta = 1.0;
  double precision_threshold = 0.5;
  double recall_threshold = 0.5;

  void add(CLI::App* sub) {
    sub->add_option("--alpha", alpha, "Recall blend: 0 = shared component suffices, 1 = direct edge required")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--beta", beta, "F-score precision/recall balance")->check(CLI::PositiveNumber);
    sub->add_option("--precision-threshold", precision_threshold, "Low/high split for the precision quadrant tag")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--recall-threshold", recall_threshold, "Low/high split for the recall quadrant tag")
        ->check(CLI::Range(0.0, 1.0));
  }

  drpr_metric_options options() const { return {alpha, beta, precision_threshold, recall_threshold}; }
};

struct InputFlags {
  std::string data;
  std::string label_col = "label";
  std::string labels;
  std::string labels_col = "label";

  void add(CLI::App* sub) {
    sub->add_option("--data", data, "Input CSV (header row, one label column)")->required();
    sub->add_option("--label-col", label_col, "Name of the label column in --data");
    sub->add_option("--labels", labels, "Optional CSV whose column replaces the labels of --data");
    sub->add_option("--labels-col", labels_col, "Label column inside --labels");
  }
};

int run_synth(const CLI::App& sub, const std::string& preset, const std::string& spec_path, const std::string& centers,
              const std::string& stddev, const std::string& count, std::uint64_t seed, const std::string& out,
              const std::string& label_col, const std::string& truth_out) {
  drpr::cli::RunManifest manifest("synth");
  record_flags(sub, manifest);
  drpr_dataset* d = nullptr;
  drpr_labels* l = nullptr;
  drpr_labels* t = nullptr;
  const int sources = (!preset.empty()) + (!spec_path.empty()) + (!centers.empty());
  if (sources != 1) throw UsageError("give exactly one of --preset, --spec or --centers");
  if (!truth_out.empty() && preset.empty()) throw UsageError("--truth-out requires --preset");
  if (!preset.empty()) {
    check(drpr_preset_generate(preset.c_str(), seed, &d, &l, truth_out.empty() ? nullptr : &t));
  } else if (!spec_path.empty()) {
    std::ifstream in(spec_path, std::ios::binary);
    if (!in) throw LibraryError(DRPR_ERR_IO, "cannot open '" + spec_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    manifest.input(spec_path);
    check(drpr_blobs_generate_json(buf.str().c_str(), &d, &l));
  } else {
    std::vector<std::vector<double>> points;
    std::stringstream in(centers);
    std::string item;
    while (std::getline(in, item, ';')) {
      if (!item.empty()) points.push_back(parse_number_list(item, ',', "--centers"));
    }
    if (points.empty()) throw UsageError("--centers is empty");
    const std::size_t dim = points.front().size();
    std::vector<double> flat;
    for (const auto& p : points) {
      if (p.size() != dim) throw UsageError("every center in --centers needs the same dimension");
      flat.insert(flat.end(), p.begin(), p.end());
    }
    auto per_cluster = [&](const std::string& text, const std::string& what) {
      auto values = parse_number_list(text, ',', what);
      if (values.size() == 1) values.assign(points.size(), values.front());
      if (values.size() != points.size()) throw UsageError(what + " needs one value or one per center");
      return values;
    };
    const auto stddevs = per_cluster(stddev, "--stddev");
    std::vector<std::size_t> counts;
    for (double c : per_cluster(count, "--count")) {
      if (!(c >= 1 && c == std::floor(c))) throw UsageError("--count values must be positive integers");
      counts.push_back(static_cast<std::size_t>(c));
    }
    check(drpr_blobs_generate(flat.data(), points.size(), dim, stddevs.data(), counts.data(), seed, &d, &l));
  }
  Dataset data(d);
  Labels labels(l);
  Labels truth(t);
  const auto path = output_path(out);
  check(drpr_dataset_save_csv(data.get(), labels.get(), label_col.c_str(), path.string().c_str()));
  manifest.output(path);
  if (truth) {
    const auto truth_path = output_path(truth_out);
    check(drpr_labels_save_csv(truth.get(), label_col.c_str(), truth_path.string().c_str()));
    manifest.output(truth_path);
  }
  manifest.write_all();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"drpr: precision/recall validation of t-SNE and UMAP relationship graphs"};
  app.set_version_flag("--version", std::string(drpr_version()));
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  unsigned threads = 0;

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a seeded Gaussian blob dataset");
  std::string preset, spec_path, centers, stddev = "1", count = "50", synth_out, synth_label = "label", truth_out;
  std::uint64_t synth_seed = 0;
  synth->add_option("--preset", preset, "Named setup: three-blobs or split-labels");
  synth->add_option("--spec", spec_path, "JSON blob spec {centers, stddev, count, seed}");
  synth->add_option("--centers", centers, "Cluster centers, e.g. \"0,0;20,0;0,20\"");
  synth->add_option("--stddev", stddev, "Standard deviation, one value or one per center");
  synth->add_option("--count", count, "Points per cluster, one value or one per center");
  synth->add_option("--seed", synth_seed, "Generator seed (overrides the JSON spec's only when --spec is absent)");
  synth->add_option("--out", synth_out, "Output CSV")->required();
  synth->add_option("--label-col", synth_label, "Name of the label column written");
  synth->add_option("--truth-out", truth_out, "With --preset: write the underlying blob labels here");

  // graph
  auto* graph = app.add_subcommand("graph", "Build a t-SNE or UMAP relationship graph");
  InputFlags graph_in;
  std::string graph_method, graph_out, calibration_out;
  double perplexity = 30.0, prune_eps = -1.0;
  std::size_t n_neighbors = 15;
  graph->add_option("--data", graph_in.data, "Input CSV")->required();
  graph->add_option("--label-col", graph_in.label_col, "Label column excluded from the features");
  graph->add_option("--method", graph_method, "tsne or umap")->required();
  graph->add_option("--perplexity", perplexity, "t-SNE perplexity");
  graph->add_option("--n-neighbors", n_neighbors, "UMAP n_neighbors");
  graph->add_option("--prune-eps", prune_eps, "t-SNE pruning threshold on p_ij; negative = 1e-8/N");
  graph->add_option("--out", graph_out, "Output graph JSON")->required();
  graph->add_option("--calibration", calibration_out, "Optional per-vertex bandwidth calibration JSON");
  graph->add_option("--threads", threads, "Worker threads (0 = all cores)");

  // score
  auto* score = app.add_subcommand("score", "Compute precision, recall and f-score of a graph");
  InputFlags score_in;
  MetricFlags score_metrics;
  std::string score_graph, score_out, per_vertex_out;
  score->add_option("--graph", score_graph, "Graph JSON")->required();
  score_in.add(score);
  score_metrics.add(score);
  score->add_option("--out", score_out, "Report JSON ('-' for stdout)")->required();
  score->add_option("--per-vertex", per_vertex_out, "Optional per-vertex CSV: id,label,precision,recall,fscore");
  score->add_option("--threads", threads, "Worker threads (0 = all cores)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Score graphs over a range of neighborhood parameters");
  InputFlags sweep_in;
  MetricFlags sweep_metrics;
  std::string sweep_method, k_list, sweep_out, sweep_json;
  double k_min = 0, k_max = 0, k_step = 1, sweep_prune = -1.0;
  sweep_in.add(sweep);
  sweep_metrics.add(sweep);
  sweep->add_option("--method", sweep_method, "tsne or umap")->required();
  sweep->add_option("--k-list", k_list, "Comma-separated parameter values");
  sweep->add_option("--k-min", k_min, "Range start (with --k-max)");
  sweep->add_option("--k-max", k_max, "Range end, inclusive");
  sweep->add_option("--k-step", k_step, "Range step")->check(CLI::PositiveNumber);
  sweep->add_option("--prune-eps", sweep_prune, "t-SNE pruning threshold; negative = 1e-8/N");
  sweep->add_option("--out", sweep_out, "CSV table: k,precision,recall_a0,recall_a1,fscore ('-' for stdout)")
      ->required();
  sweep->add_option("--json", sweep_json, "Optional JSON table including per-k errors");
  sweep->add_option("--threads", threads, "Worker threads (0 = all cores)");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Bayesian optimization of the neighborhood parameter");
  InputFlags est_in;
  MetricFlags est_metrics;
  std::string est_method, target = "global", trace_out;
  std::int64_t est_k_min = 2, est_k_max = 0;
  std::size_t budget = 25, n_init = 5;
  std::uint64_t est_seed = 0;
  double est_prune = -1.0;
  est_in.add(estimate);
  est_metrics.add(estimate);
  estimate->add_option("--method", est_method, "tsne or umap")->required();
  estimate->add_option("--k-min", est_k_min, "Lower bound (integer)");
  estimate->add_option("--k-max", est_k_max, "Upper bound (integer)")->required();
  estimate->add_option("--budget", budget, "Total objective evaluations")->check(CLI::PositiveNumber);
  estimate->add_option("--n-init", n_init, "Initial design size, including both bounds")->check(CLI::PositiveNumber);
  estimate->add_option("--seed", est_seed, "Seed for the initial design");
  estimate->add_option("--target", target, "global or label:NAME");
  estimate->add_option("--prune-eps", est_prune, "t-SNE pruning threshold; negative = 1e-8/N");
  estimate->add_option("--trace", trace_out, "Trace JSON with every trial in evaluation order");
  estimate->add_option("--threads", threads, "Worker threads (0 = all cores)");

  // verify
  auto* verify = app.add_subcommand("verify", "Cross-check the metrics against the brute-force reference");
  std::string verify_graph, verify_data, verify_label_col = "label", verify_labels, verify_labels_col = "label";
  std::size_t instances = 100, verify_n = 30, verify_label_count = 4;
  double edge_prob = 0.2, verify_alpha = 1.0, verify_beta = 1.0, tolerance = 1e-12;
  std::uint64_t verify_seed = 1;
  verify->add_option("--graph", verify_graph, "Check this graph instead of random ones (needs --data)");
  verify->add_option("--data", verify_data, "Labeled CSV for --graph");
  verify->add_option("--label-col", verify_label_col, "Label column in --data");
  verify->add_option("--labels", verify_labels, "Optional CSV replacing the labels of --data");
  verify->add_option("--labels-col", verify_labels_col, "Label column inside --labels");
  verify->add_option("--alpha", verify_alpha, "Alpha for --graph checks")->check(CLI::Range(0.0, 1.0));
  verify->add_option("--beta", verify_beta, "Beta for --graph checks")->check(CLI::PositiveNumber);
  verify->add_option("--instances", instances, "Random instances to check");
  verify->add_option("--n", verify_n, "Vertices per random instance");
  verify->add_option("--label-count", verify_label_count, "Labels per random instance");
  verify->add_option("--edge-prob", edge_prob, "Edge probability")->check(CLI::Range(0.0, 1.0));
  verify->add_option("--seed", verify_seed, "First seed; instance r uses seed + r");
  verify->add_option("--tolerance", tolerance, "Largest accepted absolute difference");

  // export
  auto* exporter = app.add_subcommand("export", "Write plot-ready metric tables for external tools");
  InputFlags export_in;
  MetricFlags export_metrics;
  std::string export_graph, what = "vertices", export_out;
  export_in.add(exporter);
  export_metrics.add(exporter);
  exporter->add_option("--graph", export_graph, "Graph JSON")->required();
  exporter->add_option("--what", what, "vertices, labels or decomposition")
      ->check(CLI::IsMember({"vertices", "labels", "decomposition"}));
  exporter->add_option("--out", export_out, "Output CSV ('-' for stdout)")->required();
  exporter->add_option("--threads", threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (synth->parsed()) {
      return run_synth(*synth, preset, spec_path, centers, stddev, count, synth_seed, synth_out, synth_label,
                       truth_out);
    }

    if (graph->parsed()) {
      drpr::cli::RunManifest manifest("graph");
      record_flags(*graph, manifest);
      auto in = load_labeled(graph_in.data, graph_in.label_col, "", "", manifest);
      drpr_graph* g = nullptr;
      const auto method = parse_method(graph_method);
      if (method == DRPR_METHOD_TSNE) {
        if (graph->count("--n-neighbors") > 0) throw UsageError("--n-neighbors applies to --method umap");
        check(drpr_graph_build_tsne(in.data.get(), perplexity, prune_eps, threads, &g));
      } else {
        if (graph->count("--perplexity") > 0 || graph->count("--prune-eps") > 0) {
          throw UsageError("--perplexity and --prune-eps apply to --method tsne");
        }
        check(drpr_graph_build_umap(in.data.get(), n_neighbors, threads, &g));
      }
      Graph built(g);
      const auto path = output_path(graph_out);
      check(drpr_graph_save(built.get(), path.string().c_str()));
      manifest.output(path);
      if (!calibration_out.empty()) {
        char* text = nullptr;
        check(drpr_graph_calibration_json(built.get(), &text));
        write_text(calibration_out, take(text), manifest);
      }
      const auto calibrated = drpr_graph_calibrated(built.get());
      const auto converged = drpr_graph_converged(built.get());
      if (converged < calibrated) {
        std::cerr << "warning: " << (calibrated - converged) << " of " << calibrated
                  << " vertices did not reach the calibration target\n";
      }
      manifest.write_all();
      return 0;
    }

    auto load_graph_input = [](const std::string& path, drpr::cli::RunManifest& manifest) {
      drpr_graph* g = nullptr;
      check(drpr_graph_load(path.c_str(), &g));
      manifest.input(path);
      return Graph(g);
    };

    if (score->parsed()) {
      drpr::cli::RunManifest manifest("score");
      record_flags(*score, manifest);
      auto g = load_graph_input(score_graph, manifest);
      auto in = load_labeled(score_in.data, score_in.label_col, score_in.labels, score_in.labels_col, manifest);
      const auto options = score_metrics.options();
      drpr_report* r = nullptr;
      check(drpr_report_compute(g.get(), in.labels.get(), &options, threads, &r));
      Report rep(r);
      char* json = nullptr;
      check(drpr_report_json(rep.get(), &json));
      write_text(score_out, take(json), manifest);
      if (!per_vertex_out.empty()) {
        char* csv = nullptr;
        check(drpr_report_vertex_csv(rep.get(), in.labels.get(), &csv));
        write_text(per_vertex_out, take(csv), manifest);
      }
      manifest.write_all();
      return 0;
    }

    if (sweep->parsed()) {
      drpr::cli::RunManifest manifest("sweep");
      record_flags(*sweep, manifest);
      std::vector<double> ks;
      const bool have_list = sweep->count("--k-list") > 0;
      const bool have_range = sweep->count("--k-min") > 0 || sweep->count("--k-max") > 0;
      if (have_list == have_range) throw UsageError("give either --k-list or --k-min/--k-max");
      if (have_list) {
        ks = parse_number_list(k_list, ',', "--k-list");
      } else {
        if (sweep->count("--k-min") == 0 || sweep->count("--k-max") == 0) {
          throw UsageError("--k-min and --k-max go together");
        }
        for (std::size_t i = 0;; ++i) {
          const double k = k_min + static_cast<double>(i) * k_step;
          if (k > k_max + 1e-9 * std::abs(k_max)) break;
          ks.push_back(k);
        }
      }
      auto in = load_labeled(sweep_in.data, sweep_in.label_col, sweep_in.labels, sweep_in.labels_col, manifest);
      const auto options = sweep_metrics.options();
      char* csv = nullptr;
      char* json = nullptr;
      check(drpr_sweep(in.data.get(), in.labels.get(), parse_method(sweep_method), ks.data(), ks.size(), &options,
                       sweep_prune, threads, &csv, &json));
      const std::string csv_text = take(csv);
      const std::string json_text = take(json);
      write_text(sweep_out, csv_text, manifest);
      if (!sweep_json.empty()) write_text(sweep_json, json_text, manifest);
      if (json_text.find("\"error\"") != std::string::npos) {
        std::cerr << "warning: some parameter values failed; see the JSON table for details\n";
      }
      manifest.write_all();
      return 0;
    }

    if (estimate->parsed()) {
      drpr::cli::RunManifest manifest("estimate");
      record_flags(*estimate, manifest);
      std::string target_label;
      if (target.rfind("label:", 0) == 0) {
        target_label = target.substr(6);
        if (target_label.empty()) throw UsageError("--target label: needs a label name");
      } else if (target != "global") {
        throw UsageError("--target must be 'global' or 'label:NAME'");
      }
      auto in = load_labeled(est_in.data, est_in.label_col, est_in.labels, est_in.labels_col, manifest);
      auto options = drpr_optimizer_options_default();
      options.k_min = est_k_min;
      options.k_max = est_k_max;
      options.budget = budget;
      options.n_init = n_init;
      options.seed = est_seed;
      options.target_label = target_label.empty() ? nullptr : target_label.c_str();
      options.metric = est_metrics.options();
      options.prune_eps = est_prune;
      options.threads = threads;
      drpr_trace* t = nullptr;
      check(drpr_estimate(in.data.get(), in.labels.get(), parse_method(est_method), &options, &t));
      Trace trace(t);
      std::int64_t best_k = 0;
      double best_f = 0.0;
      check(drpr_trace_best(trace.get(), &best_k, &best_f));
      if (!trace_out.empty()) {
        char* json = nullptr;
        check(drpr_trace_json(trace.get(), &json));
        write_text(trace_out, take(json), manifest);
      }
      std::ostringstream line;
      line.precision(17);
      line << "k=" << best_k << " fscore=" << best_f << "\n";
      std::cout << line.str();
      manifest.write_all();
      return 0;
    }

    if (verify->parsed()) {
      double worst = 0.0;
      if (!verify_graph.empty()) {
        if (verify_data.empty()) throw UsageError("--graph needs --data for the labels");
        drpr::cli::RunManifest manifest("verify");
        auto g = load_graph_input(verify_graph, manifest);
        auto in = load_labeled(verify_data, verify_label_col, verify_labels, verify_labels_col, manifest);
        check(drpr_verify_graph(g.get(), in.labels.get(), verify_alpha, verify_beta, &worst));
      } else {
        check(drpr_verify_random(instances, verify_n, verify_label_count, edge_prob, verify_seed, &worst));
      }
      std::ostringstream line;
      line.precision(3);
      line << "max_abs_difference=" << std::scientific << worst << (worst <= tolerance ? " ok" : " MISMATCH")
           << "\n";
      std::cout << line.str();
      return worst <= tolerance ? 0 : 2;
    }

    if (exporter->parsed()) {
      drpr::cli::RunManifest manifest("export");
      record_flags(*exporter, manifest);
      auto g = load_graph_input(export_graph, manifest);
      auto in = load_labeled(export_in.data, export_in.label_col, export_in.labels, export_in.labels_col, manifest);
      const auto options = export_metrics.options();
      drpr_report* r = nullptr;
      check(drpr_report_compute(g.get(), in.labels.get(), &options, threads, &r));
      Report rep(r);
      char* csv = nullptr;
      if (what == "vertices") {
        check(drpr_report_vertex_csv(rep.get(), in.labels.get(), &csv));
      } else if (what == "labels") {
        check(drpr_report_label_csv(rep.get(), &csv));
      } else {
        check(drpr_report_decomposition_csv(rep.get(), &csv));
      }
      write_text(export_out, take(csv), manifest);
      manifest.write_all();
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const LibraryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.status == DRPR_ERR_INTERNAL ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
