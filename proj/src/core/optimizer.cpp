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

#include "drpr/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <json.hpp>

#include "drpr/error.hpp"
#include "drpr/random.hpp"

namespace drpr {

double expected_improvement(double mean, double stddev, double best_so_far) {
  const double gain = mean - best_so_far;
  if (!(stddev > 0.0)) return std::max(0.0, gain);
  const double z = gain / stddev;
  const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  return std::max(0.0, gain * cdf + stddev * pdf);
}

struct GaussianProcess::Fit {
  Eigen::MatrixXd lower;
  Eigen::VectorXd weights;
  double log_ml = 0.0;
};

namespace {

double se_kernel(double a, double b, double lengthscale) {
  const double d = (a - b) / lengthscale;
  return std::exp(-0.5 * d * d);
}

}  // namespace

bool GaussianProcess::fit(double lengthscale, double jitter, Fit& out) const {
  const auto n = static_cast<Eigen::Index>(x_.size());
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) gram(i, j) = se_kernel(x_[i], x_[j], lengthscale);
    gram(i, i) += jitter;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) return false;
  const Eigen::Map<const Eigen::VectorXd> y(y_.data(), n);
  out.lower = llt.matrixL();
  out.weights = llt.solve(y);
  const double log_det = 2.0 * out.lower.diagonal().array().log().sum();
  out.log_ml = -0.5 * y.dot(out.weights) - 0.5 * log_det - 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
  return std::isfinite(out.log_ml);
}

GaussianProcess::GaussianProcess(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  require(!x_.empty() && x_.size() == y_.size(), "Gaussian process needs matching, non-empty inputs and targets");
  const auto n = static_cast<double>(y_.size());
  double mean = 0.0;
  for (double v : y_) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : y_) var += (v - mean) * (v - mean);
  var /= n;
  y_mean_ = mean;
  y_scale_ = var > 1e-24 ? std::sqrt(var) : 1.0;
  for (double& v : y_) v = (v - y_mean_) / y_scale_;

  Fit best;
  bool have = false;
  for (double jitter = kJitter; jitter <= 1.0 && !have; jitter *= 10.0) {
    for (double ls : kLengthscales) {
      Fit candidate;
      if (!fit(ls, jitter, candidate)) continue;
      if (!have || candidate.log_ml > best.log_ml) {
        best = std::move(candidate);
        lengthscale_ = ls;
        jitter_ = jitter;
        have = true;
      }
    }
  }
  if (!have) fail(ErrorCode::kInternal, "Gaussian process fit failed for every lengthscale");
  log_ml_ = best.log_ml;
  const auto m = static_cast<std::size_t>(best.lower.rows());
  chol_.resize(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      chol_[i * m + j] = best.lower(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  weights_.assign(best.weights.data(), best.weights.data() + best.weights.size());
}

GaussianProcess::Prediction GaussianProcess::predict(double x) const {
  const auto n = static_cast<Eigen::Index>(x_.size());
  Eigen::VectorXd cross(n);
  for (Eigen::Index i = 0; i < n; ++i) cross(i) = se_kernel(x, x_[i], lengthscale_);
  const Eigen::Map<const Eigen::VectorXd> weights(weights_.data(), n);
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> lower(chol_.data(), n,
                                                                                                          n);
  const Eigen::VectorXd v = lower.triangularView<Eigen::Lower>().solve(cross);
  const double var = std::max(0.0, 1.0 - v.squaredNorm());
  return {y_mean_ + y_scale_ * cross.dot(weights), y_scale_ * std::sqrt(var)};
}

OptimizationTrace bayesian_optimize(const Objective& objective, const OptimizerConfig& config) {
  require(config.k_min < config.k_max, "k_min must be smaller than k_max");
  require(config.n_init >= 1, "n_init must be positive");
  require(config.n_init <= config.budget, "n_init must not exceed the budget");

  const auto range = static_cast<std::size_t>(config.k_max - config.k_min + 1);
  const std::size_t budget = std::min(config.budget, range);
  const double log_lo = std::log(static_cast<double>(config.k_min));
  const double log_span = std::log(static_cast<double>(config.k_max)) - log_lo;
  auto normalize = [&](std::int64_t k) { return (std::log(static_cast<double>(k)) - log_lo) / log_span; };

  OptimizationTrace trace;
  std::map<std::int64_t, std::size_t> evaluated;  // k -> trial index

  auto evaluate = [&](std::int64_t k) {
    Trial trial;
    trial.k = k;
    try {
      auto value = objective(k);
      trial.score = value.score;
      trial.precision = value.precision;
      trial.recall = value.recall;
      trial.label_fscores = std::move(value.label_fscores);
    } catch (const Error& e) {
      trial.error = e.what();
    }
    evaluated.emplace(k, trace.trials.size());
    trace.trials.push_back(std::move(trial));
  };

  // Bounds first, then seeded draws from the interior without replacement.
  std::vector<std::int64_t> initial = {config.k_min, config.k_max};
  std::vector<std::int64_t> interior;
  for (std::int64_t k = config.k_min + 1; k < config.k_max; ++k) interior.push_back(k);
  Random rng(config.seed);
  for (std::size_t d = 0; d < interior.size() && initial.size() < config.n_init; ++d) {
    const auto pick = d + static_cast<std::size_t>(rng.below(interior.size() - d));
    std::swap(interior[d], interior[pick]);
    initial.push_back(interior[d]);
  }
  initial.resize(std::min(initial.size(), std::min(config.n_init, budget)));
  for (auto k : initial) evaluate(k);

  while (trace.trials.size() < budget) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& t : trace.trials) {
      if (t.error) continue;
      xs.push_back(normalize(t.k));
      ys.push_back(t.score);
    }
    SurrogateStep step;
    step.observations = xs.size();
    std::int64_t choice = -1;
    if (xs.empty()) {
      for (std::int64_t k = config.k_min; k <= config.k_max && choice < 0; ++k) {
        if (!evaluated.contains(k)) choice = k;
      }
    } else {
      const double incumbent = *std::max_element(ys.begin(), ys.end());
      const GaussianProcess gp(std::move(xs), std::move(ys));
      step.lengthscale = gp.lengthscale();
      step.log_marginal_likelihood = gp.log_marginal_likelihood();
      step.jitter = gp.jitter();
      double best_ei = -1.0;
      for (std::int64_t k = config.k_min; k <= config.k_max; ++k) {
        if (evaluated.contains(k)) continue;
        const auto pred = gp.predict(normalize(k));
        const double ei = expected_improvement(pred.mean, pred.stddev, incumbent);
        if (ei > best_ei) {
          best_ei = ei;
          choice = k;
        }
      }
      step.expected_improvement = best_ei;
    }
    if (choice < 0) break;
    step.chosen_k = choice;
    trace.steps.push_back(step);
    evaluate(choice);
  }

  bool found = false;
  for (const auto& t : trace.trials) {
    if (t.error) continue;
    if (!found || t.score > trace.best_score || (t.score == trace.best_score && t.k < trace.best_k)) {
      trace.best_k = t.k;
      trace.best_score = t.score;
      found = true;
    }
  }
  if (!found) {
    fail(ErrorCode::kInvalidArgument,
         "every objective evaluation failed; first error: " + trace.trials.front().error.value_or(""));
  }
  return trace;
}

OptimizationTrace estimate(const Dataset& data, const LabelAssignment& labels, GraphMethod method,
                           const OptimizerConfig& config) {
  config.metric.validate();
  require(method == GraphMethod::kTsne || method == GraphMethod::kUmap, "estimate needs the tsne or umap method");
  require(labels.size() == data.rows(), "dataset has " + std::to_string(data.rows()) + " rows but " +
                                            std::to_string(labels.size()) + " labels were given");
  const auto upper = static_cast<std::int64_t>(data.rows()) - 1;
  if (config.k_min < 2 || config.k_max > upper || config.k_min >= config.k_max) {
    fail(ErrorCode::kOutOfRange, "bounds [" + std::to_string(config.k_min) + ", " + std::to_string(config.k_max) +
                                     "] must satisfy 2 <= k_min < k_max <= " + std::to_string(upper));
  }
  std::optional<std::size_t> target;
  if (config.target_label) {
    const auto& vocab = labels.vocabulary();
    const auto it = std::find(vocab.begin(), vocab.end(), *config.target_label);
    require(it != vocab.end(), "target label '" + *config.target_label + "' is not in the label vocabulary");
    target = static_cast<std::size_t>(it - vocab.begin());
  }

  const Objective objective = [&](std::int64_t k) {
    const auto build = build_graph(data, method, static_cast<double>(k), config.prune_eps, config.threads);
    const auto r = report(build.graph, labels, config.metric, config.threads);
    ObjectiveValue value;
    value.score = target ? r.per_label[*target].fscore : r.fscore;
    value.precision = target ? r.per_label[*target].precision : r.precision;
    value.recall = target ? r.per_label[*target].recall : r.recall;
    for (const auto& ls : r.per_label) value.label_fscores.push_back(ls.fscore);
    return value;
  };
  auto trace = bayesian_optimize(objective, config);
  trace.label_names = labels.vocabulary();
  return trace;
}

std::string trace_to_json(const OptimizationTrace& trace, const OptimizerConfig& config, GraphMethod method) {
  using nlohmann::json;
  json doc;
  doc["method"] = to_string(method);
  doc["config"] = {{"k_min", config.k_min},
                   {"k_max", config.k_max},
                   {"n_init", config.n_init},
                   {"budget", config.budget},
                   {"seed", config.seed},
                   {"target", config.target_label ? "label:" + *config.target_label : std::string("global")},
                   {"alpha", config.metric.alpha},
                   {"beta", config.metric.beta}};
  if (config.prune_eps) doc["config"]["prune_eps"] = *config.prune_eps;
  json trials = json::array();
  for (const auto& t : trace.trials) {
    json item = {{"k", t.k}};
    if (t.error) {
      item["error"] = *t.error;
    } else {
      item["fscore"] = t.score;
      item["precision"] = t.precision;
      item["recall"] = t.recall;
      json per_label = json::object();
      for (std::size_t l = 0; l < t.label_fscores.size() && l < trace.label_names.size(); ++l) {
        per_label[trace.label_names[l]] = t.label_fscores[l];
      }
      item["label_fscores"] = std::move(per_label);
    }
    trials.push_back(std::move(item));
  }
  doc["trials"] = std::move(trials);
  json steps = json::array();
  for (const auto& s : trace.steps) {
    steps.push_back({{"observations", s.observations},
                     {"lengthscale", s.lengthscale},
                     {"log_marginal_likelihood", s.log_marginal_likelihood},
                     {"jitter", s.jitter},
                     {"chosen_k", s.chosen_k},
                     {"expected_improvement", s.expected_improvement}});
  }
  doc["surrogate"] = std::move(steps);
  doc["best"] = {{"k", trace.best_k}, {"fscore", trace.best_score}};
  return doc.dump(2) + "\n";
}

}  // namespace drpr
