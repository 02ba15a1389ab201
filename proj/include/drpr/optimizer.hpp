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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "drpr/dataset.hpp"
#include "drpr/metrics.hpp"

namespace drpr {

struct OptimizerConfig {
  std::int64_t k_min = 2;
  std::int64_t k_max = 100;
  std::size_t n_init = 5;
  std::size_t budget = 25;
  std::uint64_t seed = 0;
  std::optional<std::string> target_label;  // empty: global f-score
  MetricConfig metric;
  std::optional<double> prune_eps;  // t-SNE only
  unsigned threads = 1;
};

struct Trial {
  std::int64_t k = 0;
  double score = 0.0;  // objective value; meaningless when `error` is set
  double precision = 0.0;
  double recall = 0.0;
  std::vector<double> label_fscores;
  std::optional<std::string> error;
};

// Surrogate state behind one acquisition step.
struct SurrogateStep {
  std::size_t observations = 0;
  double lengthscale = 0.0;
  double log_marginal_likelihood = 0.0;
  double jitter = 0.0;
  std::int64_t chosen_k = 0;
  double expected_improvement = 0.0;
};

struct OptimizationTrace {
  std::vector<std::string> label_names;
  std::vector<Trial> trials;  // evaluation order
  std::vector<SurrogateStep> steps;
  std::int64_t best_k = 0;
  double best_score = 0.0;
};

struct ObjectiveValue {
  double score = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::vector<double> label_fscores;
};

using Objective = std::function<ObjectiveValue(std::int64_t k)>;

/// E[max(0, X - best)] for X ~ Normal(mean, stddev^2).
double expected_improvement(double mean, double stddev, double best_so_far);

/// Gaussian-process regression over one input with a unit-variance
/// squared-exponential kernel. Targets are standardized internally.
class GaussianProcess {
 public:
  static constexpr double kJitter = 1e-6;
  static constexpr double kLengthscales[] = {0.05, 0.1, 0.2, 0.5, 1.0};

  // Picks the lengthscale with the largest marginal likelihood (first wins on
  // ties). Jitter grows tenfold if the Cholesky factorization fails.
  GaussianProcess(std::vector<double> x, std::vector<double> y);

  double lengthscale() const noexcept { return lengthscale_; }
  double log_marginal_likelihood() const noexcept { return log_ml_; }
  double jitter() const noexcept { return jitter_; }

  struct Prediction {
    double mean;
    double stddev;
  };
  Prediction predict(double x) const;

 private:
  struct Fit;
  bool fit(double lengthscale, double jitter, Fit& out) const;

  std::vector<double> x_;
  std::vector<double> y_;
  double y_mean_ = 0.0;
  double y_scale_ = 1.0;
  double lengthscale_ = 0.0;
  double log_ml_ = 0.0;
  double jitter_ = kJitter;
  std::vector<double> weights_;  // K^-1 y (standardized)
  std::vector<double> chol_;     // lower factor, row-major
};

// Bayesian optimization of `objective` over the integers [k_min, k_max].
OptimizationTrace bayesian_optimize(const Objective& objective, const OptimizerConfig& config);

/// Objective = global f-score (or one label's f-score) of the graph built at k.
OptimizationTrace estimate(const Dataset& data, const LabelAssignment& labels, GraphMethod method,
                           const OptimizerConfig& config);

std::string trace_to_json(const OptimizationTrace& trace, const OptimizerConfig& config, GraphMethod method);

}  // namespace drpr
