// Copyright 2026 The photostat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "photostat/detector.hpp"
#include "photostat/distribution.hpp"
#include "photostat/kernels.hpp"

namespace photostat {

struct IterationTrace {
  std::size_t iteration;
  double epsilon;
  double loglik;
};

struct EmConfig {
  std::size_t n_max = 30;
  double epsilon_target = 1e-4;
  std::size_t max_iterations = 100000;
  /// History keeps iteration 0, every record_every-th iteration and the last.
  std::size_t record_every = 1;
  /// Starting iterate; uniform on 0..n_max when absent. Zeros stay zero.
  std::optional<PhotonDistribution> init;
  kernels::Backend backend = kernels::Backend::Auto;
  /// Called by run_em for every iterate, recorded or not. Costs one extra
  /// likelihood evaluation per iteration when set.
  std::function<void(const IterationTrace&)> trace;

  /// Throws Error{InvalidParameter}.
  void validate() const;
};

/// A scan prepared for inversion at a fixed truncation: response matrix
/// A[v][n] = (1 - eta_v)^n, click matrix 1 - A, and the column-normalized
/// weights A[v][n] / sum_l A[l][n], all padded for the kernels.
class EmProblem {
 public:
  EmProblem(EfficiencyScan scan, std::size_t n_max, kernels::Backend backend);

  const EfficiencyScan& scan() const noexcept { return scan_; }
  std::size_t n_max() const noexcept { return n_max_; }
  std::size_t stride() const noexcept { return stride_; }
  std::size_t rows() const noexcept { return frequencies_.size(); }
  std::span<const double> frequencies() const noexcept { return frequencies_; }
  const kernels::KernelSet& kernels() const noexcept { return *kernels_; }

  /// p[v] = sum_n A[v][n] rho[n]; rho padded to stride().
  void no_click(std::span<const double> rho, std::span<double> p) const;
  /// 1 - p[v], summed directly so it keeps precision when p is close to 1.
  void click(std::span<const double> rho, std::span<double> q) const;

  /// One multiplicative update of rho (padded) in place, followed by
  /// renormalization. `p` holds no_click(rho); `work` needs rows() + stride().
  void update(std::span<double> rho, std::span<const double> p,
              std::span<double> work, std::size_t iteration) const;

  double total_error(std::span<const double> p) const noexcept;
  double log_likelihood(std::span<const double> p, std::span<const double> q) const noexcept;
  /// Log-likelihood of the saturated model p = f.
  double saturated_log_likelihood() const noexcept;

 private:
  EfficiencyScan scan_;
  std::size_t n_max_;
  std::size_t stride_;
  const kernels::KernelSet* kernels_;
  std::vector<double> frequencies_;
  std::vector<double> response_;
  std::vector<double> click_;
  std::vector<double> weights_;
};

enum class StopCause { Epsilon, MaxIterations };

struct EmState {
  std::shared_ptr<const EmProblem> problem;
  PhotonDistribution current;
  std::size_t iteration = 0;
  std::vector<std::size_t> recorded_iterations;
  std::vector<double> epsilon_history;
  std::vector<double> loglik_history;
  std::optional<StopCause> stop_cause;
};

/// State at iteration 0 (history records that iteration).
EmState initial_state(const EfficiencyScan& scan, const EmConfig& config);

/// Applies one EM update to `state.current`. Throws ZeroProbabilityDivision
/// when some p_v = 0 while f_v > 0.
EmState em_step(const EmState& state);

/// Iterates until epsilon < epsilon_target or max_iterations updates have
/// been applied. Throws NonFinite if a NaN or infinity appears.
EmState run_em(const EfficiencyScan& scan, const EmConfig& config);

/// Model no-click probabilities p_v at the current iterate.
std::vector<double> model_probabilities(const EmState& state);

/// sum_v |f_v - p_v| at the current iterate.
double total_error(const EmState& state);

/// Binomial log-likelihood sum_v n_v [f ln p + (1 - f) ln(1 - p)], 0 ln 0 = 0.
double log_likelihood(const EmState& state);

/// log_likelihood minus its saturated value; never positive.
double deviance(const EmState& state);

}  // namespace photostat
