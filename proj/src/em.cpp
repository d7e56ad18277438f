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

#include "photostat/em.hpp"

#include <cmath>
#include <string>

#include "photostat/error.hpp"

namespace photostat {

namespace {

[[noreturn]] void non_finite(std::size_t iteration) {
  throw Error(ErrorKind::NonFinite,
              "non-finite value in EM iterate at iteration " + std::to_string(iteration));
}

std::vector<double> padded_probs(const PhotonDistribution& d, std::size_t stride) {
  std::vector<double> rho(d.probs().begin(), d.probs().end());
  rho.resize(stride, 0.0);
  return rho;
}

PhotonDistribution unpad(std::span<const double> rho, std::size_t n_max) {
  return PhotonDistribution(std::vector<double>(rho.begin(), rho.begin() + static_cast<std::ptrdiff_t>(n_max + 1)));
}

struct Evaluation {
  std::vector<double> p;
  std::vector<double> q;
};

Evaluation evaluate(const EmProblem& problem, std::span<const double> rho) {
  Evaluation e{std::vector<double>(problem.rows()), std::vector<double>(problem.rows())};
  problem.no_click(rho, e.p);
  problem.click(rho, e.q);
  return e;
}

void record(EmState& state, const EmProblem& problem, std::span<const double> rho,
            std::span<const double> p, std::span<double> q_scratch) {
  problem.click(rho, q_scratch);
  state.recorded_iterations.push_back(state.iteration);
  state.epsilon_history.push_back(problem.total_error(p));
  state.loglik_history.push_back(problem.log_likelihood(p, q_scratch));
}

}  // namespace

void EmConfig::validate() const {
  auto invalid = [](const std::string& what) {
    throw Error(ErrorKind::InvalidParameter, "EM config: " + what);
  };
  if (n_max < 1) invalid("n_max must be >= 1");
  if (!(epsilon_target > 0.0)) invalid("epsilon_target must be > 0");
  if (max_iterations < 1) invalid("max_iterations must be >= 1");
  if (record_every < 1) invalid("record_every must be >= 1");
  if (init && init->n_max() != n_max) invalid("init distribution must have n_max = config n_max");
}

EmProblem::EmProblem(EfficiencyScan scan, std::size_t n_max, kernels::Backend backend)
    : scan_(std::move(scan)),
      n_max_(n_max),
      stride_(kernels::padded_stride(n_max + 1)),
      kernels_(&kernels::select(backend)),
      frequencies_(scan_.frequencies()) {
  const std::vector<double> etas = scan_.etas();
  const Matrix a = response_matrix(etas, n_max);
  const std::size_t rows = a.rows;
  response_.assign(rows * stride_, 0.0);
  click_.assign(rows * stride_, 0.0);
  weights_.assign(rows * stride_, 0.0);

  std::vector<double> column_sum(a.cols, 0.0);
  for (std::size_t v = 0; v < rows; ++v) {
    const double log_miss = std::log1p(-etas[v]);
    for (std::size_t n = 0; n < a.cols; ++n) {
      response_[v * stride_ + n] = a(v, n);
      click_[v * stride_ + n] = n == 0 ? 0.0 : -std::expm1(static_cast<double>(n) * log_miss);
      column_sum[n] += a(v, n);
    }
  }
  for (std::size_t v = 0; v < rows; ++v) {
    for (std::size_t n = 0; n < a.cols; ++n) {
      if (column_sum[n] > 0.0) weights_[v * stride_ + n] = a(v, n) / column_sum[n];
    }
  }
}

void EmProblem::no_click(std::span<const double> rho, std::span<double> p) const {
  kernels_->forward(response_, stride_, rho, p);
}

void EmProblem::click(std::span<const double> rho, std::span<double> q) const {
  kernels_->forward(click_, stride_, rho, q);
}

void EmProblem::update(std::span<double> rho, std::span<const double> p,
                       std::span<double> work, std::size_t iteration) const {
  const std::size_t k = rows();
  std::span<double> ratio = work.first(k);
  std::span<double> correction = work.subspan(k, stride_);
  for (std::size_t v = 0; v < k; ++v) {
    const double f = frequencies_[v];
    if (p[v] > 0.0) {
      ratio[v] = f / p[v];
    } else if (f == 0.0) {
      ratio[v] = 0.0;
    } else {
      throw Error(ErrorKind::ZeroProbabilityDivision,
                  "model no-click probability vanishes at eta=" +
                      std::to_string(scan_.points()[v].eta) + " where f=" +
                      std::to_string(f) + " (iteration " + std::to_string(iteration) +
                      "); truncation too small or corrupt data");
    }
  }
  kernels_->backproject(weights_, stride_, ratio, correction);
  const double total = kernels_->multiply_sum(rho, correction);
  if (!std::isfinite(total) || !(total > 0.0)) non_finite(iteration + 1);
  kernels_->scale(rho, 1.0 / total);
}

double EmProblem::total_error(std::span<const double> p) const noexcept {
  double eps = 0.0;
  for (std::size_t v = 0; v < rows(); ++v) eps += std::abs(frequencies_[v] - p[v]);
  return eps;
}

double EmProblem::log_likelihood(std::span<const double> p,
                                 std::span<const double> q) const noexcept {
  double ll = 0.0;
  const auto points = scan_.points();
  for (std::size_t v = 0; v < rows(); ++v) {
    const auto n0 = static_cast<double>(points[v].n0);
    const auto n1 = static_cast<double>(points[v].n_total - points[v].n0);
    if (n0 > 0.0) ll += n0 * std::log(p[v]);
    if (n1 > 0.0) ll += n1 * std::log(q[v]);
  }
  return ll;
}

double EmProblem::saturated_log_likelihood() const noexcept {
  std::vector<double> q(rows());
  for (std::size_t v = 0; v < rows(); ++v) q[v] = 1.0 - frequencies_[v];
  return log_likelihood(frequencies_, q);
}

EmState initial_state(const EfficiencyScan& scan, const EmConfig& config) {
  config.validate();
  auto problem = std::make_shared<const EmProblem>(scan, config.n_max, config.backend);
  EmState state{problem,
                config.init ? *config.init : PhotonDistribution::uniform(config.n_max),
                0, {}, {}, {}, std::nullopt};
  const std::vector<double> rho = padded_probs(state.current, problem->stride());
  Evaluation e = evaluate(*problem, rho);
  record(state, *problem, rho, e.p, e.q);
  return state;
}

EmState em_step(const EmState& state) {
  const EmProblem& problem = *state.problem;
  std::vector<double> rho = padded_probs(state.current, problem.stride());
  std::vector<double> p(problem.rows());
  std::vector<double> work(problem.rows() + problem.stride());
  problem.no_click(rho, p);
  problem.update(rho, p, work, state.iteration);

  EmState next = state;
  next.current = unpad(rho, problem.n_max());
  next.iteration = state.iteration + 1;
  next.stop_cause.reset();
  Evaluation e = evaluate(problem, rho);
  record(next, problem, rho, e.p, e.q);
  return next;
}

EmState run_em(const EfficiencyScan& scan, const EmConfig& config) {
  EmState state = initial_state(scan, config);
  state.recorded_iterations.clear();
  state.epsilon_history.clear();
  state.loglik_history.clear();

  const EmProblem& problem = *state.problem;
  std::vector<double> rho = padded_probs(state.current, problem.stride());
  std::vector<double> p(problem.rows());
  std::vector<double> q(problem.rows());
  std::vector<double> work(problem.rows() + problem.stride());

  for (;;) {
    problem.no_click(rho, p);
    const double eps = problem.total_error(p);
    if (!std::isfinite(eps)) non_finite(state.iteration);
    const bool converged = eps < config.epsilon_target;
    const bool exhausted = state.iteration >= config.max_iterations;
    if (config.trace) {
      problem.click(rho, q);
      config.trace({state.iteration, eps, problem.log_likelihood(p, q)});
    }
    if (converged || exhausted || state.iteration % config.record_every == 0) {
      record(state, problem, rho, p, q);
    }
    if (converged || exhausted) {
      state.stop_cause = converged ? StopCause::Epsilon : StopCause::MaxIterations;
      break;
    }
    problem.update(rho, p, work, state.iteration);
    ++state.iteration;
  }
  state.current = unpad(rho, problem.n_max());
  return state;
}

std::vector<double> model_probabilities(const EmState& state) {
  const EmProblem& problem = *state.problem;
  const std::vector<double> rho = padded_probs(state.current, problem.stride());
  std::vector<double> p(problem.rows());
  problem.no_click(rho, p);
  return p;
}

double total_error(const EmState& state) {
  return state.problem->total_error(model_probabilities(state));
}

double log_likelihood(const EmState& state) {
  const EmProblem& problem = *state.problem;
  const std::vector<double> rho = padded_probs(state.current, problem.stride());
  Evaluation e = evaluate(problem, rho);
  return problem.log_likelihood(e.p, e.q);
}

double deviance(const EmState& state) {
  return log_likelihood(state) - state.problem->saturated_log_likelihood();
}

}  // namespace photostat
