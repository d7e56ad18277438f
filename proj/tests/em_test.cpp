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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "photostat/error.hpp"

using namespace photostat;

namespace {

constexpr std::uint64_t kExactRuns = 1000000000000000ull;

// Counts chosen so that f_v reproduces p0(eta_v) to ~1e-15.
EfficiencyScan exact_scan(const PhotonDistribution& d, const std::vector<double>& etas) {
  std::vector<ScanPoint> pts;
  for (double eta : etas) {
    const double p = no_click_probability(d, eta);
    pts.push_back({eta, static_cast<std::uint64_t>(std::llround(p * static_cast<double>(kExactRuns))),
                   kExactRuns});
  }
  return EfficiencyScan(std::move(pts));
}

EmConfig config_for(std::size_t n_max) {
  EmConfig c;
  c.n_max = n_max;
  return c;
}

}  // namespace

TEST(EmStep, HandEvaluatedUpdate) {
  // A = [[1, 0.5], [1, 0]], p = (0.75, 0.5), f = (0.6, 0.3), column sums (2, 0.5):
  // rho' = 0.5 * (0.5*0.8 + 0.5*0.6, 1*0.8) = (0.35, 0.4) -> (7/15, 8/15).
  const EfficiencyScan scan({{0.5, 6, 10}, {1.0, 3, 10}});
  EmConfig c = config_for(1);
  const EmState s0 = initial_state(scan, c);
  const EmState s1 = em_step(s0);
  EXPECT_NEAR(s1.current[0], 7.0 / 15.0, 1e-15);
  EXPECT_NEAR(s1.current[1], 8.0 / 15.0, 1e-15);
  EXPECT_EQ(s1.iteration, 1u);
  EXPECT_EQ(s1.recorded_iterations, (std::vector<std::size_t>{0, 1}));
  EXPECT_NEAR(s0.epsilon_history.front(), 0.35, 1e-15);
}

TEST(EmStep, MatchesLiteralUpdateOnRandomProblems) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n_max = 1 + rng() % 15;
    std::vector<ScanPoint> pts;
    std::vector<double> etas, f;
    const std::size_t k = 2 + rng() % 10;
    for (std::size_t v = 0; v < k; ++v) {
      const double eta = (static_cast<double>(v) + u(rng)) / static_cast<double>(k);
      const std::uint64_t total = 1000 + rng() % 100000;
      const std::uint64_t n0 = 1 + rng() % (total - 1);
      pts.push_back({eta, n0, total});
      etas.push_back(eta);
      f.push_back(static_cast<double>(n0) / static_cast<double>(total));
    }
    std::vector<double> rho(n_max + 1);
    for (double& x : rho) x = 0.05 + u(rng);
    const double s = std::accumulate(rho.begin(), rho.end(), 0.0);
    for (double& x : rho) x /= s;

    EmConfig c = config_for(n_max);
    c.init = PhotonDistribution(rho);
    const EmState next = em_step(initial_state(EfficiencyScan(pts), c));
    const std::vector<double> want = oracle::em_update(etas, f, rho);
    for (std::size_t n = 0; n <= n_max; ++n) ASSERT_NEAR(next.current[n], want[n], 1e-12);
  }
}

TEST(EmStep, ExactFixedPoint) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> rho(9);
    for (double& x : rho) x = u(rng);
    const PhotonDistribution d(rho);
    EmConfig c = config_for(8);
    c.init = d;
    const EmState next = em_step(initial_state(exact_scan(d, EtaGrid{12, 0.05, 0.9}.values()), c));
    for (std::size_t n = 0; n <= 8; ++n) ASSERT_NEAR(next.current[n], d[n], 1e-12);
  }
}

TEST(EmStep, PositivityAndSupportPreservation) {
  const auto truth = make_distribution(Thermal{1.5}, 40).distribution;
  const auto scan = simulate_scan(truth, EtaGrid{10, 0.05, 0.8}.values(), 5000, 2);
  EmConfig c = config_for(12);
  std::vector<double> init(13, 1.0);
  init[3] = 0.0;
  init[7] = 0.0;
  c.init = PhotonDistribution(init);
  EmState s = initial_state(scan, c);
  for (int i = 0; i < 300; ++i) {
    s = em_step(s);
    double total = 0.0;
    for (std::size_t n = 0; n <= 12; ++n) {
      if (n == 3 || n == 7) {
        ASSERT_EQ(s.current[n], 0.0);
      } else {
        ASSERT_GT(s.current[n], 0.0);
      }
      total += s.current[n];
    }
    ASSERT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(EmStep, ZeroProbabilityDivision) {
  // One photon with eta = 1 never gives "no click", yet the data say it did.
  const EfficiencyScan scan({{1.0, 3, 10}, {0.5, 5, 10}});
  EmConfig c = config_for(2);
  c.init = PhotonDistribution::fock(1, 2);
  try {
    em_step(initial_state(scan, c));
    FAIL() << "expected zero-probability-division";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroProbabilityDivision);
  }
}

TEST(EmStep, ZeroFrequencyWithZeroProbabilityContributesNothing) {
  const EfficiencyScan scan({{1.0, 0, 10}, {0.5, 5, 10}});
  EmConfig c = config_for(2);
  c.init = PhotonDistribution({0.0, 0.5, 0.5});
  const EmState next = em_step(initial_state(scan, c));
  EXPECT_EQ(next.current[0], 0.0);
  EXPECT_TRUE(std::isfinite(next.current[1]));
}

TEST(RunEm, NonFiniteIsReported) {
  // p at eta = 1 - 3 * 2^-53 is subnormal for a 20-photon state, so f/p overflows.
  const double eta = 1.0 - 3.0 * std::ldexp(1.0, -53);
  const EfficiencyScan scan({{eta, 5, 10}, {0.0, 10, 10}});
  EmConfig c = config_for(20);
  c.init = PhotonDistribution::fock(20, 20);
  try {
    run_em(scan, c);
    FAIL() << "expected non-finite error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonFinite);
  }
}

TEST(RunEm, StopsImmediatelyAtExactFixedPoint) {
  const auto d = make_distribution(Coherent{1.2}, 12).distribution;
  EmConfig c = config_for(12);
  c.init = d;
  c.epsilon_target = 1e-10;
  const EmState s = run_em(exact_scan(d, EtaGrid{8, 0.1, 0.9}.values()), c);
  EXPECT_LE(s.iteration, 1u);
  EXPECT_EQ(s.stop_cause, StopCause::Epsilon);
  EXPECT_LT(s.epsilon_history.back(), 1e-10);
}

TEST(RunEm, StopsAtIterationCapAndRecordsHistory) {
  const auto truth = make_distribution(Thermal{2.0}, 60).distribution;
  const auto scan = simulate_scan(truth, EtaGrid{15, 0.02, 0.5}.values(), 10000, 5);
  EmConfig c = config_for(20);
  c.max_iterations = 250;
  c.record_every = 100;
  const EmState s = run_em(scan, c);
  EXPECT_EQ(s.iteration, 250u);
  EXPECT_EQ(s.stop_cause, StopCause::MaxIterations);
  EXPECT_EQ(s.recorded_iterations, (std::vector<std::size_t>{0, 100, 200, 250}));
  EXPECT_EQ(s.epsilon_history.size(), 4u);
  EXPECT_NEAR(s.epsilon_history.back(), total_error(s), 1e-13);
  EXPECT_NEAR(s.loglik_history.back(), log_likelihood(s), 1e-9);
  for (double e : s.epsilon_history) EXPECT_GE(e, 0.0);
}

TEST(RunEm, TraceSeesEveryIterate) {
  const auto truth = make_distribution(Thermal{2.0}, 60).distribution;
  const auto scan = simulate_scan(truth, EtaGrid{15, 0.02, 0.5}.values(), 10000, 5);
  EmConfig c = config_for(20);
  c.max_iterations = 300;
  c.record_every = 100;
  std::vector<IterationTrace> seen;
  c.trace = [&seen](const IterationTrace& t) { seen.push_back(t); };
  const EmState s = run_em(scan, c);
  ASSERT_EQ(seen.size(), 301u);
  for (std::size_t i = 0; i < seen.size(); ++i) EXPECT_EQ(seen[i].iteration, i);
  for (std::size_t r = 0; r < s.recorded_iterations.size(); ++r) {
    const IterationTrace& t = seen[s.recorded_iterations[r]];
    EXPECT_EQ(t.epsilon, s.epsilon_history[r]);
    EXPECT_EQ(t.loglik, s.loglik_history[r]);
  }
}

TEST(RunEm, BitReproducible) {
  const auto truth = make_distribution(GaussianPulsed{4.0, 1.0}, 40).distribution;
  const auto scan = simulate_scan(truth, EtaGrid{20, 0.01, 0.4}.values(), 10000, 17);
  EmConfig c = config_for(30);
  c.max_iterations = 3000;
  const EmState a = run_em(scan, c);
  const EmState b = run_em(scan, c);
  EXPECT_EQ(a.current, b.current);
  EXPECT_EQ(a.epsilon_history, b.epsilon_history);
  EXPECT_EQ(a.loglik_history, b.loglik_history);
}

TEST(RunEm, SmallInstancesReachTheExactSolution) {
  // Three distinct efficiencies determine rho on n <= 2 uniquely, so the EM
  // limit must be the truth and fit the data better than any simplex grid point.
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const PhotonDistribution truth({0.1 + u(rng), 0.1 + u(rng), 0.1 + u(rng)});
    const std::vector<double> etas{0.15 + 0.1 * u(rng), 0.45 + 0.1 * u(rng), 0.75 + 0.1 * u(rng)};
    const auto scan = exact_scan(truth, etas);
    EmConfig c = config_for(2);
    c.epsilon_target = 1e-12;
    c.max_iterations = 1000000;
    c.record_every = 1000000;
    const EmState s = run_em(scan, c);
    EXPECT_EQ(s.stop_cause, StopCause::Epsilon);
    for (std::size_t n = 0; n < 3; ++n) EXPECT_NEAR(s.current[n], truth[n], 1e-8);

    const auto grid = oracle::simplex_grid_min_error(etas, scan.frequencies(), 1000);
    double grid_eps = 0.0;
    for (std::size_t v = 0; v < etas.size(); ++v) {
      const double x = 1.0 - etas[v];
      grid_eps += std::abs(scan.frequencies()[v] - (grid[0] + grid[1] * x + grid[2] * x * x));
    }
    EXPECT_LE(total_error(s), grid_eps);
  }
}

TEST(TotalError, Examples) {
  // Second point is exact (p = rho_0 = 0.5 at eta = 1), so eps = |0.6 - 0.75|.
  const EfficiencyScan scan({{0.5, 6, 10}, {1.0, 5, 10}});
  const EmState s = initial_state(scan, config_for(1));
  EXPECT_NEAR(total_error(s), 0.15, 1e-15);

  const EfficiencyScan swapped({{1.0, 5, 10}, {0.5, 6, 10}});
  EXPECT_EQ(total_error(initial_state(swapped, config_for(1))), total_error(s));

  const auto d = make_distribution(Coherent{0.5}, 10).distribution;
  EmConfig c = config_for(10);
  c.init = d;
  EXPECT_LT(total_error(initial_state(exact_scan(d, {0.2, 0.6}), c)), 1e-14);
}

TEST(LogLikelihood, Examples) {
  // eta = 1 sees rho_0 = 0.5; the eta = 0 point has f = p = 1 and adds 0.
  const EfficiencyScan scan({{1.0, 10, 10}, {0.0, 5, 5}});
  const EmState s = initial_state(scan, config_for(1));
  EXPECT_NEAR(log_likelihood(s), 10.0 * std::log(0.5), 1e-12);
  EXPECT_LE(deviance(s), 0.0);
}

TEST(LogLikelihood, SaturatedAtEmpiricalFrequencies) {
  const auto d = make_distribution(Thermal{1.0}, 40).distribution;
  const std::vector<double> etas{0.2, 0.5, 0.8};
  const auto scan = exact_scan(d, etas);
  EmConfig c = config_for(40);
  c.init = d;
  const EmState at_truth = initial_state(scan, c);
  EXPECT_NEAR(deviance(at_truth), 0.0, 1e-3);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> rho(d.probs().begin(), d.probs().end());
    for (double& x : rho) x *= 1.0 + 0.2 * (u(rng) - 0.5);
    c.init = PhotonDistribution(rho);
    const EmState perturbed = initial_state(scan, c);
    EXPECT_LT(log_likelihood(perturbed), log_likelihood(at_truth));
    EXPECT_LE(deviance(perturbed), 0.0);
  }
}

TEST(EmConfig, Validation) {
  const EfficiencyScan scan({{0.1, 5, 10}, {0.2, 4, 10}});
  EmConfig c = config_for(4);
  c.epsilon_target = 0.0;
  EXPECT_THROW(initial_state(scan, c), Error);
  c = config_for(4);
  c.max_iterations = 0;
  EXPECT_THROW(initial_state(scan, c), Error);
  c = config_for(4);
  c.init = PhotonDistribution::uniform(5);
  EXPECT_THROW(initial_state(scan, c), Error);
}
