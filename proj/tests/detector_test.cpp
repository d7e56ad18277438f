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

#include "photostat/detector.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "photostat/error.hpp"

using namespace photostat;

namespace {

PhotonDistribution random_distribution(std::mt19937_64& rng, std::size_t n_max) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(n_max + 1);
  for (double& x : p) x = u(rng);
  return PhotonDistribution(std::move(p));
}

}  // namespace

TEST(NoClickProbability, Examples) {
  EXPECT_NEAR(no_click_probability(PhotonDistribution::fock(1, 4), 0.2), 0.8, 1e-15);
  std::mt19937_64 rng(1);
  EXPECT_DOUBLE_EQ(no_click_probability(random_distribution(rng, 12), 0.0), 1.0);
  const auto coherent = make_distribution(Coherent{0.02}, 8).distribution;
  EXPECT_NEAR(no_click_probability(coherent, 0.66), std::exp(-0.66 * 0.02), 1e-9);
}

TEST(NoClickProbability, RejectsEtaOutOfRange) {
  const auto d = PhotonDistribution::uniform(3);
  EXPECT_THROW(no_click_probability(d, -0.01), Error);
  EXPECT_THROW(no_click_probability(d, 1.01), Error);
  EXPECT_THROW(no_click_probability(d, NAN), Error);
}

TEST(NoClickProbability, MatchesBernoulliThinningEnumeration) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = random_distribution(rng, 1 + rng() % 3);
    const double eta = u(rng);
    const std::vector<double> rho(d.probs().begin(), d.probs().end());
    ASSERT_NEAR(no_click_probability(d, eta), oracle::no_click_by_enumeration(rho, eta), 1e-12);
  }
}

TEST(NoClickProbability, MonotoneInEta) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = random_distribution(rng, rng() % 30 + 1);
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    ASSERT_GE(no_click_probability(d, a), no_click_probability(d, b));
  }
}

TEST(ResponseMatrix, Examples) {
  const std::vector<double> one{1.0};
  const Matrix a = response_matrix(one, 2);
  EXPECT_EQ(a(0, 0), 1.0);
  EXPECT_EQ(a(0, 1), 0.0);
  EXPECT_EQ(a(0, 2), 0.0);

  const std::vector<double> half{0.5};
  const Matrix b = response_matrix(half, 2);
  EXPECT_EQ(b(0, 1), 0.5);
  EXPECT_EQ(b(0, 2), 0.25);

  const std::vector<double> two{0.0, 0.2};
  const Matrix c = response_matrix(two, 1);
  EXPECT_EQ(c.rows, 2u);
  EXPECT_EQ(c.cols, 2u);
  EXPECT_EQ(c(0, 0), 1.0);
  EXPECT_EQ(c(0, 1), 1.0);
  EXPECT_EQ(c(1, 0), 1.0);
  EXPECT_NEAR(c(1, 1), 0.8, 1e-16);
}

TEST(ResponseMatrix, RowProductAgreesWithDirectSum) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n_max = 1 + rng() % 40;
    const auto d = random_distribution(rng, n_max);
    std::vector<double> etas(1 + rng() % 20);
    for (double& e : etas) e = u(rng);
    const Matrix a = response_matrix(etas, n_max);
    for (std::size_t v = 0; v < etas.size(); ++v) {
      double p = 0.0;
      for (std::size_t n = 0; n <= n_max; ++n) p += a(v, n) * d[n];
      ASSERT_NEAR(p, no_click_probability(d, etas[v]), 1e-12);
    }
  }
}

TEST(SimulateScan, DegenerateStates) {
  const std::vector<double> etas{0.0, 0.3, 0.7, 1.0};
  const auto vacuum = simulate_scan(PhotonDistribution::fock(0, 5), etas, 777, 3);
  for (const ScanPoint& p : vacuum.points()) EXPECT_EQ(p.n0, p.n_total);

  const std::vector<double> full{0.5, 1.0};
  const auto single = simulate_scan(PhotonDistribution::fock(1, 5), full, 10000, 3);
  EXPECT_EQ(single.points()[1].n0, 0u);
}

TEST(SimulateScan, CoherentFrequenciesWithinFourSigma) {
  const auto d = make_distribution(Coherent{0.02}, 8).distribution;
  const std::vector<double> etas = EtaGrid{15, 0.0, 0.66}.values();
  const auto scan = simulate_scan(d, etas, 1000000, 42);
  for (const ScanPoint& p : scan.points()) {
    const double expected = std::exp(-p.eta * 0.02);
    const double sd = std::sqrt(expected * (1.0 - expected) / 1e6);
    EXPECT_LE(std::abs(p.frequency() - expected), 4.0 * sd + 1e-12) << "eta=" << p.eta;
  }
}

TEST(SimulateScan, SeedDeterminism) {
  const auto d = make_distribution(Thermal{2.0}, 60).distribution;
  const std::vector<double> etas = EtaGrid{10, 0.05, 0.5}.values();
  const auto a = simulate_scan(d, etas, 5000, 123);
  const auto b = simulate_scan(d, etas, 5000, 123);
  const auto c = simulate_scan(d, etas, 5000, 124);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(EfficiencyScan, Invariants) {
  auto kind_of = [](std::vector<ScanPoint> pts) {
    try {
      EfficiencyScan s(std::move(pts));
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;
  };
  EXPECT_EQ(kind_of({{0.1, 5, 10}}), ErrorKind::InvariantViolation);
  EXPECT_EQ(kind_of({{0.1, 5, 10}, {0.2, 11, 10}}), ErrorKind::InvariantViolation);
  EXPECT_EQ(kind_of({{0.1, 5, 10}, {1.3, 1, 10}}), ErrorKind::InvariantViolation);
  EXPECT_EQ(kind_of({{0.1, 5, 10}, {0.1, 4, 10}}), ErrorKind::InvariantViolation);
  EXPECT_EQ(kind_of({{0.1, 5, 10}, {0.2, 0, 0}}), ErrorKind::InvariantViolation);
  const EfficiencyScan ok({{0.0, 10, 10}, {1.0, 0, 10}});
  EXPECT_EQ(ok.frequencies(), (std::vector<double>{1.0, 0.0}));
}

TEST(EtaGrid, LinearInclusive) {
  const auto v = EtaGrid{34, 0.005, 0.20}.values();
  ASSERT_EQ(v.size(), 34u);
  EXPECT_EQ(v.front(), 0.005);
  EXPECT_EQ(v.back(), 0.20);
  for (std::size_t i = 1; i < v.size(); ++i) EXPECT_NEAR(v[i] - v[i - 1], 0.195 / 33, 1e-15);
  EXPECT_THROW((EtaGrid{1, 0.0, 1.0}.values()), Error);
  EXPECT_THROW((EtaGrid{5, 0.5, 0.2}.values()), Error);
}
