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

#include <algorithm>
#include <cmath>
#include <string>

#include "photostat/error.hpp"
#include "photostat/random.hpp"

namespace photostat {

namespace {

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw Error(ErrorKind::InvalidParameter,
                "quantum efficiency " + std::to_string(eta) + " outside [0, 1]");
  }
}

}  // namespace

EfficiencyScan::EfficiencyScan(std::vector<ScanPoint> points)
    : points_(std::move(points)) {
  auto violation = [](const std::string& what) {
    throw Error(ErrorKind::InvariantViolation, what);
  };
  if (points_.size() < 2) {
    violation("efficiency scan needs at least 2 points, got " +
              std::to_string(points_.size()));
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const ScanPoint& p = points_[i];
    const std::string where = "scan point " + std::to_string(i) + ": ";
    if (!(p.eta >= 0.0 && p.eta <= 1.0)) violation(where + "eta outside [0, 1]");
    if (p.n_total == 0) violation(where + "n_total must be positive");
    if (p.n0 > p.n_total) violation(where + "n0 exceeds n_total");
    for (std::size_t j = 0; j < i; ++j) {
      if (points_[j].eta == p.eta) violation(where + "duplicate eta");
    }
  }
}

std::vector<double> EfficiencyScan::etas() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const ScanPoint& p : points_) out.push_back(p.eta);
  return out;
}

std::vector<double> EfficiencyScan::frequencies() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const ScanPoint& p : points_) out.push_back(p.frequency());
  return out;
}

double no_click_probability(const PhotonDistribution& d, double eta) {
  check_eta(eta);
  const double x = 1.0 - eta;
  double p = 0.0;
  for (std::size_t n = d.size(); n-- > 0;) p = p * x + d[n];
  return std::clamp(p, 0.0, 1.0);
}

Matrix response_matrix(std::span<const double> etas, std::size_t n_max) {
  if (n_max < 1) throw Error(ErrorKind::InvalidParameter, "n_max must be >= 1");
  Matrix a{etas.size(), n_max + 1, {}};
  a.data.resize(a.rows * a.cols);
  for (std::size_t v = 0; v < a.rows; ++v) {
    check_eta(etas[v]);
    const double x = 1.0 - etas[v];
    for (std::size_t n = 0; n < a.cols; ++n) {
      a.data[v * a.cols + n] = n == 0 ? 1.0 : std::pow(x, static_cast<double>(n));
    }
  }
  return a;
}

EfficiencyScan simulate_scan(const PhotonDistribution& d,
                             std::span<const double> etas,
                             std::uint64_t runs_per_eta, std::uint64_t seed) {
  if (runs_per_eta == 0) {
    throw Error(ErrorKind::InvalidParameter, "runs_per_eta must be positive");
  }
  random::SplitMix64 streams(seed);
  std::vector<ScanPoint> points;
  points.reserve(etas.size());
  for (double eta : etas) {
    std::mt19937_64 engine(streams.next());
    const double p0 = no_click_probability(d, eta);
    points.push_back({eta, random::binomial(engine, runs_per_eta, p0), runs_per_eta});
  }
  return EfficiencyScan(std::move(points));
}

std::vector<double> EtaGrid::values() const {
  if (count < 2) throw Error(ErrorKind::InvalidParameter, "eta grid needs count >= 2");
  if (!(min >= 0.0 && max <= 1.0 && min < max)) {
    throw Error(ErrorKind::InvalidParameter, "eta grid bounds must satisfy 0 <= min < max <= 1");
  }
  std::vector<double> out(count);
  const double step = (max - min) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = min + step * static_cast<double>(i);
  out.back() = max;
  return out;
}

}  // namespace photostat
