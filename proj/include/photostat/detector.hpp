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
#include <cstdint>
#include <span>
#include <vector>

#include "photostat/distribution.hpp"

namespace photostat {

/// One efficiency setting of an on/off measurement.
struct ScanPoint {
  double eta = 0.0;
  std::uint64_t n0 = 0;       // no-click events
  std::uint64_t n_total = 0;  // runs

  double frequency() const noexcept {
    return static_cast<double>(n0) / static_cast<double>(n_total);
  }

  friend bool operator==(const ScanPoint&, const ScanPoint&) = default;
};

/// No-click counts at K >= 2 distinct quantum efficiencies.
class EfficiencyScan {
 public:
  /// Throws Error{InvariantViolation} naming the offending record index.
  explicit EfficiencyScan(std::vector<ScanPoint> points);

  std::span<const ScanPoint> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  std::vector<double> etas() const;
  std::vector<double> frequencies() const;

  friend bool operator==(const EfficiencyScan&, const EfficiencyScan&) = default;

 private:
  std::vector<ScanPoint> points_;
};

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double operator()(std::size_t r, std::size_t c) const noexcept {
    return data[r * cols + c];
  }
  std::span<const double> row(std::size_t r) const noexcept {
    return std::span<const double>(data).subspan(r * cols, cols);
  }
};

/// p0(eta) = sum_n (1 - eta)^n rho_n, no dark counts.
double no_click_probability(const PhotonDistribution& d, double eta);

/// A[v][n] = (1 - eta_v)^n, K x (n_max + 1).
Matrix response_matrix(std::span<const double> etas, std::size_t n_max);

/// Draws each n0 from Binomial(runs_per_eta, p0(eta)). Point k uses random
/// stream k of `seed` (see random.hpp), so output is a pure function of the
/// arguments.
EfficiencyScan simulate_scan(const PhotonDistribution& d,
                             std::span<const double> etas,
                             std::uint64_t runs_per_eta, std::uint64_t seed);

enum class GridSpacing { Linear };

/// `count` efficiencies from `min` to `max` inclusive.
struct EtaGrid {
  std::size_t count = 2;
  double min = 0.0;
  double max = 1.0;
  GridSpacing spacing = GridSpacing::Linear;

  std::vector<double> values() const;
};

}  // namespace photostat
