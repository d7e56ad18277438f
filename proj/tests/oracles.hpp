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

// Independent reference computations for tests. Nothing here calls into the
// library's numerical code paths.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace photostat::oracle {

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline double poisson(double mean, int n) {
  return std::exp(-mean) * std::pow(mean, n) / factorial(n);
}

inline double thermal(double mean, int n) {
  return std::pow(mean, n) / std::pow(mean + 1.0, n + 1);
}

/// Multithermal with mean N over mu modes, via the binomial coefficient.
inline double multithermal(double mean, int modes, int n) {
  const double coeff = factorial(n + modes - 1) / (factorial(n) * factorial(modes - 1));
  return coeff * std::pow(1.0 + modes / mean, -n) * std::pow(1.0 + mean / modes, -modes);
}

/// Pr(no photon detected) by enumerating which of the n photons fire.
/// Each photon independently fires with probability eta.
inline double no_click_by_enumeration(const std::vector<double>& rho, double eta) {
  double total = 0.0;
  for (std::size_t n = 0; n < rho.size(); ++n) {
    double silent = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      double p = 1.0;
      for (std::size_t k = 0; k < n; ++k) p *= (mask >> k) & 1u ? eta : 1.0 - eta;
      if (mask == 0) silent += p;
    }
    total += rho[n] * silent;
  }
  return total;
}

/// Literal transcription of one multiplicative update with renormalization.
inline std::vector<double> em_update(const std::vector<double>& etas,
                                     const std::vector<double>& f,
                                     const std::vector<double>& rho) {
  const std::size_t k = etas.size();
  const std::size_t m = rho.size();
  auto a = [&](std::size_t v, std::size_t n) { return std::pow(1.0 - etas[v], static_cast<double>(n)); };
  std::vector<double> p(k, 0.0);
  for (std::size_t v = 0; v < k; ++v)
    for (std::size_t n = 0; n < m; ++n) p[v] += a(v, n) * rho[n];
  std::vector<double> next(m, 0.0);
  double total = 0.0;
  for (std::size_t n = 0; n < m; ++n) {
    double col = 0.0;
    for (std::size_t l = 0; l < k; ++l) col += a(l, n);
    double s = 0.0;
    for (std::size_t v = 0; v < k; ++v) s += a(v, n) / col * f[v] / p[v];
    next[n] = rho[n] * s;
    total += next[n];
  }
  for (double& x : next) x /= total;
  return next;
}

/// Point of the 2-simplex grid (pitch 1/steps) minimizing
/// sum_v |f_v - sum_n (1 - eta_v)^n rho_n|.
inline std::array<double, 3> simplex_grid_min_error(const std::vector<double>& etas,
                                                    const std::vector<double>& f, int steps) {
  std::array<double, 3> best{};
  double best_err = INFINITY;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; i + j <= steps; ++j) {
      const double r0 = static_cast<double>(i) / steps;
      const double r1 = static_cast<double>(j) / steps;
      const double r2 = 1.0 - r0 - r1;
      double err = 0.0;
      for (std::size_t v = 0; v < etas.size(); ++v) {
        const double x = 1.0 - etas[v];
        err += std::abs(f[v] - (r0 + r1 * x + r2 * x * x));
      }
      if (err < best_err) best_err = err, best = {r0, r1, r2};
    }
  }
  return best;
}

}  // namespace photostat::oracle
