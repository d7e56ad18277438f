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

#include "photostat/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "photostat/error.hpp"

namespace photostat {

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorKind::InvalidParameter, what);
}

// Unnormalized terms of the untruncated family, long enough that whatever
// lies past the last entry is below double resolution of the total.
std::vector<double> raw_terms(const StateModel& model, std::size_t n_max) {
  auto length_for = [n_max](double mean, double variance) {
    const double reach = mean + 50.0 * std::sqrt(std::max(variance, 0.0)) + 50.0;
    return std::max<std::size_t>(n_max, static_cast<std::size_t>(std::ceil(reach))) + 1;
  };

  return std::visit(
      [&](const auto& m) -> std::vector<double> {
        using T = std::decay_t<decltype(m)>;
        std::vector<double> t;
        if constexpr (std::is_same_v<T, Coherent>) {
          t.resize(length_for(m.mean, m.mean));
          if (m.mean == 0.0) {
            std::fill(t.begin(), t.end(), 0.0);
            t[0] = 1.0;
            return t;
          }
          const double log_mean = std::log(m.mean);
          for (std::size_t n = 0; n < t.size(); ++n) {
            const double k = static_cast<double>(n);
            t[n] = std::exp(-m.mean + k * log_mean - std::lgamma(k + 1.0));
          }
        } else if constexpr (std::is_same_v<T, FockMixture>) {
          t.assign(std::max<std::size_t>(n_max + 1, 3), 0.0);
          std::copy(m.weights.begin(), m.weights.end(), t.begin());
        } else if constexpr (std::is_same_v<T, GaussianPulsed>) {
          const double v = m.variance();
          t.resize(length_for(m.mean, v));
          for (std::size_t n = 0; n < t.size(); ++n) {
            const double d = static_cast<double>(n) - m.mean;
            t[n] = std::exp(-d * d / (2.0 * v));
          }
        } else if constexpr (std::is_same_v<T, Thermal>) {
          t.resize(length_for(m.mean, m.mean * (m.mean + 1.0)));
          const double ratio = m.mean / (m.mean + 1.0);
          double term = 1.0 / (m.mean + 1.0);
          for (double& x : t) {
            x = term;
            term *= ratio;
          }
        } else {
          const double mu = static_cast<double>(m.modes);
          t.resize(length_for(m.mean, m.mean + m.mean * m.mean / mu));
          // Negative binomial with mean N: rho_0 = (1 + N/mu)^-mu and
          // rho_{n+1} / rho_n = (n + mu) / (n + 1) / (1 + mu/N).
          double term = std::exp(-mu * std::log1p(m.mean / mu));
          const double shrink = m.mean / (m.mean + mu);
          for (std::size_t n = 0; n < t.size(); ++n) {
            t[n] = term;
            const double k = static_cast<double>(n);
            term *= (k + mu) / (k + 1.0) * shrink;
          }
        }
        return t;
      },
      model);
}

}  // namespace

PhotonDistribution::PhotonDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty()) invalid("photon distribution needs at least one entry");
  double total = 0.0;
  for (std::size_t n = 0; n < probs_.size(); ++n) {
    const double p = probs_[n];
    if (!std::isfinite(p) || p < 0.0) {
      invalid("photon distribution entry " + std::to_string(n) +
              " is negative or non-finite");
    }
    total += p;
  }
  if (!(total > 0.0)) invalid("photon distribution has zero total mass");
  if (total != 1.0) {
    for (double& p : probs_) p /= total;
  }
}

PhotonDistribution PhotonDistribution::fock(std::size_t n, std::size_t n_max) {
  if (n > n_max) invalid("Fock state beyond truncation bound");
  std::vector<double> p(n_max + 1, 0.0);
  p[n] = 1.0;
  return PhotonDistribution(std::move(p));
}

PhotonDistribution PhotonDistribution::uniform(std::size_t n_max) {
  return PhotonDistribution(std::vector<double>(n_max + 1, 1.0));
}

PhotonDistribution PhotonDistribution::padded(std::size_t n_max) const {
  if (n_max < this->n_max()) invalid("padding cannot shrink a distribution");
  std::vector<double> p(probs_);
  p.resize(n_max + 1, 0.0);
  return PhotonDistribution(std::move(p));
}

Family family_of(const StateModel& model) noexcept {
  return static_cast<Family>(model.index());
}

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::Coherent: return "coherent";
    case Family::FockMixture: return "fock-mixture";
    case Family::GaussianPulsed: return "gaussian-pulsed";
    case Family::Thermal: return "thermal";
    case Family::Multithermal: return "multithermal";
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) noexcept {
  for (Family f : kAllFamilies) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

int parameter_count(Family family) noexcept {
  switch (family) {
    case Family::Coherent:
    case Family::Thermal:
      return 1;
    case Family::FockMixture:
    case Family::GaussianPulsed:
    case Family::Multithermal:
      return 2;
  }
  return 0;
}

void validate(const StateModel& model) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Coherent>) {
          if (!std::isfinite(m.mean) || m.mean < 0.0) invalid("coherent: |alpha|^2 must be >= 0");
        } else if constexpr (std::is_same_v<T, FockMixture>) {
          double total = 0.0;
          for (double w : m.weights) {
            if (!std::isfinite(w) || w < 0.0) invalid("fock-mixture: weights must be >= 0");
            total += w;
          }
          if (std::abs(total - 1.0) > 1e-9) invalid("fock-mixture: weights must sum to 1");
        } else if constexpr (std::is_same_v<T, GaussianPulsed>) {
          if (!std::isfinite(m.mean) || m.mean <= 0.0) invalid("gaussian-pulsed: N must be > 0");
          if (!std::isfinite(m.excess_variance) || m.variance() <= 0.0) {
            invalid("gaussian-pulsed: variance N + sigma^2 must be > 0");
          }
        } else if constexpr (std::is_same_v<T, Thermal>) {
          if (!std::isfinite(m.mean) || m.mean <= 0.0) invalid("thermal: N must be > 0");
        } else {
          if (!std::isfinite(m.mean) || m.mean <= 0.0) invalid("multithermal: N must be > 0");
          if (m.modes < 1) invalid("multithermal: mode count must be >= 1");
        }
      },
      model);
}

ModelPmf evaluate_model(const StateModel& model, std::size_t n_max) {
  const std::vector<double> terms = raw_terms(model, n_max);
  // Tail summed from the far end so tiny tails are not lost to cancellation.
  double tail = 0.0;
  for (std::size_t n = terms.size(); n-- > n_max + 1;) tail += terms[n];
  double kept = 0.0;
  for (std::size_t n = n_max + 1; n-- > 0;) kept += terms[n];

  ModelPmf out;
  out.probs.assign(terms.begin(), terms.begin() + static_cast<std::ptrdiff_t>(n_max + 1));
  for (double& p : out.probs) p /= kept;
  out.tail_mass = tail / (tail + kept);
  return out;
}

TruncatedDistribution make_distribution(const StateModel& model, std::size_t n_max) {
  if (n_max < 1) invalid("n_max must be >= 1");
  validate(model);
  ModelPmf pmf = evaluate_model(model, n_max);
  if (pmf.tail_mass > kMaxTailMass) {
    throw Error(ErrorKind::TruncationTooSmall,
                std::string(to_string(family_of(model))) + ": tail mass " +
                    std::to_string(pmf.tail_mass) + " beyond n_max=" +
                    std::to_string(n_max) + " exceeds 1e-4; increase n_max");
  }
  return {PhotonDistribution(std::move(pmf.probs)), pmf.tail_mass};
}

std::size_t support_bound(const StateModel& model, double tail_tolerance) {
  validate(model);
  const std::vector<double> terms = raw_terms(model, 1);
  const double total = std::accumulate(terms.rbegin(), terms.rend(), 0.0);
  double tail = 0.0;
  std::size_t n = terms.size() - 1;
  // Walk down until adding the next term would push the tail past tolerance.
  while (n > 1 && (tail + terms[n]) / total <= tail_tolerance) {
    tail += terms[n];
    --n;
  }
  return n;
}

double fidelity(std::span<const double> a, std::span<const double> b) noexcept {
  const std::size_t n = std::min(a.size(), b.size());
  double g = 0.0;
  for (std::size_t i = 0; i < n; ++i) g += std::sqrt(a[i] * b[i]);
  return std::clamp(g, 0.0, 1.0);
}

double fidelity(const PhotonDistribution& a, const PhotonDistribution& b) noexcept {
  return fidelity(a.probs(), b.probs());
}

Moments moments(const PhotonDistribution& d) noexcept {
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t n = 0; n < d.size(); ++n) {
    const double k = static_cast<double>(n);
    mean += k * d[n];
    second += k * k * d[n];
  }
  return {mean, second - mean * mean};
}

}  // namespace photostat
