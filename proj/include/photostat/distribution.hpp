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

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace photostat {

/// Truncated photon-number distribution on n = 0..n_max.
///
/// Construction validates (finite, nonnegative, positive total mass) and
/// normalizes, so every live instance sums to one and has no negative entries.
class PhotonDistribution {
 public:
  explicit PhotonDistribution(std::vector<double> probs);

  static PhotonDistribution fock(std::size_t n, std::size_t n_max);
  static PhotonDistribution uniform(std::size_t n_max);

  std::size_t n_max() const noexcept { return probs_.size() - 1; }
  std::size_t size() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }

  /// Probability of n photons; zero past the truncation bound.
  double operator[](std::size_t n) const noexcept {
    return n < probs_.size() ? probs_[n] : 0.0;
  }

  /// Same distribution on a longer, zero-padded support.
  PhotonDistribution padded(std::size_t n_max) const;

  friend bool operator==(const PhotonDistribution&,
                         const PhotonDistribution&) = default;

 private:
  std::vector<double> probs_;
};

// Parametric state families. Means are photon numbers.

struct Coherent {
  double mean = 0.0;  // |alpha|^2
  friend bool operator==(const Coherent&, const Coherent&) = default;
};

/// Mixture of the vacuum, one- and two-photon Fock states.
struct FockMixture {
  std::array<double, 3> weights{1.0, 0.0, 0.0};
  friend bool operator==(const FockMixture&, const FockMixture&) = default;
};

/// Gaussian photon statistics of a pulsed laser: mean N, variance N + excess.
struct GaussianPulsed {
  double mean = 1.0;
  double excess_variance = 0.0;
  double variance() const noexcept { return mean + excess_variance; }
  friend bool operator==(const GaussianPulsed&, const GaussianPulsed&) = default;
};

/// Single-mode (pseudo-)thermal light.
struct Thermal {
  double mean = 1.0;
  friend bool operator==(const Thermal&, const Thermal&) = default;
};

/// Convolution of `modes` identical thermal modes with total mean N.
struct Multithermal {
  double mean = 1.0;
  int modes = 1;
  friend bool operator==(const Multithermal&, const Multithermal&) = default;
};

using StateModel =
    std::variant<Coherent, FockMixture, GaussianPulsed, Thermal, Multithermal>;

enum class Family { Coherent, FockMixture, GaussianPulsed, Thermal, Multithermal };

inline constexpr std::array<Family, 5> kAllFamilies{
    Family::Coherent, Family::FockMixture, Family::GaussianPulsed,
    Family::Thermal, Family::Multithermal};

Family family_of(const StateModel& model) noexcept;
std::string_view to_string(Family family) noexcept;
std::optional<Family> parse_family(std::string_view name) noexcept;

/// Number of free parameters (fock-mixture has two, its weights sum to one).
int parameter_count(Family family) noexcept;

/// Throws Error{InvalidParameter} when a parameter is outside its range.
void validate(const StateModel& model);

/// Family pmf on 0..n_max renormalized over the support, with the mass the
/// untruncated family places beyond n_max. Never checks the tail.
struct ModelPmf {
  std::vector<double> probs;
  double tail_mass = 0.0;
};
ModelPmf evaluate_model(const StateModel& model, std::size_t n_max);

struct TruncatedDistribution {
  PhotonDistribution distribution;
  double tail_mass;
};

inline constexpr double kMaxTailMass = 1e-4;

/// Validated model pmf; throws TruncationTooSmall if the tail exceeds
/// kMaxTailMass and InvalidParameter for bad parameters or n_max < 1.
TruncatedDistribution make_distribution(const StateModel& model,
                                        std::size_t n_max);

/// Smallest n_max >= 1 whose tail mass is at most `tail_tolerance`.
std::size_t support_bound(const StateModel& model, double tail_tolerance);

/// Sum over n of sqrt(a_n b_n); the shorter operand is zero-padded.
double fidelity(std::span<const double> a, std::span<const double> b) noexcept;
double fidelity(const PhotonDistribution& a, const PhotonDistribution& b) noexcept;

struct Moments {
  double mean;
  double variance;
};
Moments moments(const PhotonDistribution& d) noexcept;

}  // namespace photostat
