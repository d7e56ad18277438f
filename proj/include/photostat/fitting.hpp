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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "photostat/distribution.hpp"

namespace photostat {

struct Interval {
  double lo;
  double hi;
};

/// Search ranges. Unset intervals are derived from the reconstruction's
/// truncation bound (see fit_model).
struct FitBounds {
  std::optional<Interval> mean;             // |alpha|^2 or N
  std::optional<Interval> excess_variance;  // sigma^2 of gaussian-pulsed
  int min_modes = 1;
  int max_modes = 32;
  std::size_t grid_points = 64;
  double simplex_pitch = 1e-3;
};

struct FitResult {
  StateModel model;
  double fidelity = 0.0;
  /// sum_n |recon_n - model_n| over the reconstruction support.
  double residual_l1 = 0.0;
  /// Named extras: "sigma2_over_N" for gaussian-pulsed, "boundary" = 1 when
  /// the reconstruction was degenerate and the fit was pinned to a bound.
  std::map<std::string, double> diagnostics;
};

/// Parameters maximizing fidelity between `recon` and the family, located by
/// a coarse grid then golden-section coordinate refinement (integer mode
/// count searched exhaustively). The model is evaluated on recon's support
/// and renormalized there.
FitResult fit_model(const PhotonDistribution& recon, Family family,
                    const FitBounds& bounds = {});

struct ModelRanking {
  std::vector<FitResult> ranked;
  /// Families whose fit failed, with the reason.
  std::vector<std::pair<Family, std::string>> excluded;
};

/// Fits each family and orders by fidelity (rounded to 1e-9), then by fewer
/// parameters, then by family. Needs at least two families.
ModelRanking model_selection(const PhotonDistribution& recon,
                             std::span<const Family> families,
                             const FitBounds& bounds = {});

}  // namespace photostat
