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

#include <filesystem>
#include <string>

#include "photostat/fitting.hpp"
#include "photostat/scenario.hpp"

namespace photostat {

/// JSON document (keys in fixed order, shortest round-trip numbers), so equal
/// reports serialize to identical bytes. Field reference: docs/formats.md.
std::string serialize_report(const ReconstructionReport& report);
void write_report(const ReconstructionReport& report, const std::filesystem::path& path);

/// JSON array of fit results in ranking order.
std::string serialize_fits(const ModelRanking& ranking);

struct PlotFiles {
  std::filesystem::path distribution;
  std::filesystem::path scan;
};

/// Writes <prefix>_distribution.csv (n, reconstructed, best_fit[, truth])
/// and <prefix>_scan.csv (eta, observed_f, best_fit_p, reconstructed_p).
/// best_fit_p uses the best-ranked model without truncation.
PlotFiles emit_plot_data(const ReconstructionReport& report, const std::filesystem::path& prefix);

}  // namespace photostat
