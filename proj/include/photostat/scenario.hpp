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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "photostat/detector.hpp"
#include "photostat/distribution.hpp"
#include "photostat/em.hpp"
#include "photostat/fitting.hpp"

namespace photostat {

/// One reconstruction experiment. Simulation mode draws a scan from `truth`;
/// ingestion mode reads `data_path` and ignores `etas`, `runs_per_eta` and
/// `seed`.
struct Scenario {
  std::string name;
  std::string description;
  std::optional<StateModel> truth;
  std::optional<std::filesystem::path> data_path;
  EtaGrid etas;
  std::uint64_t runs_per_eta = 10000;
  EmConfig em;
  std::vector<Family> fit_families;
  std::uint64_t seed = 1;

  bool simulated() const noexcept { return truth.has_value(); }

  /// Throws Error{InvalidParameter}.
  void validate() const;
};

/// Built-in presets mirroring the five published measurements.
const std::vector<Scenario>& presets();
std::optional<Scenario> find_preset(std::string_view name);

enum class ScenarioMode { Simulation, Ingestion };

struct ReconstructionReport {
  Scenario scenario;
  EfficiencyScan scan;
  EmState em;
  ModelRanking fits;
  /// Truth pmf truncated where its tail drops below 1e-12 (simulation only).
  std::optional<PhotonDistribution> truth;
  std::optional<double> fidelity_to_truth;

  const PhotonDistribution& final() const noexcept { return em.current; }
  std::size_t iteration_stopped() const noexcept { return em.iteration; }
  StopCause stop_cause() const noexcept { return *em.stop_cause; }
  double epsilon_final() const noexcept { return em.epsilon_history.back(); }
  ScenarioMode mode() const noexcept {
    return scenario.simulated() ? ScenarioMode::Simulation : ScenarioMode::Ingestion;
  }
};

/// Scan drawn from the scenario's truth model (simulation mode only).
EfficiencyScan simulate_scenario(const Scenario& scenario);

/// Simulation or ingestion, then EM and model selection. Deterministic for a
/// given scenario. Module errors are rethrown with the scenario name prefixed.
ReconstructionReport run_scenario(const Scenario& scenario);

/// The pipeline after the scan is in hand.
ReconstructionReport reconstruct(const Scenario& scenario, EfficiencyScan scan);

}  // namespace photostat
