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

#include "photostat/scenario.hpp"

#include <algorithm>

#include "photostat/error.hpp"
#include "photostat/scan_io.hpp"

namespace photostat {

namespace {

constexpr double kTruthTail = 1e-12;

Scenario preset(std::string name, std::string description, StateModel truth, EtaGrid etas,
                std::uint64_t runs, std::size_t n_max, std::size_t max_iterations,
                double epsilon_target, std::vector<Family> families) {
  Scenario s;
  s.name = std::move(name);
  s.description = std::move(description);
  s.truth = truth;
  s.etas = etas;
  s.runs_per_eta = runs;
  s.em.n_max = n_max;
  s.em.max_iterations = max_iterations;
  s.em.epsilon_target = epsilon_target;
  s.em.record_every = std::max<std::size_t>(1, max_iterations / 1000);
  s.fit_families = std::move(families);
  return s;
}

std::vector<Scenario> build_presets() {
  using F = Family;
  // Heralded PDC photon: 2.7% vacuum, two-photon weight 1.85% of one-photon.
  const double one = (1.0 - 0.027) / 1.0185;
  const FockMixture heralded{{0.027, one, 0.0185 * one}};
  std::vector<Scenario> out;
  out.push_back(preset("fock-heralded", "cw heralded single photon from type-II PDC",
                       heralded, {34, 0.005, 0.20}, 1000000, 8, 20000000, 1e-5,
                       {F::FockMixture, F::Coherent, F::Thermal}));
  out.push_back(preset("coherent-cw", "attenuated He-Ne laser, |alpha|^2 = 0.02",
                       Coherent{0.02}, {15, 0.01, 0.66}, 1000000, 8, 1000000, 1e-4,
                       {F::Coherent, F::FockMixture, F::Thermal}));
  // Pulsed scans stop at 0.30, about the PMT photocathode efficiency.
  const std::vector<Family> pulsed{F::Coherent, F::GaussianPulsed, F::Thermal, F::Multithermal};
  out.push_back(preset("laser-pulse", "ps laser pulse, Gaussian N = 4.88, sigma^2 = 0.63",
                       GaussianPulsed{4.88, 0.63}, {37, 0.01, 0.30}, 10000, 30, 50000, 1e-4,
                       pulsed));
  out.push_back(preset("diffused-pulse", "pulse through moving ground glass, thermal N = 5.33",
                       Thermal{5.33}, {24, 0.01, 0.30}, 10000, 30, 400, 1e-4, pulsed));
  out.push_back(preset("pdc-multimode", "type-I PDC fluorescence, multithermal N = 6.17, mu = 5",
                       Multithermal{6.17, 5}, {18, 0.01, 0.30}, 10000, 30, 1500, 1e-4, pulsed));
  return out;
}

PhotonDistribution truth_distribution(const StateModel& model) {
  const std::size_t bound = std::max(support_bound(model, kTruthTail), std::size_t{1});
  return make_distribution(model, bound).distribution;
}

}  // namespace

void Scenario::validate() const {
  auto invalid = [this](const std::string& what) {
    throw Error(ErrorKind::InvalidParameter, "scenario '" + name + "': " + what);
  };
  if (truth.has_value() == data_path.has_value()) {
    invalid("exactly one of a truth model (simulation) or a data path (ingestion) is required");
  }
  if (truth) {
    photostat::validate(*truth);
    const std::vector<double> grid = etas.values();
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (!(grid[i] > grid[i - 1])) invalid("eta grid values are not distinct");
    }
    if (runs_per_eta == 0) invalid("runs_per_eta must be positive");
  }
  em.validate();
  if (fit_families.empty()) invalid("at least one fit family is required");
}

const std::vector<Scenario>& presets() {
  static const std::vector<Scenario> all = build_presets();
  return all;
}

std::optional<Scenario> find_preset(std::string_view name) {
  for (const Scenario& s : presets()) {
    if (s.name == name) return s;
  }
  return std::nullopt;
}

ReconstructionReport reconstruct(const Scenario& scenario, EfficiencyScan scan) {
  try {
    scenario.validate();
    EmState em = run_em(scan, scenario.em);

    ModelRanking fits;
    if (scenario.fit_families.size() >= 2) {
      fits = model_selection(em.current, scenario.fit_families);
    } else {
      fits.ranked.push_back(fit_model(em.current, scenario.fit_families.front()));
    }

    std::optional<PhotonDistribution> truth;
    std::optional<double> fid;
    if (scenario.truth) {
      truth = truth_distribution(*scenario.truth);
      fid = fidelity(em.current, *truth);
    }
    return ReconstructionReport{scenario, std::move(scan), std::move(em), std::move(fits),
                                std::move(truth), fid};
  } catch (const Error& e) {
    throw Error(e.kind(), "scenario '" + scenario.name + "': " + e.what());
  }
}

EfficiencyScan simulate_scenario(const Scenario& scenario) {
  try {
    scenario.validate();
    if (!scenario.truth) {
      throw Error(ErrorKind::InvalidParameter, "simulation needs a truth model");
    }
    const PhotonDistribution truth = truth_distribution(*scenario.truth);
    return simulate_scan(truth, scenario.etas.values(), scenario.runs_per_eta, scenario.seed);
  } catch (const Error& e) {
    throw Error(e.kind(), "scenario '" + scenario.name + "': " + e.what());
  }
}

ReconstructionReport run_scenario(const Scenario& scenario) {
  if (scenario.data_path && !scenario.truth) {
    EfficiencyScan scan = [&] {
      try {
        return import_scan(*scenario.data_path);
      } catch (const Error& e) {
        throw Error(e.kind(), "scenario '" + scenario.name + "': " + e.what());
      }
    }();
    return reconstruct(scenario, std::move(scan));
  }
  return reconstruct(scenario, simulate_scenario(scenario));
}

}  // namespace photostat
