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

// photostat: photon-number distributions from on/off detection at several
// quantum efficiencies.
//
// Exit status: 0 success, 1 validation error, 2 numerical failure,
// 3 I/O error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "photostat/error.hpp"
#include "photostat/report.hpp"
#include "photostat/scan_io.hpp"
#include "photostat/scenario.hpp"

namespace fs = std::filesystem;
using namespace photostat;

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kNumerical = 2, kIo = 3 };

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonFinite:
    case ErrorKind::ZeroProbabilityDivision:
      return kNumerical;
    case ErrorKind::Io:
      return kIo;
    default:
      return kValidation;
  }
}

struct Overrides {
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> runs;
  std::optional<std::size_t> n_max;
  std::optional<std::size_t> max_iterations;
  std::optional<double> epsilon;
  std::optional<std::size_t> record_every;
  std::vector<std::string> families;
  std::string backend = "auto";
  std::string init;
};

void add_em_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--n-max", o.n_max, "Truncation bound of the reconstruction");
  cmd->add_option("--max-iterations", o.max_iterations, "EM iteration cap");
  cmd->add_option("--epsilon", o.epsilon, "Stop once the total absolute error drops below this");
  cmd->add_option("--record-every", o.record_every, "History decimation");
  cmd->add_option("--families", o.families, "Model families to fit")->delimiter(',');
  cmd->add_option("--backend", o.backend, "Kernel backend: auto, scalar, avx2, neon");
  cmd->add_option("--init", o.init, "Starting distribution file (n,probability); uniform if absent");
}

std::vector<Family> parse_families(const std::vector<std::string>& names) {
  std::vector<Family> out;
  for (const std::string& n : names) {
    const auto f = parse_family(n);
    if (!f) throw Error(ErrorKind::InvalidParameter, "unknown model family '" + n + "'");
    out.push_back(*f);
  }
  return out;
}

Scenario base_scenario(const Overrides& o) {
  Scenario s;
  if (!o.preset.empty()) {
    auto p = find_preset(o.preset);
    if (!p) throw Error(ErrorKind::InvalidParameter, "unknown preset '" + o.preset + "'");
    s = *p;
  } else {
    s.name = "custom";
    s.fit_families.assign(kAllFamilies.begin(), kAllFamilies.end());
  }
  if (o.seed) s.seed = *o.seed;
  if (o.runs) s.runs_per_eta = *o.runs;
  if (o.n_max) s.em.n_max = *o.n_max;
  if (o.max_iterations) {
    s.em.max_iterations = *o.max_iterations;
    s.em.record_every = std::max<std::size_t>(1, *o.max_iterations / 1000);
  }
  if (o.epsilon) s.em.epsilon_target = *o.epsilon;
  if (o.record_every) s.em.record_every = *o.record_every;
  if (!o.families.empty()) s.fit_families = parse_families(o.families);
  const auto backend = kernels::parse_backend(o.backend);
  if (!backend) throw Error(ErrorKind::InvalidParameter, "unknown backend '" + o.backend + "'");
  s.em.backend = *backend;
  if (!o.init.empty()) s.em.init = import_distribution(o.init);
  return s;
}

void write_outputs(const ReconstructionReport& report, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create '" + dir.string() + "': " + ec.message());
  export_scan(report.scan, dir / "scan.csv");
  write_report(report, dir / "report.json");
  emit_plot_data(report, dir / "plot");
}

void print_summary(const ReconstructionReport& r) {
  std::cout << "scenario        " << r.scenario.name << '\n'
            << "iterations      " << r.iteration_stopped() << " ("
            << (r.stop_cause() == StopCause::Epsilon ? "epsilon reached" : "iteration cap") << ")\n"
            << "epsilon         " << format_double(r.epsilon_final()) << '\n';
  if (r.fidelity_to_truth) std::cout << "fidelity/truth  " << format_double(*r.fidelity_to_truth) << '\n';
  if (!r.fits.ranked.empty()) {
    const FitResult& best = r.fits.ranked.front();
    std::cout << "best fit        " << to_string(family_of(best.model)) << " G="
              << format_double(best.fidelity) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon-number statistics from on/off detection"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a TOML/INI file");

  Overrides o;
  std::string out_path;
  std::string input_path;

  auto* presets_cmd = app.add_subcommand("presets", "List built-in scenarios");

  auto* simulate = app.add_subcommand("simulate", "Simulate an efficiency scan to a file");
  simulate->add_option("--preset", o.preset, "Scenario preset")->required();
  simulate->add_option("--seed", o.seed, "Random seed");
  simulate->add_option("--runs", o.runs, "Runs per efficiency value");
  simulate->add_option("--out", out_path, "Scan file to write")->required();

  auto* recon = app.add_subcommand("reconstruct", "Reconstruct from a scan file");
  recon->add_option("--scan", input_path, "Scan file")->required();
  recon->add_option("--preset", o.preset, "Take EM and fit settings from a preset");
  recon->add_option("--out", out_path, "Output directory")->required();
  add_em_flags(recon, o);

  auto* fit = app.add_subcommand("fit", "Fit model families to a distribution file");
  fit->add_option("--dist", input_path, "Distribution file (n,probability)")->required();
  fit->add_option("--families", o.families, "Model families to fit")->delimiter(',');
  fit->add_option("--out", out_path, "Write JSON here instead of stdout");

  auto* run = app.add_subcommand("run", "Simulate, reconstruct and fit a preset");
  run->add_option("--preset", o.preset, "Scenario preset")->required();
  run->add_option("--seed", o.seed, "Random seed");
  run->add_option("--runs", o.runs, "Runs per efficiency value");
  run->add_option("--out", out_path, "Output directory")->required();
  add_em_flags(run, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  }

  try {
    if (presets_cmd->parsed()) {
      for (const Scenario& s : presets()) {
        std::cout << s.name << "\t" << s.description << " (K=" << s.etas.count << ", eta "
                  << format_double(s.etas.min) << ".." << format_double(s.etas.max)
                  << ", runs=" << s.runs_per_eta << ", n_max=" << s.em.n_max
                  << ", iterations<=" << s.em.max_iterations << ")\n";
      }
    } else if (simulate->parsed()) {
      const EfficiencyScan scan = simulate_scenario(base_scenario(o));
      export_scan(scan, out_path);
      std::cout << "wrote " << scan.size() << " scan points to " << out_path << '\n';
    } else if (recon->parsed()) {
      Scenario s = base_scenario(o);
      s.name = o.preset.empty() ? fs::path(input_path).stem().string() : s.name;
      s.truth.reset();
      s.data_path = input_path;
      const ReconstructionReport report = run_scenario(s);
      write_outputs(report, out_path);
      print_summary(report);
    } else if (fit->parsed()) {
      const PhotonDistribution d = import_distribution(input_path);
      std::vector<Family> families = o.families.empty()
          ? std::vector<Family>(kAllFamilies.begin(), kAllFamilies.end())
          : parse_families(o.families);
      ModelRanking ranking;
      if (families.size() >= 2) {
        ranking = model_selection(d, families);
      } else {
        ranking.ranked.push_back(fit_model(d, families.front()));
      }
      const std::string text = serialize_fits(ranking);
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream f(out_path);
        if (!(f << text)) throw Error(ErrorKind::Io, "cannot write '" + out_path + "'");
      }
    } else if (run->parsed()) {
      const ReconstructionReport report = run_scenario(base_scenario(o));
      write_outputs(report, out_path);
      print_summary(report);
    }
  } catch (const Error& e) {
    std::cerr << "photostat: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code(e.kind());
  }
  return kOk;
}
