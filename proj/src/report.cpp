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

#include "photostat/report.hpp"

#include <fstream>

#include <json.hpp>

#include "photostat/error.hpp"
#include "photostat/scan_io.hpp"

namespace photostat {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kModelTail = 1e-12;

Json model_json(const StateModel& model) {
  Json j;
  j["family"] = std::string(to_string(family_of(model)));
  std::visit(
      [&j](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Coherent>) {
          j["mean"] = m.mean;
        } else if constexpr (std::is_same_v<T, FockMixture>) {
          j["weights"] = m.weights;
        } else if constexpr (std::is_same_v<T, GaussianPulsed>) {
          j["mean"] = m.mean;
          j["excess_variance"] = m.excess_variance;
        } else if constexpr (std::is_same_v<T, Thermal>) {
          j["mean"] = m.mean;
        } else {
          j["mean"] = m.mean;
          j["modes"] = m.modes;
        }
      },
      model);
  return j;
}

Json fits_json(const ModelRanking& ranking) {
  Json fits = Json::array();
  for (const FitResult& r : ranking.ranked) {
    Json j;
    j["model"] = model_json(r.model);
    j["fidelity"] = r.fidelity;
    j["residual_l1"] = r.residual_l1;
    j["diagnostics"] = Json::object();
    for (const auto& [k, v] : r.diagnostics) j["diagnostics"][k] = v;
    fits.push_back(std::move(j));
  }
  return fits;
}

std::vector<std::string> family_names(const std::vector<Family>& families) {
  std::vector<std::string> out;
  for (Family f : families) out.emplace_back(to_string(f));
  return out;
}

std::string_view to_string(StopCause cause) {
  return cause == StopCause::Epsilon ? "epsilon" : "max-iterations";
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

}  // namespace

std::string serialize_fits(const ModelRanking& ranking) {
  Json j;
  j["fits"] = fits_json(ranking);
  Json excluded = Json::array();
  for (const auto& [family, why] : ranking.excluded) {
    excluded.push_back({{"family", std::string(to_string(family))}, {"reason", why}});
  }
  j["excluded"] = std::move(excluded);
  return j.dump(2) + "\n";
}

std::string serialize_report(const ReconstructionReport& report) {
  const Scenario& s = report.scenario;
  Json j;
  j["format"] = "photostat-report/1";

  Json sc;
  sc["name"] = s.name;
  sc["mode"] = report.mode() == ScenarioMode::Simulation ? "simulation" : "ingestion";
  if (s.simulated()) {
    sc["truth"] = model_json(*s.truth);
    sc["etas"] = {{"count", s.etas.count}, {"min", s.etas.min}, {"max", s.etas.max}, {"spacing", "linear"}};
    sc["runs_per_eta"] = s.runs_per_eta;
    sc["seed"] = s.seed;
  } else {
    sc["data_path"] = s.data_path->generic_string();
  }
  sc["em"] = {{"n_max", s.em.n_max},
              {"epsilon_target", s.em.epsilon_target},
              {"max_iterations", s.em.max_iterations},
              {"record_every", s.em.record_every},
              {"init", s.em.init ? "custom" : "uniform"},
              {"backend", std::string(kernels::to_string(report.em.problem->kernels().backend))}};
  sc["fit_families"] = family_names(s.fit_families);
  j["scenario"] = std::move(sc);

  Json scan = Json::array();
  for (const ScanPoint& p : report.scan.points()) {
    scan.push_back({{"eta", p.eta}, {"n0", p.n0}, {"n_total", p.n_total}, {"frequency", p.frequency()}});
  }
  j["scan"] = std::move(scan);

  const PhotonDistribution& fin = report.final();
  Json rec;
  rec["n_max"] = fin.n_max();
  rec["iteration_stopped"] = report.iteration_stopped();
  rec["stop_cause"] = std::string(to_string(report.stop_cause()));
  rec["epsilon_final"] = report.epsilon_final();
  rec["loglik_final"] = report.em.loglik_history.back();
  rec["probabilities"] = std::vector<double>(fin.probs().begin(), fin.probs().end());
  const Moments m = moments(fin);
  rec["mean"] = m.mean;
  rec["variance"] = m.variance;
  j["reconstruction"] = std::move(rec);

  j["history"] = {{"iterations", report.em.recorded_iterations},
                  {"epsilon", report.em.epsilon_history},
                  {"loglik", report.em.loglik_history}};

  j["fits"] = fits_json(report.fits);
  Json excluded = Json::array();
  for (const auto& [family, why] : report.fits.excluded) {
    excluded.push_back({{"family", std::string(to_string(family))}, {"reason", why}});
  }
  j["excluded_fits"] = std::move(excluded);
  j["fidelity_to_truth"] = report.fidelity_to_truth ? Json(*report.fidelity_to_truth) : Json(nullptr);
  return j.dump(2) + "\n";
}

void write_report(const ReconstructionReport& report, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << serialize_report(report);
  finish(out, path);
}

PlotFiles emit_plot_data(const ReconstructionReport& report, const std::filesystem::path& prefix) {
  PlotFiles files{prefix.string() + "_distribution.csv", prefix.string() + "_scan.csv"};
  const PhotonDistribution& recon = report.final();
  const StateModel* best = report.fits.ranked.empty() ? nullptr : &report.fits.ranked.front().model;

  std::vector<double> fit_pmf;
  if (best) fit_pmf = evaluate_model(*best, recon.n_max()).probs;
  std::size_t rows = recon.size();
  if (report.truth) rows = std::max(rows, report.truth->size());

  {
    std::ofstream out = open_output(files.distribution);
    out << "# n,reconstructed,best_fit" << (report.truth ? ",truth" : "") << '\n';
    for (std::size_t n = 0; n < rows; ++n) {
      out << n << ',' << format_double(recon[n]) << ','
          << format_double(n < fit_pmf.size() ? fit_pmf[n] : 0.0);
      if (report.truth) out << ',' << format_double((*report.truth)[n]);
      out << '\n';
    }
    finish(out, files.distribution);
  }

  std::optional<PhotonDistribution> fit_full;
  if (best) {
    fit_full = PhotonDistribution(
        evaluate_model(*best, std::max(support_bound(*best, kModelTail), std::size_t{1})).probs);
  }
  const std::vector<double> p_recon = model_probabilities(report.em);
  {
    std::ofstream out = open_output(files.scan);
    out << "# eta,observed_f,best_fit_p,reconstructed_p\n";
    const auto points = report.scan.points();
    for (std::size_t v = 0; v < points.size(); ++v) {
      out << format_double(points[v].eta) << ',' << format_double(points[v].frequency()) << ','
          << format_double(fit_full ? no_click_probability(*fit_full, points[v].eta) : 0.0) << ','
          << format_double(p_recon[v]) << '\n';
    }
    finish(out, files.scan);
  }
  return files;
}

}  // namespace photostat
