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

#include "photostat/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "photostat/error.hpp"

namespace photostat {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kGolden = 0.6180339887498949;
// Golden-section stops once the bracket is this small relative to |x|.
constexpr double kRelativeTolerance = 1e-7;

struct Axis {
  double lo;
  double hi;
  bool logarithmic;

  double to_u(double x) const { return logarithmic ? std::log(x) : x; }
  double from_u(double u) const { return std::clamp(logarithmic ? std::exp(u) : u, lo, hi); }

  std::vector<double> grid(std::size_t points) const {
    const double a = to_u(lo);
    const double b = to_u(hi);
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) {
      g[i] = from_u(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    return g;
  }

  double step(std::size_t points) const {
    return (to_u(hi) - to_u(lo)) / static_cast<double>(points - 1);
  }
};

struct Best {
  double x;
  double value;
};

// Maximizes f over [x - half_width, x + half_width] (in axis units, clipped
// to the axis). Returns the best point seen, never worse than `start`.
Best golden_max(const std::function<double(double)>& f, const Axis& axis, Best start,
                double half_width) {
  double a = std::max(axis.to_u(start.x) - half_width, axis.to_u(axis.lo));
  double b = std::min(axis.to_u(start.x) + half_width, axis.to_u(axis.hi));
  Best best = start;
  auto eval = [&](double u) {
    const double x = axis.from_u(u);
    const double v = f(x);
    if (v > best.value) best = {x, v};
    return v;
  };
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  for (int i = 0; i < 200; ++i) {
    const double scale = axis.logarithmic ? 1.0 : std::max(std::abs(axis.from_u(0.5 * (a + b))), 1e-3);
    if (b - a <= kRelativeTolerance * scale) break;
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = eval(d);
    }
  }
  return best;
}

class Objective {
 public:
  explicit Objective(const PhotonDistribution& recon) : recon_(recon) {}

  double operator()(const StateModel& model) const {
    return fidelity(recon_.probs(), evaluate_model(model, recon_.n_max()).probs);
  }

 private:
  const PhotonDistribution& recon_;
};

Axis mean_axis(const FitBounds& bounds, const PhotonDistribution& recon, double floor) {
  Interval iv = bounds.mean.value_or(
      Interval{1e-4, std::max(1.0, static_cast<double>(recon.n_max()))});
  if (!(iv.lo >= floor && iv.hi > iv.lo) || !std::isfinite(iv.hi)) {
    throw Error(ErrorKind::InvalidParameter, "fit bounds: mean interval is empty or out of range");
  }
  return Axis{iv.lo, iv.hi, iv.lo > 0.0};
}

// One continuous parameter: grid, then golden refinement around the best cell.
Best fit_1d(const std::function<double(double)>& f, const Axis& axis, std::size_t points) {
  Best best{axis.lo, kNegInf};
  for (double x : axis.grid(points)) {
    const double v = f(x);
    if (v > best.value) best = {x, v};
  }
  return golden_max(f, axis, best, axis.step(points));
}

FitResult fit_fock_mixture(const PhotonDistribution& recon, const FitBounds& bounds) {
  if (!(bounds.simplex_pitch > 0.0 && bounds.simplex_pitch <= 0.5)) {
    throw Error(ErrorKind::InvalidParameter, "fit bounds: simplex pitch must lie in (0, 0.5]");
  }
  const std::size_t kept = std::min<std::size_t>(3, recon.size());
  const std::array<double, 3> r{recon[0], recon[1], recon[2]};
  auto score = [&](double w0, double w1) {
    const std::array<double, 3> w{w0, w1, std::max(0.0, 1.0 - w0 - w1)};
    double overlap = 0.0;
    double mass = 0.0;
    for (std::size_t n = 0; n < kept; ++n) {
      overlap += std::sqrt(r[n] * w[n]);
      mass += w[n];
    }
    return mass > 0.0 ? overlap / std::sqrt(mass) : kNegInf;
  };

  // Simplex grid at the requested pitch, then zoom by 20x per level.
  double pitch = bounds.simplex_pitch;
  const auto steps = static_cast<long>(std::llround(1.0 / pitch));
  double b0 = 1.0, b1 = 0.0, bv = kNegInf;
  for (long i = 0; i <= steps; ++i) {
    for (long j = 0; i + j <= steps; ++j) {
      const double w0 = static_cast<double>(i) / static_cast<double>(steps);
      const double w1 = static_cast<double>(j) / static_cast<double>(steps);
      const double v = score(w0, w1);
      if (v > bv) b0 = w0, b1 = w1, bv = v;
    }
  }
  while (pitch > 1e-10) {
    const double c0 = b0, c1 = b1;
    const double fine = pitch / 20.0;
    for (int i = -20; i <= 20; ++i) {
      for (int j = -20; j <= 20; ++j) {
        const double w0 = c0 + fine * i;
        const double w1 = c1 + fine * j;
        if (w0 < 0.0 || w1 < 0.0 || w0 + w1 > 1.0) continue;
        const double v = score(w0, w1);
        if (v > bv) b0 = w0, b1 = w1, bv = v;
      }
    }
    pitch = fine;
  }
  FitResult out;
  out.model = FockMixture{{b0, b1, std::max(0.0, 1.0 - b0 - b1)}};
  return out;
}

FitResult fit_continuous(const PhotonDistribution& recon, Family family,
                         const FitBounds& bounds) {
  const Objective objective(recon);
  const std::size_t points = std::max<std::size_t>(bounds.grid_points, 3);
  FitResult out;

  switch (family) {
    case Family::Coherent: {
      const Axis axis = mean_axis(bounds, recon, 0.0);
      auto f = [&](double m) { return objective(Coherent{m}); };
      out.model = Coherent{fit_1d(f, axis, points).x};
      break;
    }
    case Family::Thermal: {
      const Axis axis = mean_axis(bounds, recon, std::numeric_limits<double>::min());
      auto f = [&](double m) { return objective(Thermal{m}); };
      out.model = Thermal{fit_1d(f, axis, points).x};
      break;
    }
    case Family::Multithermal: {
      const Axis axis = mean_axis(bounds, recon, std::numeric_limits<double>::min());
      if (bounds.min_modes < 1 || bounds.max_modes < bounds.min_modes) {
        throw Error(ErrorKind::InvalidParameter, "fit bounds: mode range is empty");
      }
      Best best{axis.lo, kNegInf};
      int best_modes = bounds.min_modes;
      for (int mu = bounds.min_modes; mu <= bounds.max_modes; ++mu) {
        auto f = [&](double m) { return objective(Multithermal{m, mu}); };
        const Best b = fit_1d(f, axis, points);
        if (b.value > best.value) best = b, best_modes = mu;
      }
      out.model = Multithermal{best.x, best_modes};
      break;
    }
    case Family::GaussianPulsed: {
      const Axis mean = mean_axis(bounds, recon, std::numeric_limits<double>::min());
      const Interval ev = bounds.excess_variance.value_or(
          Interval{0.0, std::max(1.0, static_cast<double>(recon.n_max()))});
      if (!(ev.hi > ev.lo) || !std::isfinite(ev.lo) || !std::isfinite(ev.hi)) {
        throw Error(ErrorKind::InvalidParameter, "fit bounds: excess-variance interval is empty");
      }
      const Axis excess{ev.lo, ev.hi, false};
      auto f = [&](double m, double s2) {
        return m + s2 > 0.0 ? objective(GaussianPulsed{m, s2}) : kNegInf;
      };
      double bm = mean.lo, bs = excess.lo, bv = kNegInf;
      for (double m : mean.grid(points)) {
        for (double s2 : excess.grid(points)) {
          const double v = f(m, s2);
          if (v > bv) bm = m, bs = s2, bv = v;
        }
      }
      for (int sweep = 0; sweep < 200; ++sweep) {
        const double before = bv;
        Best b = golden_max([&](double m) { return f(m, bs); }, mean, {bm, bv}, mean.step(points));
        bm = b.x, bv = b.value;
        b = golden_max([&](double s2) { return f(bm, s2); }, excess, {bs, bv}, excess.step(points));
        bs = b.x, bv = b.value;
        if (bv - before <= 1e-15) break;
      }
      out.model = GaussianPulsed{bm, bs};
      out.diagnostics["sigma2_over_N"] = bs / bm;
      break;
    }
    case Family::FockMixture:
      break;
  }
  return out;
}

}  // namespace

FitResult fit_model(const PhotonDistribution& recon, Family family, const FitBounds& bounds) {
  FitResult out;
  const bool needs_mean = family == Family::Thermal || family == Family::Multithermal;
  if (needs_mean && recon[0] >= 1.0 - 1e-12) {
    // All mass at n = 0 leaves N unidentifiable: pin to the lower bound.
    const Axis axis = mean_axis(bounds, recon, std::numeric_limits<double>::min());
    if (family == Family::Thermal) {
      out.model = Thermal{axis.lo};
    } else {
      out.model = Multithermal{axis.lo, bounds.min_modes};
    }
    out.diagnostics["boundary"] = 1.0;
  } else if (family == Family::FockMixture) {
    out = fit_fock_mixture(recon, bounds);
  } else {
    out = fit_continuous(recon, family, bounds);
  }

  const std::vector<double> model = evaluate_model(out.model, recon.n_max()).probs;
  out.fidelity = fidelity(recon.probs(), model);
  out.residual_l1 = 0.0;
  for (std::size_t n = 0; n < recon.size(); ++n) out.residual_l1 += std::abs(recon[n] - model[n]);
  return out;
}

ModelRanking model_selection(const PhotonDistribution& recon,
                             std::span<const Family> families, const FitBounds& bounds) {
  if (families.size() < 2) {
    throw Error(ErrorKind::InvalidParameter, "model selection needs at least two families");
  }
  ModelRanking ranking;
  for (Family family : families) {
    try {
      ranking.ranked.push_back(fit_model(recon, family, bounds));
    } catch (const Error& e) {
      ranking.excluded.emplace_back(family, e.what());
    }
  }
  auto key = [](const FitResult& r) {
    const Family f = family_of(r.model);
    return std::tuple(-std::llround(r.fidelity * 1e9), parameter_count(f), static_cast<int>(f));
  };
  std::stable_sort(ranking.ranked.begin(), ranking.ranked.end(),
                   [&](const FitResult& a, const FitResult& b) { return key(a) < key(b); });
  return ranking;
}

}  // namespace photostat
