// Copyright (c) 2026 The qreson authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "qreson/level_shift.hpp"

namespace qreson {

/// Deterministic splitmix64 stream with a portable uniform mapping, so
/// seeded runs reproduce bit-identically across standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  double uniform(double lo, double hi) {
    const double u =
        static_cast<double>(next() >> 11) * 0x1.0p-53;  // [0, 1)
    return lo + (hi - lo) * u;
  }

 private:
  std::uint64_t state_;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
};

inline LinearFit fit_line(const std::vector<double>& x,
                          const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidInputError("linear fit needs at least two points");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LinearFit fit;
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0.0, ss_tot = 0.0;
  const double mean_y = sy / n;
  for (size_t i = 0; i < x.size(); ++i) {
    const double model = fit.slope * x[i] + fit.intercept;
    ss_res += (y[i] - model) * (y[i] - model);
    ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

struct SweepOptions {
  int n_min = 1;
  int n_max = 6;
  int instances = 10;
  double b_min = 0.5;
  double b_max = 1.5;
  std::uint64_t seed = 1;
};

struct SweepPoint {
  int n = 0;
  double max_gamma_dephasing = 0.0;  // lambda2 = 0 channel, deterministic
  double expected_dephasing = 0.0;   // lambda1^2 (pi/2beta) gamma_+ (2N)^2
  double max_gamma_exchange = 0.0;   // lambda1 = 0 channel, instance mean
  double exchange_bound = 0.0;       // lambda2^2 N max_j 2pi B^2 G2(2B) coth
  double e0_rate = 0.0;              // lambda2^2 y0, instance mean
};

struct HammingPoint {
  int distance = 0;
  double mean_y2 = 0.0;
};

struct ScalingReport {
  std::uint64_t seed = 0;
  std::vector<SweepPoint> points;
  LinearFit dephasing_loglog;
  LinearFit exchange_loglog;
  LinearFit e0_loglog;
  std::vector<HammingPoint> hamming;
  LinearFit hamming_fit;
};

namespace detail {

inline Eigen::VectorXd sample_generic_fields(int n, const SweepOptions& opt,
                                             SplitMix64& rng,
                                             const RegisterParams& base) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Eigen::VectorXd b(n);
    for (int j = 0; j < n; ++j) b[j] = rng.uniform(opt.b_min, opt.b_max);
    RegisterParams trial = base;
    trial.n = n;
    trial.j_matrix = Eigen::MatrixXd::Zero(n, n);
    trial.b_fields = b;
    if (build_spectral_table(trial).generic) return b;
  }
  throw GenericnessError("failed to sample a generic magnetic field");
}

}  // namespace detail

/// N-scaling sweep of the two coupling channels over random generic fields:
/// the dephasing channel follows its exact (2N)^2 law, the exchange channel
/// is bounded linearly in N, and the group-averaged exchange coefficient is
/// regressed against the Hamming distance at the largest register size.
inline ScalingReport scaling_sweep(const RegisterParams& base,
                                   const SweepOptions& opt) {
  if (opt.n_min < 1 || opt.n_max < opt.n_min) {
    throw InvalidInputError("invalid register size range");
  }
  if (opt.instances < 1) throw InvalidInputError("instances must be >= 1");

  SplitMix64 rng(opt.seed);
  ScalingReport report;
  report.seed = opt.seed;

  const double l1sq = base.lambda1 * base.lambda1;
  const double l2sq = base.lambda2 * base.lambda2;

  std::map<int, std::pair<double, int>> hamming_acc;  // D -> (sum, count)

  for (int n = opt.n_min; n <= opt.n_max; ++n) {
    SweepPoint point;
    point.n = n;
    double sum_exchange = 0.0, sum_e0 = 0.0, sum_bound = 0.0;
    double sum_dephasing = 0.0;

    for (int inst = 0; inst < opt.instances; ++inst) {
      RegisterParams params = base;
      params.n = n;
      params.j_matrix = Eigen::MatrixXd::Zero(n, n);
      params.b_fields = detail::sample_generic_fields(n, opt, rng, base);

      const SpectralTable table = build_spectral_table(params);
      const CouplingScalars scalars = CouplingScalars::from_params(params);

      double max_deph = 0.0, max_exch = 0.0, bound_f = 0.0;
      std::map<int, std::pair<double, int>> instance_hamming;
      double y0 = 0.0;
      for (const EnergyGroup& group : table.groups) {
        const RateCoefficients rc = rate_coefficients(group, params, scalars);
        y0 = rc.y0;
        if (group.hamming > 0) {
          max_deph = std::max(max_deph, l1sq * rc.y1);
          max_exch = std::max(max_exch, l2sq * rc.y2);
          auto& acc = instance_hamming[group.hamming];
          acc.first += rc.y2;
          acc.second += 1;
        }
      }
      for (int j = 0; j < n; ++j) {
        bound_f = std::max(
            bound_f, 2.0 * kPi * detail::flip_rate_coefficient(
                                     scalars, params.b_fields[j]));
      }
      sum_dephasing += max_deph;
      sum_exchange += max_exch;
      sum_e0 += l2sq * y0;
      sum_bound += l2sq * n * bound_f;

      if (n == opt.n_max) {
        for (const auto& [dist, acc] : instance_hamming) {
          auto& total = hamming_acc[dist];
          total.first += acc.first / acc.second;
          total.second += 1;
        }
      }
    }
    point.max_gamma_dephasing = sum_dephasing / opt.instances;
    point.expected_dephasing = l1sq * kPi *
                               CouplingScalars::from_params(base).gamma_plus1() *
                               (2.0 * n) * (2.0 * n) / (2.0 * base.beta);
    point.max_gamma_exchange = sum_exchange / opt.instances;
    point.exchange_bound = sum_bound / opt.instances;
    point.e0_rate = sum_e0 / opt.instances;
    report.points.push_back(point);
  }

  auto loglog = [&](auto getter) {
    std::vector<double> xs, ys;
    for (const SweepPoint& p : report.points) {
      const double value = getter(p);
      if (value > 0.0) {
        xs.push_back(std::log(static_cast<double>(p.n)));
        ys.push_back(std::log(value));
      }
    }
    return xs.size() >= 2 ? fit_line(xs, ys) : LinearFit{};
  };
  report.dephasing_loglog =
      loglog([](const SweepPoint& p) { return p.max_gamma_dephasing; });
  report.exchange_loglog =
      loglog([](const SweepPoint& p) { return p.max_gamma_exchange; });
  report.e0_loglog = loglog([](const SweepPoint& p) { return p.e0_rate; });

  std::vector<double> dx, dy;
  for (const auto& [dist, acc] : hamming_acc) {
    HammingPoint hp;
    hp.distance = dist;
    hp.mean_y2 = acc.first / acc.second;
    report.hamming.push_back(hp);
    dx.push_back(static_cast<double>(dist));
    dy.push_back(hp.mean_y2);
  }
  if (dx.size() >= 2) report.hamming_fit = fit_line(dx, dy);
  return report;
}

}  // namespace qreson
