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
//
// End-to-end acceptance suite. Each numbered criterion prints exactly one
// PASS/FAIL line; the process exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "qreson/cli.hpp"
#include "qreson/dynamics.hpp"
#include "qreson/oracle.hpp"
#include "qreson/sweep.hpp"
#include "qreson/validate.hpp"

using namespace qreson;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void report(int index, const std::string& name, const Outcome& outcome,
            double seconds) {
  std::printf("[%2d] %-38s %s  (%.1f s; %s)\n", index, name.c_str(),
              outcome.pass ? "PASS" : "FAIL", seconds, outcome.detail.c_str());
  std::fflush(stdout);
  if (!outcome.pass) ++g_failures;
}

template <typename F>
void run(int index, const std::string& name, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = body();
  } catch (const std::exception& err) {
    outcome.pass = false;
    outcome.detail = std::string("exception: ") + err.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  report(index, name, outcome, seconds);
}

RegisterParams base_params(int n, double beta, double l1, double l2) {
  RegisterParams p;
  p.n = n;
  p.j_matrix = Eigen::MatrixXd::Zero(n, n);
  p.b_fields = Eigen::VectorXd::Constant(n, 1.0);
  p.beta = beta;
  p.lambda1 = l1;
  p.lambda2 = l2;
  p.form1 = FormFactor::make(-0.5, 1.0, 1.0);
  p.form2 = FormFactor::make(0.5, 1.0, 1.0);
  return p;
}

Eigen::VectorXd sample_generic_b(int n, SplitMix64& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    RegisterParams p = base_params(n, 1.0, 0.0, 0.0);
    for (int j = 0; j < n; ++j) p.b_fields[j] = rng.uniform(0.5, 1.5);
    if (build_spectral_table(p).generic) return p.b_fields;
  }
  throw GenericnessError("generic field sampling failed");
}

// Shared metrics from the core oracle sweep (criteria 1, 2, 3, 10).
struct CoreMetrics {
  double max_eig_dev = 0.0;
  double core_seconds = 0.0;
  int cases = 0;
  double min_im_delta = 0.0;
  double min_strict_z = std::numeric_limits<double>::infinity();
  bool strict_seen = false;
  double max_duality_dev = 0.0;
  double max_q_dev = 0.0;
  bool counts_ok = true;
};

CoreMetrics run_core_sweep() {
  const auto start = std::chrono::steady_clock::now();
  CoreMetrics metrics;
  SplitMix64 rng(20260810);
  const std::vector<std::pair<double, double>> couplings{
      {0.01, 0.0}, {0.0, 0.01}, {0.01, 0.01}};

  for (int n = 1; n <= 4; ++n) {
    for (int instance = 0; instance < 10; ++instance) {
      const Eigen::VectorXd b = sample_generic_b(n, rng);
      for (double beta : {0.5, 2.0}) {
        RegisterParams p = base_params(n, beta, 0.0, 0.0);
        p.b_fields = b;
        const CouplingScalars scalars = CouplingScalars::from_params(p);
        const SpectralTable table = build_spectral_table(p);

        // Structure counts are independent of the couplings.
        for (const EnergyGroup& group : table.groups) {
          metrics.counts_ok =
              metrics.counts_ok &&
              group.members.size() == (size_t{1} << group.n0);
        }
        metrics.counts_ok =
            metrics.counts_ok &&
            table.groups[static_cast<size_t>(table.group_index_of(0.0))]
                    .members.size() == (size_t{1} << n) &&
            table.groups.back().members.size() == 1;

        for (const auto& [l1, l2] : couplings) {
          p.lambda1 = l1;
          p.lambda2 = l2;
          ++metrics.cases;
          for (const EnergyGroup& group : table.groups) {
            const LevelShiftData closed = build_level_shift(group, p, scalars);
            const NumericLevelShift numeric =
                build_level_shift_numeric(group, p, scalars);
            const PairingResult pairing =
                pair_eigenvalues(closed.deltas, numeric.eigenvalues);
            metrics.max_eig_dev =
                std::max(metrics.max_eig_dev, pairing.max_distance);

            for (const Complex& delta : closed.deltas) {
              metrics.min_im_delta =
                  std::min(metrics.min_im_delta, delta.imag());
            }
            for (const SiteCoefficients& site : closed.sites) {
              if (site.a != 0.0 && site.b != 0.0) {
                metrics.strict_seen = true;
                metrics.min_strict_z =
                    std::min(metrics.min_strict_z,
                             std::min(site.z_plus.imag(), site.z_minus.imag()));
              }
            }

            const int d = closed.dim();
            for (int a = 0; a < d; ++a) {
              for (int bb = 0; bb < d; ++bb) {
                const Complex overlap = closed.etas[static_cast<size_t>(a)].dot(
                    closed.etas_dual[static_cast<size_t>(bb)]);
                metrics.max_duality_dev =
                    std::max(metrics.max_duality_dev,
                             std::abs(overlap - (a == bb ? 1.0 : 0.0)));
              }
            }
            Eigen::MatrixXcd q_sum = Eigen::MatrixXcd::Zero(d, d);
            for (const Eigen::MatrixXcd& q : closed.q_projections) {
              metrics.max_q_dev =
                  std::max(metrics.max_q_dev,
                           (q * q - q).cwiseAbs().maxCoeff());
              q_sum += q;
            }
            metrics.max_q_dev = std::max(
                metrics.max_q_dev,
                (q_sum - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff());
          }
        }
      }
    }
  }
  metrics.core_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return metrics;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

}  // namespace

int main() {
  const CoreMetrics core = run_core_sweep();

  run(1, "oracle equivalence (240 cases)", [&] {
    Outcome o;
    o.pass = core.max_eig_dev <= 1e-6 && core.core_seconds < 120.0 &&
             core.cases == 240;
    o.detail = "max |delta_closed - delta_numeric| = " + fmt(core.max_eig_dev) +
               ", " + std::to_string(core.cases) + " cases in " +
               fmt(core.core_seconds) + " s";
    return o;
  });

  run(2, "spectral positivity", [&] {
    Outcome o;
    o.pass = core.min_im_delta >= -1e-12 && core.strict_seen &&
             core.min_strict_z > 0.0;
    o.detail = "min Im delta = " + fmt(core.min_im_delta) +
               ", min strict Im z = " + fmt(core.min_strict_z);
    return o;
  });

  run(3, "duality and projection algebra", [&] {
    Outcome o;
    o.pass = core.max_duality_dev <= 1e-10 && core.max_q_dev <= 1e-10;
    o.detail = "duality dev = " + fmt(core.max_duality_dev) +
               ", projection dev = " + fmt(core.max_q_dev);
    return o;
  });

  run(4, "zero-coupling trajectory exactness", [&] {
    Outcome o;
    double worst = 0.0;
    for (int n = 2; n <= 4; ++n) {
      SplitMix64 rng(77 + static_cast<std::uint64_t>(n));
      RegisterParams p = base_params(n, 1.0, 0.0, 0.0);
      p.b_fields = sample_generic_b(n, rng);
      const SpectralTable table = build_spectral_table(p);
      const CouplingScalars scalars = CouplingScalars::from_params(p);
      const ResonanceModel model = build_resonance_model(table, p, scalars);
      const ReducedState rho0 = ReducedState::uniform_coherent(n);
      const std::vector<double> times{0.0, 0.3, 1.0, 2.7, 8.0, 20.0};
      const Trajectory traj = propagate_effective(rho0, model, times);
      const int dim = 1 << n;
      for (size_t ti = 0; ti < times.size(); ++ti) {
        for (int a = 0; a < dim; ++a) {
          for (int bb = 0; bb < dim; ++bb) {
            const SpinConfig sigma =
                SpinConfig::from_index(static_cast<std::uint32_t>(a), n);
            const SpinConfig tau =
                SpinConfig::from_index(static_cast<std::uint32_t>(bb), n);
            const Complex expected =
                std::exp(Complex(0.0, times[ti] * (energy(p, tau) -
                                                   energy(p, sigma)))) *
                rho0.rho(a, bb);
            worst = std::max(worst,
                             std::abs(traj.values[ti](a, bb) - expected));
          }
        }
      }
    }
    Outcome out;
    out.pass = worst <= 1e-12;
    out.detail = "max |assembled - free| = " + fmt(worst);
    return out;
  });

  run(5, "population conservation (dephasing only)", [&] {
    double worst = 0.0;
    for (int n = 2; n <= 4; ++n) {
      SplitMix64 rng(900 + static_cast<std::uint64_t>(n));
      RegisterParams p = base_params(n, 1.0, 0.02, 0.0);
      p.b_fields = sample_generic_b(n, rng);
      const SpectralTable table = build_spectral_table(p);
      const CouplingScalars scalars = CouplingScalars::from_params(p);
      const ResonanceModel model = build_resonance_model(table, p, scalars);
      const ReducedState rho0 = ReducedState::uniform_coherent(n);
      const std::vector<double> times{0.0, 0.5, 2.0, 7.0, 19.0, 55.0};
      const Trajectory traj = propagate_effective(rho0, model, times);
      for (size_t ti = 0; ti < times.size(); ++ti) {
        for (int a = 0; a < (1 << n); ++a) {
          worst = std::max(worst,
                           std::abs(traj.values[ti](a, a) - rho0.rho(a, a)));
        }
      }
    }
    Outcome o;
    o.pass = worst <= 1e-12;
    o.detail = "max diagonal drift = " + fmt(worst);
    return o;
  });

  run(6, "exact square law of the dephasing channel", [&] {
    RegisterParams base = base_params(1, 2.0, 0.01, 0.0);
    SweepOptions opt;
    opt.n_min = 1;
    opt.n_max = 6;
    opt.instances = 3;
    opt.seed = 4242;
    const ScalingReport report = scaling_sweep(base, opt);
    double worst_rel = 0.0;
    for (const SweepPoint& point : report.points) {
      worst_rel = std::max(
          worst_rel, std::abs(point.max_gamma_dephasing -
                              point.expected_dephasing) /
                         point.expected_dephasing);
    }
    const double slope_err = std::abs(report.dephasing_loglog.slope - 2.0);
    Outcome o;
    o.pass = worst_rel <= 1e-9 && slope_err <= 1e-6;
    o.detail = "max rel dev = " + fmt(worst_rel) +
               ", |slope - 2| = " + fmt(slope_err);
    return o;
  });

  run(7, "linear bound and Hamming regression (exchange)", [&] {
    RegisterParams base = base_params(1, 2.0, 0.0, 0.01);
    SweepOptions opt;
    opt.n_min = 1;
    opt.n_max = 6;
    opt.instances = 50;
    opt.seed = 777;
    const ScalingReport report = scaling_sweep(base, opt);
    bool bounded = true;
    for (const SweepPoint& point : report.points) {
      bounded = bounded &&
                point.max_gamma_exchange <= point.exchange_bound * (1 + 1e-12);
    }
    const LinearFit& fit = report.hamming_fit;
    const bool regression_ok =
        fit.r2 > 0.99 && std::abs(fit.intercept) < 1e-9 * fit.slope;
    Outcome o;
    o.pass = bounded && regression_ok;
    o.detail = "R^2 = " + fmt(fit.r2) + ", |intercept|/slope = " +
               fmt(std::abs(fit.intercept) / fit.slope) +
               (bounded ? "" : ", N-bound violated");
    return o;
  });

  run(8, "golden-rule rate against the oracle zero block", [&] {
    double worst = 0.0;
    bool simple = true;
    for (int n = 1; n <= 3; ++n) {
      SplitMix64 rng(3100 + static_cast<std::uint64_t>(n));
      RegisterParams p = base_params(n, 1.0, 0.01, 0.01);
      p.b_fields = sample_generic_b(n, rng);
      const SpectralTable table = build_spectral_table(p);
      const CouplingScalars scalars = CouplingScalars::from_params(p);
      const EnergyGroup& zero =
          table.groups[static_cast<size_t>(table.group_index_of(0.0))];
      const NumericLevelShift nls =
          build_level_shift_numeric(zero, p, scalars);
      const RateCoefficients rc = rate_coefficients(zero, p, scalars);

      int zero_modes = 0;
      double smallest = std::numeric_limits<double>::infinity();
      for (const Complex& z : nls.eigenvalues) {
        if (std::abs(z) <= 1e-10) {
          ++zero_modes;
        } else {
          smallest = std::min(smallest, z.imag());
        }
      }
      simple = simple && zero_modes == 1;
      worst = std::max(worst,
                       std::abs(smallest - p.lambda2 * p.lambda2 * rc.y0));
    }
    Outcome o;
    o.pass = worst <= 1e-6 && simple;
    o.detail = "max |min Im - l2^2 y0| = " + fmt(worst) +
               (simple ? ", zero mode simple" : ", zero mode NOT simple");
    return o;
  });

  run(9, "interacting-register consistency", [&] {
    // Algebraic reduction at J = 0.
    SplitMix64 rng(5500);
    RegisterParams p0 = base_params(3, 1.0, 0.01, 0.01);
    p0.b_fields = sample_generic_b(3, rng);
    const CouplingScalars sc0 = CouplingScalars::from_params(p0);
    const SpectralTable t0 = build_spectral_table(p0);
    const RateReport r0 = decoherence_rates(t0, p0, sc0);
    const double identity_dev =
        std::abs(gamma0_interacting(p0, sc0) -
                 p0.lambda2 * p0.lambda2 * r0.y0);

    // Diagonality of every nonzero-e block for generic J.
    RegisterParams p = p0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (i != j) p.j_matrix(i, j) = rng.uniform(-0.04, 0.04);
      }
    }
    const SpectralTable table = build_spectral_table(p);
    const CouplingScalars scalars = CouplingScalars::from_params(p);
    double max_offdiag = 0.0;
    double max_diag_dev = 0.0;
    for (const EnergyGroup& group : table.groups) {
      if (std::abs(group.e_value) <= table.tol) continue;
      const NumericLevelShift nls =
          build_level_shift_numeric(group, p, scalars);
      for (int r = 0; r < nls.matrix.rows(); ++r) {
        for (int c = 0; c < nls.matrix.cols(); ++c) {
          if (r != c) {
            max_offdiag = std::max(max_offdiag, std::abs(nls.matrix(r, c)));
          }
        }
      }
      for (size_t m = 0; m < group.members.size(); ++m) {
        const InteractingShift shift = interacting_shift(
            p, scalars, group.members[m].first, group.members[m].second);
        max_diag_dev =
            std::max(max_diag_dev,
                     std::abs(nls.matrix(static_cast<int>(m),
                                         static_cast<int>(m)) -
                              shift.delta));
      }
    }
    Outcome o;
    o.pass = identity_dev <= 1e-10 && max_offdiag <= 1e-8 &&
             table.generic && max_diag_dev <= 1e-6;
    o.detail = "J=0 identity dev = " + fmt(identity_dev) +
               ", oracle off-diag = " + fmt(max_offdiag) +
               ", diag dev = " + fmt(max_diag_dev);
    return o;
  });

  run(10, "degeneracy structure counts", [&] {
    Outcome o;
    o.pass = core.counts_ok;
    o.detail = std::string("d(e) = 2^N0, d(0) = 2^N, top level simple: ") +
               (core.counts_ok ? "all instances" : "violated");
    return o;
  });

  run(11, "end-to-end validate command", [&] {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "qreson_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path config = dir / "config.json";
    {
      std::ofstream out(config);
      out << R"({
  "register": {
    "n": 3,
    "j": {"pattern": "zero"},
    "b": {"sampler": {"kind": "uniform", "min": 0.5, "max": 1.5, "seed": 2026}}
  },
  "env": {"beta": 1.0},
  "couplings": {"lambda1": 0.01, "lambda2": 0.01},
  "form1": {"p": -0.5, "prefactor": 1.0, "cutoff_scale": 1.0, "phase": 0.0},
  "form2": {"p": 0.5, "prefactor": 1.0, "cutoff_scale": 1.0, "phase": 0.0}
})";
    }
    const std::string command = std::string(QRESON_CLI_PATH) + " validate --config " +
                                config.string() + " --out " +
                                (dir / "out").string() + " > " +
                                (dir / "stdout.txt").string();
    const auto start = std::chrono::steady_clock::now();
    const int status = std::system(command.c_str());
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    Outcome o;
    o.pass = status == 0 && seconds < 60.0 &&
             fs::exists(dir / "out" / "validate.json");
    o.detail = "exit status " + std::to_string(status) + " in " +
               fmt(seconds) + " s";
    return o;
  });

  std::printf("%s (%d/11 criteria)\n", g_failures == 0 ? "ALL PASS" : "FAILURES",
              11 - g_failures);
  return g_failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
