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

#include <doctest.h>

#include "qreson/dynamics.hpp"
#include "qreson/sweep.hpp"

using namespace qreson;

namespace {

RegisterParams make_params(int n, std::uint64_t seed, double l1, double l2) {
  RegisterParams p;
  p.n = n;
  p.j_matrix = Eigen::MatrixXd::Zero(n, n);
  p.b_fields = Eigen::VectorXd::Zero(n);
  SplitMix64 rng(seed);
  for (int j = 0; j < n; ++j) p.b_fields[j] = rng.uniform(0.5, 1.5);
  p.beta = 1.0;
  p.lambda1 = l1;
  p.lambda2 = l2;
  p.form1 = FormFactor::make(-0.5, 1.0, 1.0);
  p.form2 = FormFactor::make(0.5, 1.0, 1.0);
  return p;
}

struct Setup {
  RegisterParams params;
  SpectralTable table;
  CouplingScalars scalars;
  ResonanceModel model;
};

Setup make_setup(int n, std::uint64_t seed, double l1, double l2) {
  RegisterParams p = make_params(n, seed, l1, l2);
  SpectralTable table = build_spectral_table(p);
  CouplingScalars sc = CouplingScalars::from_params(p);
  ResonanceModel model = build_resonance_model(table, p, sc);
  return Setup{std::move(p), std::move(table), std::move(sc),
               std::move(model)};
}

ReducedState random_state(int n, std::uint64_t seed) {
  const int dim = 1 << n;
  SplitMix64 rng(seed);
  Eigen::MatrixXcd a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      a(i, j) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    }
  }
  Eigen::MatrixXcd rho = a * a.adjoint();
  rho /= rho.trace();
  rho = 0.5 * (rho + rho.adjoint());
  return ReducedState::checked(std::move(rho));
}

}  // namespace

TEST_CASE("initial state validation") {
  CHECK_NOTHROW(ReducedState::uniform_coherent(2));
  Eigen::MatrixXcd bad_trace = Eigen::MatrixXcd::Identity(4, 4);
  CHECK_THROWS_AS(ReducedState::checked(bad_trace), InvalidInputError);

  Eigen::MatrixXcd non_herm = Eigen::MatrixXcd::Zero(4, 4);
  non_herm(0, 0) = 1.0;
  non_herm(0, 1) = Complex(0.2, 0.1);
  CHECK_THROWS_AS(ReducedState::checked(non_herm), InvalidInputError);

  Eigen::MatrixXcd indefinite = Eigen::MatrixXcd::Zero(4, 4);
  indefinite(0, 0) = 1.5;
  indefinite(1, 1) = -0.5;
  CHECK_THROWS_AS(ReducedState::checked(indefinite), InvalidInputError);
}

TEST_CASE("free evolution is exact") {
  const Setup s = make_setup(3, 41, 0.0, 0.0);
  const ReducedState rho0 = ReducedState::uniform_coherent(3);
  const std::vector<double> times{0.0, 0.3, 1.0, 4.7, 11.0};
  const Trajectory traj = propagate_effective(rho0, s.model, times);

  for (size_t ti = 0; ti < times.size(); ++ti) {
    for (std::uint32_t a = 0; a < 8; ++a) {
      for (std::uint32_t b = 0; b < 8; ++b) {
        const SpinConfig sigma = SpinConfig::from_index(a, 3);
        const SpinConfig tau = SpinConfig::from_index(b, 3);
        const Complex expected =
            std::exp(Complex(0.0, times[ti] * (energy(s.params, tau) -
                                               energy(s.params, sigma)))) *
            rho0.rho(a, b);
        CHECK(std::abs(traj.values[ti](a, b) - expected) <= 1e-12);
      }
    }
  }
}

TEST_CASE("the assembly reproduces the initial state at t = 0") {
  const Setup s = make_setup(3, 42, 0.01, 0.02);
  const ReducedState rho0 = random_state(3, 1000);
  const Trajectory traj = propagate_effective(rho0, s.model, {0.0});
  CHECK((traj.values[0] - rho0.rho).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("populations are conserved without the exchange channel") {
  const Setup s = make_setup(3, 43, 0.02, 0.0);
  const ReducedState rho0 = random_state(3, 2000);
  const std::vector<double> times{0.0, 0.4, 2.0, 9.0, 40.0};
  const Trajectory traj = propagate_effective(rho0, s.model, times);
  for (size_t ti = 0; ti < times.size(); ++ti) {
    for (int a = 0; a < 8; ++a) {
      CHECK(std::abs(traj.values[ti](a, a) - rho0.rho(a, a)) <= 1e-12);
    }
  }
}

TEST_CASE("resonance weights") {
  const Setup s = make_setup(2, 44, 0.013, 0.021);

  for (int g = 0; g < static_cast<int>(s.table.groups.size()); ++g) {
    const auto branches = resonance_weights(s.model, g);
    const int m = static_cast<int>(s.table.groups[static_cast<size_t>(g)].members.size());

    // Completeness: summed over branches, the diagonal weight is 1 and the
    // off-diagonal weight vanishes (the branch projections resolve the
    // identity).
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(m, m);
    for (const BranchWeights& bw : branches) total += bw.w;
    CHECK((total - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff() <=
          1e-10);

    if (s.table.groups[static_cast<size_t>(g)].n0 == 0) {
      REQUIRE(m == 1);
      REQUIRE(branches.size() == 1);
      CHECK(std::abs(branches[0].w(0, 0) - 1.0) <= 1e-12);
    }
  }

  // Zero coupling: every branch weight table is a basis projector.
  const Setup free = make_setup(2, 44, 0.0, 0.0);
  for (int g = 0; g < static_cast<int>(free.table.groups.size()); ++g) {
    const auto branches = resonance_weights(free.model, g);
    REQUIRE(branches.size() == 1);  // all deltas collapse to zero
    const int m = static_cast<int>(free.table.groups[static_cast<size_t>(g)].members.size());
    CHECK((branches[0].w - Eigen::MatrixXcd::Identity(m, m))
              .cwiseAbs()
              .maxCoeff() <= 1e-14);
  }
}

TEST_CASE("ergodic mean: free case collapses to the diagonal") {
  const Setup s = make_setup(2, 45, 0.0, 0.0);
  const ReducedState rho0 = random_state(2, 3000);
  const Eigen::MatrixXcd mean = ergodic_mean(rho0, s.model);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if (a == b) {
        CHECK(std::abs(mean(a, a) - rho0.rho(a, a)) <= 1e-13);
      } else {
        CHECK(std::abs(mean(a, b)) <= 1e-13);
      }
    }
  }
}

TEST_CASE("ergodic mean: populations thermalize to the Gibbs weights") {
  const Setup s = make_setup(3, 46, 0.01, 0.02);
  const ReducedState rho0 = random_state(3, 4000);
  const Eigen::MatrixXcd mean = ergodic_mean(rho0, s.model);

  double z = 0.0;
  std::vector<double> gibbs(8);
  for (std::uint32_t a = 0; a < 8; ++a) {
    gibbs[a] = std::exp(-s.params.beta *
                        energy(s.params, SpinConfig::from_index(a, 3)));
    z += gibbs[a];
  }
  for (std::uint32_t a = 0; a < 8; ++a) {
    CHECK(std::abs(mean(a, a) - gibbs[a] / z) <= 1e-10);
    for (std::uint32_t b = 0; b < 8; ++b) {
      if (a != b) CHECK(std::abs(mean(a, b)) <= 1e-12);
    }
  }
}

TEST_CASE("finite-time average approaches the ergodic mean") {
  const Setup s = make_setup(2, 47, 0.01, 0.03);
  const CouplingScalars& sc = s.scalars;
  const RateReport rates = decoherence_rates(s.table, s.params, sc);
  double gamma_min = std::numeric_limits<double>::infinity();
  for (const GroupRates& gr : rates.groups) {
    if (gr.gamma > 0.0) gamma_min = std::min(gamma_min, gr.gamma);
  }
  REQUIRE(std::isfinite(gamma_min));

  const ReducedState rho0 = ReducedState::uniform_coherent(2);
  const double horizon = 50.0 / gamma_min;
  const int steps = 4000;
  std::vector<double> times;
  for (int i = 1; i <= steps; ++i) {
    times.push_back(horizon * i / steps);
  }
  const Trajectory traj = propagate_effective(rho0, s.model, times);
  Eigen::MatrixXcd average = Eigen::MatrixXcd::Zero(4, 4);
  for (const Eigen::MatrixXcd& v : traj.values) average += v;
  average /= static_cast<double>(steps);

  const Eigen::MatrixXcd mean = ergodic_mean(rho0, s.model);
  double scale = std::max(1e-12, mean.cwiseAbs().maxCoeff());
  CHECK((average - mean).cwiseAbs().maxCoeff() / scale <= 0.05);
}

TEST_CASE("groups evolve independently") {
  const Setup s = make_setup(2, 48, 0.012, 0.019);
  const ReducedState rho0 = random_state(2, 5000);

  // Perturb one element of a chosen group and verify only the mirrored
  // group's elements respond.
  const int g = 3 % static_cast<int>(s.table.groups.size());
  const auto& member = s.table.groups[static_cast<size_t>(g)].members.front();
  Eigen::MatrixXcd perturbed = rho0.rho;
  // Keep the perturbation Hermitian by bumping the element and its mirror.
  const auto mirrored = std::make_pair(member.second, member.first);
  perturbed(member.first.index(), member.second.index()) += Complex(0.004, 0.002);
  perturbed(mirrored.first.index(), mirrored.second.index()) +=
      Complex(0.004, -0.002);

  const std::vector<double> times{0.9};
  const Trajectory base = propagate_effective(rho0, s.model, times);
  const Trajectory bumped = propagate_effective(
      ReducedState{perturbed}, s.model, times);
  const Eigen::MatrixXcd diff = bumped.values[0] - base.values[0];

  const double e_bumped = s.table.groups[static_cast<size_t>(g)].e_value;
  for (int gi = 0; gi < static_cast<int>(s.table.groups.size()); ++gi) {
    const EnergyGroup& group = s.table.groups[static_cast<size_t>(gi)];
    const bool touched = std::abs(group.e_value - e_bumped) <= s.table.tol ||
                         std::abs(group.e_value + e_bumped) <= s.table.tol;
    for (const auto& [sigma, tau] : group.members) {
      const double magnitude = std::abs(diff(sigma.index(), tau.index()));
      if (touched) continue;  // the bumped pair and its mirror may respond
      CHECK(magnitude <= 1e-14);
    }
  }
}

TEST_CASE("single-branch groups decay along one exponential") {
  const Setup s = make_setup(3, 49, 0.014, 0.022);
  const ReducedState rho0 = ReducedState::uniform_coherent(3);

  // The top group is simple: its element follows amp * exp(i eps t).
  const EnergyGroup& top = s.table.groups.back();
  REQUIRE(top.members.size() == 1);
  const auto branches =
      resonance_weights(s.model, static_cast<int>(s.table.groups.size()) - 1);
  REQUIRE(branches.size() == 1);
  const Complex eps = branches[0].epsilon;

  const auto& [sigma, tau] = top.members.front();
  const Complex amp = branches[0].w(0, 0) * rho0.rho(sigma.index(), tau.index());
  const std::vector<double> times{0.0, 0.5, 2.5, 7.0};
  const Trajectory traj = propagate_effective(rho0, s.model, times);
  for (size_t ti = 0; ti < times.size(); ++ti) {
    const Complex expected = std::exp(Complex(0.0, 1.0) * times[ti] * eps) * amp;
    CHECK(std::abs(traj.values[ti](sigma.index(), tau.index()) - expected) <=
          1e-13);
    CHECK(std::abs(std::abs(traj.values[ti](sigma.index(), tau.index()))) ==
          doctest::Approx(std::abs(amp) * std::exp(-eps.imag() * times[ti]))
              .epsilon(1e-10));
  }
}

TEST_CASE("hermiticity of the truncation is monitored, not enforced") {
  const Setup s = make_setup(2, 50, 0.015, 0.025);
  const ReducedState rho0 = random_state(2, 6000);
  const Trajectory traj = propagate_effective(rho0, s.model, {0.0, 1.3, 6.0});
  REQUIRE(traj.diagnostics.size() == 3);
  for (const TimeDiagnostics& d : traj.diagnostics) {
    CHECK(std::isfinite(d.hermiticity_dev));
    CHECK(std::isfinite(d.trace_dev));
    // Dominant-order truncation: deviations stay at the perturbative scale.
    CHECK(d.hermiticity_dev <= 1e-3);
    CHECK(d.trace_dev <= 1e-3);
  }
}

TEST_CASE("input guards of the propagator") {
  const Setup s = make_setup(2, 51, 0.01, 0.01);
  const ReducedState rho0 = ReducedState::uniform_coherent(2);
  CHECK_THROWS_AS(propagate_effective(rho0, s.model, {-1.0}),
                  InvalidInputError);
  CHECK_THROWS_AS(propagate_effective(rho0, s.model, {0.0, 0.0}),
                  InvalidInputError);
  CHECK_THROWS_AS(
      propagate_effective(ReducedState::uniform_coherent(3), s.model, {0.0}),
      InvalidInputError);
}

TEST_CASE("default time grids") {
  const Setup s = make_setup(2, 52, 0.01, 0.02);
  const RateReport rates = decoherence_rates(s.table, s.params, s.scalars);
  const std::vector<double> grid = default_time_grid(rates, 32);
  REQUIRE(grid.size() == 33);
  CHECK(grid.front() == 0.0);
  for (size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);

  const Setup free = make_setup(2, 52, 0.0, 0.0);
  const RateReport none = decoherence_rates(free.table, free.params, free.scalars);
  const std::vector<double> fallback = default_time_grid(none, 16);
  CHECK(fallback.front() == 0.0);
  CHECK(fallback.back() == doctest::Approx(10.0));
}

TEST_CASE("numeric resonance model agrees with the closed one") {
  const Setup s = make_setup(2, 53, 0.01, 0.02);
  const ResonanceModel numeric =
      build_resonance_model_numeric(s.table, s.params, s.scalars);
  const ReducedState rho0 = ReducedState::uniform_coherent(2);
  const std::vector<double> times{0.0, 0.8, 3.1};
  const Trajectory a = propagate_effective(rho0, s.model, times);
  const Trajectory b = propagate_effective(rho0, numeric, times);
  for (size_t ti = 0; ti < times.size(); ++ti) {
    CHECK((a.values[ti] - b.values[ti]).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("scaling sweeps") {
  RegisterParams base = make_params(1, 1, 0.01, 0.01);
  base.beta = 2.0;
  SweepOptions opt;
  opt.n_min = 1;
  opt.n_max = 4;
  opt.instances = 6;
  opt.seed = 99;

  const ScalingReport report = scaling_sweep(base, opt);
  REQUIRE(report.points.size() == 4);

  SUBCASE("dephasing channel follows its exact square law") {
    const CouplingScalars sc = CouplingScalars::from_params(base);
    for (const SweepPoint& p : report.points) {
      const double expected = 0.01 * 0.01 * kPi * sc.gamma_plus1() *
                              (2.0 * p.n) * (2.0 * p.n) / (2.0 * base.beta);
      CHECK(p.max_gamma_dephasing == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(report.dephasing_loglog.slope == doctest::Approx(2.0).epsilon(1e-9));
  }

  SUBCASE("exchange channel stays within its linear bound") {
    for (const SweepPoint& p : report.points) {
      CHECK(p.max_gamma_exchange <= p.exchange_bound * (1.0 + 1e-12));
    }
  }

  SUBCASE("thermalization rate is bounded independently of N") {
    // y0 is a minimum over per-site coefficients, so it can only shrink
    // with N and never exceeds the best single-site rate on the sampling
    // interval.
    const CouplingScalars sc = CouplingScalars::from_params(base);
    double cap = 0.0;
    for (double b = 0.5; b <= 1.5001; b += 0.001) {
      cap = std::max(cap, 4.0 * kPi * b * b *
                              angular_density(base.form2, 2.0 * b) /
                              std::tanh(base.beta * b));
    }
    for (const SweepPoint& p : report.points) {
      CHECK(p.e0_rate > 0.0);
      CHECK(p.e0_rate <= 0.01 * 0.01 * cap * (1.0 + 1e-9));
    }
  }

  SUBCASE("hamming regression is exactly proportional") {
    CHECK(report.hamming_fit.r2 > 0.99);
    CHECK(std::abs(report.hamming_fit.intercept) <
          1e-9 * report.hamming_fit.slope);
    REQUIRE(report.hamming.size() == 4);  // D = 2, 4, 6, 8 at N = 4
    CHECK(report.hamming.front().distance == 2);
    CHECK(report.hamming.back().distance == 8);
  }

  SUBCASE("seeded sweeps are reproducible") {
    const ScalingReport again = scaling_sweep(base, opt);
    for (size_t i = 0; i < report.points.size(); ++i) {
      CHECK(report.points[i].max_gamma_exchange ==
            again.points[i].max_gamma_exchange);
    }
    SweepOptions other = opt;
    other.seed = 100;
    const ScalingReport different = scaling_sweep(base, other);
    CHECK(report.points[3].max_gamma_exchange !=
          different.points[3].max_gamma_exchange);
  }

  SUBCASE("input guards") {
    SweepOptions bad = opt;
    bad.n_max = 0;
    CHECK_THROWS_AS(scaling_sweep(base, bad), InvalidInputError);
    bad = opt;
    bad.instances = 0;
    CHECK_THROWS_AS(scaling_sweep(base, bad), InvalidInputError);
  }
}

TEST_CASE("evolution matches the exponential of the block generator") {
  // Independent route: assemble the full doubled-space generator
  // G = direct sum over groups of (e + Lambda_e), exponentiate it through
  // its eigensystem, and compare element by element with the branch
  // assembly. This exercises the mirror/flip index plumbing end to end.
  const Setup s = make_setup(3, 60, 0.011, 0.016);
  const int dim = 8, doubled = 64;

  Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(doubled, doubled);
  for (const EnergyGroup& group : s.table.groups) {
    const LevelShiftData lsd = build_level_shift(group, s.params, s.scalars);
    for (size_t r = 0; r < group.members.size(); ++r) {
      for (size_t c = 0; c < group.members.size(); ++c) {
        const auto& mr = group.members[r];
        const auto& mc = group.members[c];
        const int row = static_cast<int>(mr.first.index() * dim + mr.second.index());
        const int col = static_cast<int>(mc.first.index() * dim + mc.second.index());
        gen(row, col) = lsd.matrix(static_cast<int>(r), static_cast<int>(c)) +
                        (r == c ? Complex(group.e_value, 0.0) : Complex(0.0, 0.0));
      }
    }
  }

  const ReducedState rho0 = random_state(3, 7000);
  Eigen::VectorXcd flipped0(doubled);
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      flipped0(a * dim + b) = rho0.rho(b, a);  // component along phi_{a,b}
    }
  }

  const EigResult eig = eig_dense_nonhermitian(gen.transpose().eval());
  const auto duals = dual_basis(eig.vectors);

  const std::vector<double> times{0.4, 1.9, 6.3};
  const Trajectory traj = propagate_effective(rho0, s.model, times);
  for (size_t ti = 0; ti < times.size(); ++ti) {
    Eigen::VectorXcd flipped_t = Eigen::VectorXcd::Zero(doubled);
    for (size_t k = 0; k < eig.values.size(); ++k) {
      flipped_t += std::exp(Complex(0.0, times[ti]) * eig.values[k]) *
                   eig.vectors[k] * duals[k].dot(flipped0);
    }
    double worst = 0.0;
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        worst = std::max(worst, std::abs(traj.values[ti](a, b) -
                                         flipped_t(b * dim + a)));
      }
    }
    CHECK(worst <= 1e-9);
  }
}
