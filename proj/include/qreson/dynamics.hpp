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

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "qreson/level_shift.hpp"
#include "qreson/oracle.hpp"

namespace qreson {

/// Reduced density matrix in the energy basis, validated on input.
struct ReducedState {
  Eigen::MatrixXcd rho;

  static ReducedState checked(Eigen::MatrixXcd rho) {
    if (rho.rows() != rho.cols() || rho.rows() < 2 ||
        (rho.rows() & (rho.rows() - 1)) != 0) {
      throw InvalidInputError("density matrix dimension must be 2^N");
    }
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-12) {
      throw InvalidInputError("initial state is not Hermitian");
    }
    if (std::abs(rho.trace() - Complex(1.0, 0.0)) > 1e-12) {
      throw InvalidInputError("initial state trace differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        0.5 * (rho + rho.adjoint()));
    if (es.eigenvalues().minCoeff() < -1e-10) {
      throw InvalidInputError("initial state is not positive semidefinite");
    }
    return ReducedState{std::move(rho)};
  }

  /// Pure uniform superposition, coherent across every basis pair.
  static ReducedState uniform_coherent(int n) {
    const int dim = 1 << n;
    Eigen::MatrixXcd rho =
        Eigen::MatrixXcd::Constant(dim, dim, Complex(1.0 / dim, 0.0));
    return ReducedState{std::move(rho)};
  }
};

/// Resonance data of one group as consumed by the evolution assembly:
/// complex energies and spectral projections on the group basis.
struct GroupResonances {
  double e_value = 0.0;
  std::vector<Complex> epsilons;
  std::vector<Eigen::MatrixXcd> qs;
};

/// Per-table resonance data plus the index plumbing between a matrix
/// element (sigma, tau) and the mirrored eigenvector basis phi_{tau,sigma}.
struct ResonanceModel {
  SpectralTable table;
  std::vector<GroupResonances> groups;
  std::vector<int> mirror;                    // mirror group per group
  std::vector<std::vector<int>> flip_index;   // member -> index in mirror

  int dim() const { return 1 << table.n; }
};

namespace detail {

inline void finish_model(ResonanceModel& model) {
  const auto& groups = model.table.groups;
  model.mirror.resize(groups.size());
  model.flip_index.resize(groups.size());
  for (size_t g = 0; g < groups.size(); ++g) {
    model.mirror[g] = model.table.mirror_index(static_cast<int>(g));
    const EnergyGroup& mirror_group =
        groups[static_cast<size_t>(model.mirror[g])];
    const MemberIndex mirror_lookup(mirror_group);
    model.flip_index[g].reserve(groups[g].members.size());
    for (const auto& [sigma, tau] : groups[g].members) {
      const int fi = mirror_lookup.find(tau, sigma);
      if (fi < 0) {
        throw IncompleteModelError("mirrored configuration pair not found");
      }
      model.flip_index[g].push_back(fi);
    }
  }
}

inline std::vector<std::vector<int>> cluster_by_value(
    const std::vector<Complex>& values, double tol) {
  std::vector<std::vector<int>> clusters;
  std::vector<bool> used(values.size(), false);
  for (size_t i = 0; i < values.size(); ++i) {
    if (used[i]) continue;
    std::vector<int> cluster{static_cast<int>(i)};
    used[i] = true;
    for (size_t k = i + 1; k < values.size(); ++k) {
      if (!used[k] && std::abs(values[k] - values[i]) <= tol) {
        cluster.push_back(static_cast<int>(k));
        used[k] = true;
      }
    }
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

}  // namespace detail

/// Closed-form model (non-interacting register).
inline ResonanceModel build_resonance_model(const SpectralTable& table,
                                            const RegisterParams& params,
                                            const CouplingScalars& scalars) {
  ResonanceModel model;
  model.table = table;
  model.groups.reserve(table.groups.size());
  for (const EnergyGroup& group : table.groups) {
    const LevelShiftData lsd = build_level_shift(group, params, scalars);
    GroupResonances gr;
    gr.e_value = group.e_value;
    for (size_t c = 0; c < lsd.distinct_deltas.size(); ++c) {
      gr.epsilons.push_back(Complex(group.e_value, 0.0) +
                            lsd.distinct_deltas[c]);
      gr.qs.push_back(lsd.q_projections[c]);
    }
    model.groups.push_back(std::move(gr));
  }
  detail::finish_model(model);
  return model;
}

/// Oracle-backed model; valid for any register the quadrature build covers
/// (used for the interacting case, where the e = 0 block has no closed
/// tensor form).
inline ResonanceModel build_resonance_model_numeric(
    const SpectralTable& table, const RegisterParams& params,
    const CouplingScalars& scalars) {
  ResonanceModel model;
  model.table = table;
  for (const EnergyGroup& group : table.groups) {
    const NumericLevelShift nls =
        build_level_shift_numeric(group, params, scalars);
    GroupResonances gr;
    gr.e_value = group.e_value;
    double scale = 0.0;
    for (const Complex& z : nls.eigenvalues)
      scale = std::max(scale, std::abs(z));
    const auto clusters = detail::cluster_by_value(
        nls.eigenvalues, 1e-10 * std::max(scale, 1e-300));
    for (const auto& cluster : clusters) {
      Eigen::MatrixXcd q =
          Eigen::MatrixXcd::Zero(nls.matrix.rows(), nls.matrix.cols());
      for (int b : cluster) {
        q += nls.right_vectors[static_cast<size_t>(b)] *
             nls.left_dual_vectors[static_cast<size_t>(b)].adjoint();
      }
      gr.epsilons.push_back(Complex(group.e_value, 0.0) +
                            nls.eigenvalues[static_cast<size_t>(cluster[0])]);
      gr.qs.push_back(std::move(q));
    }
    model.groups.push_back(std::move(gr));
  }
  detail::finish_model(model);
  return model;
}

/// Weight tables of one element group, keyed by matrix-element indices.
/// Branch s of the group mirrored to `element_group` contributes
///   [rho_t]_{el_i} += e^{i t eps_s} sum_j w(i, j) [rho_0]_{el_j},
/// where el_i, el_j run over the group's members. The index flip between a
/// matrix element (sigma, tau) and its eigenvector phi_{tau, sigma} is
/// resolved here and nowhere else.
struct BranchWeights {
  Complex epsilon;
  Eigen::MatrixXcd w;
};

inline std::vector<BranchWeights> resonance_weights(const ResonanceModel& model,
                                                    int element_group) {
  const auto& members =
      model.table.groups[static_cast<size_t>(element_group)].members;
  const int m = static_cast<int>(members.size());
  const int mg = model.mirror[static_cast<size_t>(element_group)];
  const GroupResonances& res = model.groups[static_cast<size_t>(mg)];
  const auto& flips = model.flip_index[static_cast<size_t>(element_group)];

  std::vector<BranchWeights> branches;
  branches.reserve(res.epsilons.size());
  for (size_t s = 0; s < res.epsilons.size(); ++s) {
    BranchWeights bw;
    bw.epsilon = res.epsilons[s];
    bw.w = Eigen::MatrixXcd(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        bw.w(i, j) = res.qs[s](flips[static_cast<size_t>(j)],
                               flips[static_cast<size_t>(i)]);
      }
    }
    branches.push_back(std::move(bw));
  }
  return branches;
}

struct TimeDiagnostics {
  double hermiticity_dev = 0.0;
  double trace_dev = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::MatrixXcd> values;
  Eigen::MatrixXcd ergodic_mean;
  std::vector<TimeDiagnostics> diagnostics;
};

namespace detail {

struct ElementTerms {
  std::uint32_t sigma_index, tau_index;
  std::vector<Complex> epsilons;
  std::vector<Complex> amplitudes;
};

inline std::vector<ElementTerms> assemble_terms(const ReducedState& rho0,
                                                const ResonanceModel& model) {
  if (rho0.rho.rows() != model.dim()) {
    throw InvalidInputError("state dimension does not match the model");
  }
  std::vector<ElementTerms> terms;
  terms.reserve(static_cast<size_t>(model.dim()) * model.dim());
  for (size_t g = 0; g < model.table.groups.size(); ++g) {
    const auto& members = model.table.groups[g].members;
    const auto branches = resonance_weights(model, static_cast<int>(g));
    const int m = static_cast<int>(members.size());

    Eigen::VectorXcd initial(m);
    for (int j = 0; j < m; ++j) {
      initial(j) = rho0.rho(members[static_cast<size_t>(j)].first.index(),
                            members[static_cast<size_t>(j)].second.index());
    }
    for (int i = 0; i < m; ++i) {
      ElementTerms et;
      et.sigma_index = members[static_cast<size_t>(i)].first.index();
      et.tau_index = members[static_cast<size_t>(i)].second.index();
      for (const BranchWeights& bw : branches) {
        Complex amp(0.0, 0.0);
        for (int j = 0; j < m; ++j) amp += bw.w(i, j) * initial(j);
        et.epsilons.push_back(bw.epsilon);
        et.amplitudes.push_back(amp);
      }
      terms.push_back(std::move(et));
    }
  }
  return terms;
}

inline bool epsilon_is_zero(Complex eps, double e_value) {
  return std::abs(eps) <= 1e-12 * std::max(1.0, std::abs(e_value));
}

}  // namespace detail

/// Dominant-order evolution of every matrix element over the given grid.
/// The mirrored-branch exponentials with eps = 0 constitute the ergodic
/// mean. Hermiticity and trace of the truncated evolution are monitored
/// per time step, not enforced.
inline Trajectory propagate_effective(const ReducedState& rho0,
                                      const ResonanceModel& model,
                                      const std::vector<double>& times) {
  for (size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0)) throw InvalidInputError("times must be >= 0");
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw InvalidInputError("times must be strictly increasing");
    }
  }
  const auto terms = detail::assemble_terms(rho0, model);
  const int dim = model.dim();

  Trajectory traj;
  traj.times = times;
  traj.ergodic_mean = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& et : terms) {
    for (size_t s = 0; s < et.epsilons.size(); ++s) {
      if (detail::epsilon_is_zero(et.epsilons[s], std::abs(et.epsilons[s]))) {
        traj.ergodic_mean(et.sigma_index, et.tau_index) += et.amplitudes[s];
      }
    }
  }

  const Complex ii(0.0, 1.0);
  for (double t : times) {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& et : terms) {
      Complex value(0.0, 0.0);
      for (size_t s = 0; s < et.epsilons.size(); ++s) {
        value += std::exp(ii * t * et.epsilons[s]) * et.amplitudes[s];
      }
      rho(et.sigma_index, et.tau_index) = value;
    }
    TimeDiagnostics diag;
    diag.hermiticity_dev = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    diag.trace_dev = std::abs(rho.trace() - rho0.rho.trace());
    traj.values.push_back(std::move(rho));
    traj.diagnostics.push_back(diag);
  }
  return traj;
}

/// The eps = 0 part of the assembly; equals the infinite-time Cesaro
/// average of the effective evolution.
inline Eigen::MatrixXcd ergodic_mean(const ReducedState& rho0,
                                     const ResonanceModel& model) {
  const auto terms = detail::assemble_terms(rho0, model);
  Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(model.dim(), model.dim());
  for (const auto& et : terms) {
    for (size_t s = 0; s < et.epsilons.size(); ++s) {
      if (detail::epsilon_is_zero(et.epsilons[s], std::abs(et.epsilons[s]))) {
        mean(et.sigma_index, et.tau_index) += et.amplitudes[s];
      }
    }
  }
  return mean;
}

/// Log-spaced default grid covering both the fastest dephasing and the
/// slowest thermalization scale, with t = 0 prepended. Falls back to a
/// linear grid when no branch decays.
inline std::vector<double> default_time_grid(const RateReport& report,
                                             int points = 64) {
  double gamma_min = std::numeric_limits<double>::infinity();
  double gamma_max = 0.0;
  for (const GroupRates& gr : report.groups) {
    if (gr.gamma > 0.0) {
      gamma_min = std::min(gamma_min, gr.gamma);
      gamma_max = std::max(gamma_max, gr.gamma);
    }
  }
  std::vector<double> times{0.0};
  if (gamma_max <= 0.0) {
    for (int i = 1; i <= points; ++i) {
      times.push_back(10.0 * i / points);
    }
    return times;
  }
  const double t_lo = 0.01 / gamma_max;
  const double t_hi = 10.0 / gamma_min;
  for (int i = 0; i < points; ++i) {
    times.push_back(t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) /
                                                     (points - 1)));
  }
  return times;
}

}  // namespace qreson
