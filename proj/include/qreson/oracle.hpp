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

#include "qreson/eig.hpp"
#include "qreson/level_shift.hpp"

namespace qreson {

/// Level shift operator rebuilt from the resolvent integral representation,
/// independent of the tensor-product closed forms.
struct NumericLevelShift {
  double e_value = 0.0;
  Eigen::MatrixXcd matrix;
  std::vector<Complex> eigenvalues;  // ordered by (Im, Re) descending
  std::vector<Eigen::VectorXcd> right_vectors;
  std::vector<Eigen::VectorXcd> left_dual_vectors;
  std::vector<double> residuals;
};

namespace detail {

struct MemberIndex {
  std::map<std::uint64_t, int> lookup;

  explicit MemberIndex(const EnergyGroup& group) {
    for (size_t i = 0; i < group.members.size(); ++i) {
      lookup.emplace(key(group.members[i]), static_cast<int>(i));
    }
  }

  static std::uint64_t key(const std::pair<SpinConfig, SpinConfig>& m) {
    return (static_cast<std::uint64_t>(m.first.index()) << 32) |
           m.second.index();
  }

  int find(const SpinConfig& sigma, const SpinConfig& tau) const {
    const auto it = lookup.find(
        (static_cast<std::uint64_t>(sigma.index()) << 32) | tau.index());
    return it == lookup.end() ? -1 : it->second;
  }
};

}  // namespace detail

/// Assembles Lambda_e from the second-order resolvent expansion: both
/// dephasing terms on the diagonal, and the four spin-flip resolvent
/// channels expanded over single-flip intermediate states. Each
/// epsilon -> 0 limit is taken by the Plemelj split, with the delta parts
/// evaluated analytically and the principal values by adaptive quadrature.
/// Works for any register (the flip enumeration discovers which matrix
/// elements survive the spectral projections).
inline NumericLevelShift build_level_shift_numeric(
    const EnergyGroup& group, const RegisterParams& params,
    const CouplingScalars& scalars) {
  params.validate();
  const int d = static_cast<int>(group.members.size());
  const detail::MemberIndex index(group);

  const double l1sq = params.lambda1 * params.lambda1;
  const double l2sq = params.lambda2 * params.lambda2;
  const double beta = scalars.beta();

  NumericLevelShift out;
  out.e_value = group.e_value;
  Eigen::MatrixXcd lambda1_part = Eigen::MatrixXcd::Zero(d, d);
  Eigen::MatrixXcd flip_raw = Eigen::MatrixXcd::Zero(d, d);

  // PV integral with the delta contribution of the same resolvent factor:
  // int F(u) (u - pole + i eps)^{-1} du -> P.V. - i pi F(pole).
  auto plemelj_minus = [&](double pole) {
    return Complex(scalars.pv_minus(pole), -kPi * scalars.kernel_minus(pole));
  };
  auto plemelj_plus = [&](double pole) {
    return Complex(scalars.pv_plus(pole), -kPi * scalars.kernel_plus(pole));
  };

  for (int col = 0; col < d; ++col) {
    const auto& [sigma, tau] = group.members[static_cast<size_t>(col)];

    double sum_sigma = 0.0, sum_tau = 0.0;
    for (int j = 0; j < params.n; ++j) {
      sum_sigma += sigma[j];
      sum_tau += tau[j];
    }
    const double e0m = sum_sigma - sum_tau;
    lambda1_part(col, col) =
        Complex(-0.5 * (sum_sigma * sum_sigma - sum_tau * sum_tau) *
                    scalars.s1(),
                kPi * scalars.gamma_plus1() * e0m * e0m / (2.0 * beta));

    const double e_sigma = energy(params, sigma);
    const double e_tau = energy(params, tau);

    for (int k = 0; k < params.n; ++k) {
      // sigma-side flip: intermediate (sigma^k, tau), detuning v_k.
      const SpinConfig sigma_k = sigma.flipped(k);
      const double vk = energy(params, sigma_k) - e_sigma;
      if (index.find(sigma_k, tau) < 0) {  // outside P_e as required
        const Complex amp_minus = plemelj_minus(-vk);
        const Complex amp_plus = plemelj_plus(-vk);
        for (int l = 0; l < params.n; ++l) {
          const int row_11 = index.find(sigma_k.flipped(l), tau);
          if (row_11 >= 0) flip_raw(row_11, col) += amp_minus;  // v2 x 1 twice
          const int row_41 = index.find(sigma_k, tau.flipped(l));
          if (row_41 >= 0) flip_raw(row_41, col) -= amp_plus;  // cross term
        }
      }

      // tau-side flip: intermediate (sigma, tau^k), detuning v'_k.
      const SpinConfig tau_k = tau.flipped(k);
      const double vpk = -(energy(params, tau_k) - e_tau);
      if (index.find(sigma, tau_k) < 0) {
        const Complex amp_plus = plemelj_plus(-vpk);
        const Complex amp_minus = plemelj_minus(-vpk);
        for (int l = 0; l < params.n; ++l) {
          const int row_22 = index.find(sigma, tau_k.flipped(l));
          if (row_22 >= 0) flip_raw(row_22, col) += amp_plus;  // 1 x v2 twice
          const int row_32 = index.find(sigma.flipped(l), tau_k);
          if (row_32 >= 0) flip_raw(row_32, col) -= amp_minus;  // cross term
        }
      }
    }
  }

  out.matrix = l1sq * lambda1_part + l2sq * (-0.5) * flip_raw;

  EigResult eig = eig_dense_nonhermitian(out.matrix);
  out.eigenvalues = std::move(eig.values);
  out.right_vectors = std::move(eig.vectors);
  out.residuals = std::move(eig.residuals);
  out.left_dual_vectors = dual_basis(out.right_vectors);
  return out;
}

/// Closed form versus quadrature oracle comparison for one group.
struct CrosscheckReport {
  double group_e = 0.0;
  double max_eig_dev = 0.0;
  double max_entry_dev = 0.0;
  double max_subspace_angle = 0.0;  // radians, per eigenvalue cluster
  bool pass = false;
};

inline CrosscheckReport crosscheck(const LevelShiftData& closed,
                                   const NumericLevelShift& numeric,
                                   double tol) {
  if (closed.matrix.rows() != numeric.matrix.rows()) {
    throw InvalidInputError("crosscheck dimension mismatch");
  }
  CrosscheckReport report;
  report.group_e = closed.e_value;

  const PairingResult pairing =
      pair_eigenvalues(closed.deltas, numeric.eigenvalues);
  report.max_eig_dev = pairing.max_distance;
  report.max_entry_dev =
      (closed.matrix - numeric.matrix).cwiseAbs().maxCoeff();

  // Principal angles between matched eigenspaces, cluster by cluster.
  for (size_t c = 0; c < closed.clusters.size(); ++c) {
    const auto& cluster = closed.clusters[c];
    const int r = static_cast<int>(cluster.size());
    const int d = static_cast<int>(closed.matrix.rows());
    Eigen::MatrixXcd a(d, r), b(d, r);
    for (int i = 0; i < r; ++i) {
      a.col(i) = closed.etas[static_cast<size_t>(cluster[static_cast<size_t>(i)])];
      b.col(i) = numeric.right_vectors[static_cast<size_t>(
          pairing.assignment[static_cast<size_t>(cluster[static_cast<size_t>(i)])])];
    }
    auto thin_q = [](const Eigen::MatrixXcd& m) {
      Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
      return Eigen::MatrixXcd(
          qr.householderQ() *
          Eigen::MatrixXcd::Identity(m.rows(), m.cols()));
    };
    const Eigen::MatrixXcd overlap = thin_q(a).adjoint() * thin_q(b);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(overlap);
    for (int i = 0; i < svd.singularValues().size(); ++i) {
      const double s = std::min(1.0, svd.singularValues()(i));
      report.max_subspace_angle =
          std::max(report.max_subspace_angle, std::acos(s));
    }
  }

  report.pass = report.max_eig_dev <= tol;
  return report;
}

}  // namespace qreson
