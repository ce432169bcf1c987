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

#include <string>
#include <vector>

#include "qreson/interacting.hpp"
#include "qreson/oracle.hpp"

namespace qreson {

struct ValidationCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;      // measured quantity
  double threshold = 0.0;  // bound it is held against
};

struct ValidationReport {
  bool pass = false;
  std::vector<ValidationCheck> checks;
  std::vector<CrosscheckReport> crosschecks;
  double printed_radical_max_dev = 0.0;
  double s1_reading_gap = 0.0;  // thermal-line vs positive-frequency value
};

namespace detail {

inline void push_bound(ValidationReport& report, const std::string& name,
                       double value, double threshold) {
  report.checks.push_back({name, value <= threshold, value, threshold});
}

}  // namespace detail

/// Cross-validates one instance end to end: the quadrature-built level
/// shift operators against the closed forms (J = 0) or against the
/// diagonal interacting shifts (J != 0), plus duality, projection algebra
/// and spectral-positivity bounds.
inline ValidationReport validate_instance(const RegisterParams& params,
                                          double crosscheck_tol,
                                          double quad_tol = 1e-10,
                                          const TableOptions& topt = {}) {
  params.validate();
  ValidationReport report;
  const SpectralTable table = build_spectral_table(params, topt);
  const CouplingScalars scalars(params.form1, params.form2, params.env(),
                                quad_tol);

  report.s1_reading_gap =
      std::abs(scalars.s1_thermal_line() - scalars.s1_positive_frequency());
  report.checks.push_back({"table_generic", table.generic,
                           table.generic ? 1.0 : 0.0, 1.0});
  if (!table.generic) {
    report.pass = false;
    return report;
  }
  detail::push_bound(report, "s1_reading_agreement", report.s1_reading_gap,
                     std::max(1e-8, 10.0 * quad_tol));

  double max_eig_dev = 0.0;
  double max_duality_dev = 0.0;
  double max_q_dev = 0.0;
  double min_im_delta = 0.0;
  double min_im_z_strict = std::numeric_limits<double>::infinity();
  bool any_strict_site = false;
  double max_offdiag_interacting = 0.0;
  double max_diag_dev_interacting = 0.0;

  for (const EnergyGroup& group : table.groups) {
    const NumericLevelShift numeric =
        build_level_shift_numeric(group, params, scalars);

    if (!params.interacting()) {
      const LevelShiftData closed = build_level_shift(group, params, scalars);
      report.crosschecks.push_back(crosscheck(closed, numeric, crosscheck_tol));
      max_eig_dev =
          std::max(max_eig_dev, report.crosschecks.back().max_eig_dev);

      const int d = closed.dim();
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
          const Complex overlap = closed.etas[static_cast<size_t>(a)].dot(
              closed.etas_dual[static_cast<size_t>(b)]);
          const double target = a == b ? 1.0 : 0.0;
          max_duality_dev =
              std::max(max_duality_dev, std::abs(overlap - target));
        }
      }
      Eigen::MatrixXcd q_sum = Eigen::MatrixXcd::Zero(d, d);
      for (const Eigen::MatrixXcd& q : closed.q_projections) {
        q_sum += q;
        max_q_dev = std::max(max_q_dev,
                             (q * q - q).cwiseAbs().maxCoeff());
      }
      max_q_dev = std::max(
          max_q_dev,
          (q_sum - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff());

      for (const Complex& delta : closed.deltas) {
        min_im_delta = std::min(min_im_delta, delta.imag());
      }
      for (const SiteCoefficients& sc : closed.sites) {
        report.printed_radical_max_dev = std::max(
            report.printed_radical_max_dev, printed_radical_deviation(sc));
        if (sc.a != 0.0 && sc.b != 0.0) {
          any_strict_site = true;
          min_im_z_strict = std::min(
              min_im_z_strict,
              std::min(sc.z_plus.imag(), sc.z_minus.imag()));
        }
      }
    } else {
      // Interacting register: nonzero-e blocks must be diagonal and agree
      // with the closed-form per-pair shift.
      if (std::abs(group.e_value) <= table.tol) continue;
      for (int r = 0; r < numeric.matrix.rows(); ++r) {
        for (int c = 0; c < numeric.matrix.cols(); ++c) {
          if (r != c) {
            max_offdiag_interacting = std::max(max_offdiag_interacting,
                                               std::abs(numeric.matrix(r, c)));
          }
        }
      }
      for (size_t m = 0; m < group.members.size(); ++m) {
        const InteractingShift shift = interacting_shift(
            params, scalars, group.members[m].first, group.members[m].second);
        max_diag_dev_interacting = std::max(
            max_diag_dev_interacting,
            std::abs(numeric.matrix(static_cast<int>(m), static_cast<int>(m)) -
                     shift.delta));
      }
    }
  }

  if (!params.interacting()) {
    detail::push_bound(report, "oracle_eigenvalue_agreement", max_eig_dev,
                       crosscheck_tol);
    detail::push_bound(report, "dual_basis_orthonormality", max_duality_dev,
                       1e-10);
    detail::push_bound(report, "projection_algebra", max_q_dev, 1e-10);
    detail::push_bound(report, "delta_positivity", -min_im_delta, 1e-12);
    if (any_strict_site) {
      report.checks.push_back({"strict_z_positivity",
                               min_im_z_strict > 1e-15, min_im_z_strict,
                               1e-15});
    }
  } else {
    detail::push_bound(report, "interacting_diagonality",
                       max_offdiag_interacting, 1e-8);
    detail::push_bound(report, "interacting_diagonal_agreement",
                       max_diag_dev_interacting, crosscheck_tol);
    // Algebraic golden-rule consistency of the J -> 0 reduction.
    RegisterParams reduced = params;
    reduced.j_matrix.setZero();
    const CouplingScalars reduced_scalars(params.form1, params.form2,
                                          params.env(), quad_tol);
    double y0_worst = std::numeric_limits<double>::infinity();
    for (int j = 0; j < params.n; ++j) {
      const double B = params.b_fields[j];
      y0_worst = std::min(y0_worst, B * B *
                                        angular_density(params.form2, 2.0 * B) /
                                        std::tanh(params.beta * B));
    }
    const double lhs = gamma0_interacting(reduced, reduced_scalars);
    const double rhs =
        params.lambda2 * params.lambda2 * 4.0 * kPi * y0_worst;
    detail::push_bound(report, "gamma0_golden_rule_reduction",
                       std::abs(lhs - rhs), 1e-10);
  }

  report.pass = true;
  for (const ValidationCheck& check : report.checks) {
    report.pass = report.pass && check.pass;
  }
  for (const CrosscheckReport& cc : report.crosschecks) {
    report.pass = report.pass && cc.pass;
  }
  return report;
}

}  // namespace qreson
