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
#include <cmath>
#include <complex>
#include <vector>

#include "qreson/interacting.hpp"
#include "qreson/site_matrix.hpp"
#include "qreson/spectral_table.hpp"

namespace qreson {

/// Scalar rate coefficients of one eigenvalue group (non-interacting
/// register). y0 is the global thermalization coefficient, identical for
/// all groups.
struct RateCoefficients {
  double x1 = 0.0;  // dephasing Lamb shift, for the representative member
  double y1 = 0.0;  // dephasing decay coefficient, prop. to e0^2
  double x2 = 0.0;  // spin-flip Lamb shift over flipped sites
  double y2 = 0.0;  // spin-flip decay coefficient over flipped sites
  double y12 = 0.0; // mixed-channel floor over equal sites
  double y0 = 0.0;  // Fermi golden rule coefficient, min over sites
};

namespace detail {

inline void require_noninteracting_generic(const EnergyGroup& group,
                                           const RegisterParams& params) {
  if (params.interacting()) {
    throw GenericnessError(
        "closed-form level shift requires the non-interacting register "
        "(J = 0)");
  }
  if (!group.pattern_uniform) {
    throw GenericnessError(
        "group members disagree on the difference pattern; the magnetic "
        "field is not generic");
  }
}

inline double flip_rate_coefficient(const CouplingScalars& scalars, double B) {
  // B^2 G2(2B) coth(beta B)
  const double g = angular_density(scalars.g2(), 2.0 * B);
  return B * B * g / std::tanh(scalars.beta() * B);
}

}  // namespace detail

/// Rate coefficients of Eq-level closed forms for a generic J = 0 group.
inline RateCoefficients rate_coefficients(const EnergyGroup& group,
                                          const RegisterParams& params,
                                          const CouplingScalars& scalars) {
  detail::require_noninteracting_generic(group, params);
  const auto& [sigma, tau] = group.representative();

  RateCoefficients rc;
  const double e0 = group.e0;
  rc.y1 = kPi * e0 * e0 * scalars.gamma_plus1() / (2.0 * scalars.beta());

  double equal_site_sum = 0.0;
  for (int j = 0; j < params.n; ++j) {
    const double B = params.b_fields[j];
    if (sigma[j] == tau[j]) {
      equal_site_sum += sigma[j];
      const SiteCoefficients sc = site_coefficients(j, params, scalars, e0);
      rc.y12 += std::min(sc.z_plus.imag(), sc.z_minus.imag());
    } else {
      // The flipped-site spin is fixed across the group by genericness.
      // The principal-value weight is twice the printed kernel; the factor
      // restores consistency with the resolvent decomposition the oracle
      // integrates (and with the interacting-register J -> 0 limit).
      rc.x2 -= 2.0 * sigma[j] * scalars.pv_x2_printed(B);
      rc.y2 += 2.0 * kPi * detail::flip_rate_coefficient(scalars, B);
    }
  }
  rc.x1 = -e0 * scalars.s1() * equal_site_sum;

  double worst = std::numeric_limits<double>::infinity();
  for (int j = 0; j < params.n; ++j) {
    worst = std::min(worst,
                     detail::flip_rate_coefficient(scalars, params.b_fields[j]));
  }
  rc.y0 = 4.0 * kPi * worst;
  return rc;
}

/// The closed-form level shift operator of one generic J = 0 group: the
/// scalar part plus one 2x2 site block per equal site, together with its
/// full eigensystem in tensor-product form.
struct LevelShiftData {
  double e_value = 0.0;
  Eigen::MatrixXcd matrix;
  Complex scalar_part;

  // Branch data, indexed lexicographically by the sign word rho (slot k is
  // equal site mu_k, + before -).
  std::vector<Complex> deltas;
  std::vector<Eigen::VectorXcd> etas;
  std::vector<Eigen::VectorXcd> etas_dual;

  // Spectral projections, one per distinct eigenvalue cluster.
  std::vector<Complex> distinct_deltas;
  std::vector<std::vector<int>> clusters;  // branch indices per projection
  std::vector<Eigen::MatrixXcd> q_projections;

  std::vector<SiteCoefficients> sites;  // per equal site mu_k
  RateCoefficients rates;

  int dim() const { return static_cast<int>(matrix.rows()); }

  Complex epsilon(int branch) const {
    return Complex(e_value, 0.0) + deltas[static_cast<size_t>(branch)];
  }
};

inline LevelShiftData build_level_shift(const EnergyGroup& group,
                                        const RegisterParams& params,
                                        const CouplingScalars& scalars) {
  detail::require_noninteracting_generic(group, params);
  const int n0 = group.n0;
  const int d = 1 << n0;
  if (static_cast<int>(group.members.size()) != d) {
    throw GenericnessError("group population differs from 2^N0");
  }

  LevelShiftData lsd;
  lsd.e_value = group.e_value;
  lsd.rates = rate_coefficients(group, params, scalars);

  const double l1sq = params.lambda1 * params.lambda1;
  const double l2sq = params.lambda2 * params.lambda2;
  lsd.scalar_part = Complex(l2sq * lsd.rates.x2,
                            l1sq * lsd.rates.y1 + l2sq * lsd.rates.y2);

  lsd.sites.reserve(static_cast<size_t>(n0));
  for (int site1 : group.mu) {
    lsd.sites.push_back(
        site_coefficients(site1 - 1, params, scalars, group.e0));
  }

  lsd.matrix = lsd.scalar_part * Eigen::MatrixXcd::Identity(d, d);
  for (int k = 0; k < n0; ++k) {
    const int bit = 1 << (n0 - 1 - k);  // slot 0 is the most significant
    const Eigen::Matrix2cd& m = lsd.sites[static_cast<size_t>(k)].m;
    for (int base = 0; base < d; ++base) {
      if ((base & bit) != 0) continue;
      for (int br = 0; br < 2; ++br) {
        for (int bc = 0; bc < 2; ++bc) {
          lsd.matrix(base | (br ? bit : 0), base | (bc ? bit : 0)) += m(br, bc);
        }
      }
    }
  }

  lsd.deltas.resize(static_cast<size_t>(d));
  lsd.etas.resize(static_cast<size_t>(d));
  lsd.etas_dual.resize(static_cast<size_t>(d));
  for (int branch = 0; branch < d; ++branch) {
    Complex delta = lsd.scalar_part;
    Eigen::VectorXcd eta = Eigen::VectorXcd::Ones(1);
    Eigen::VectorXcd eta_dual = Eigen::VectorXcd::Ones(1);
    for (int k = 0; k < n0; ++k) {
      const bool down = (branch >> (n0 - 1 - k)) & 1;
      const SiteCoefficients& sc = lsd.sites[static_cast<size_t>(k)];
      delta += down ? sc.z_minus : sc.z_plus;
      const Eigen::Vector2cd& xi = down ? sc.xi_minus : sc.xi_plus;
      const Eigen::Vector2cd& xid = down ? sc.xi_dual_minus : sc.xi_dual_plus;
      Eigen::VectorXcd next(eta.size() * 2), next_dual(eta.size() * 2);
      for (int i = 0; i < eta.size(); ++i) {
        next(2 * i) = eta(i) * xi(0);
        next(2 * i + 1) = eta(i) * xi(1);
        next_dual(2 * i) = eta_dual(i) * xid(0);
        next_dual(2 * i + 1) = eta_dual(i) * xid(1);
      }
      eta.swap(next);
      eta_dual.swap(next_dual);
    }
    lsd.deltas[static_cast<size_t>(branch)] = delta;
    lsd.etas[static_cast<size_t>(branch)] = std::move(eta);
    lsd.etas_dual[static_cast<size_t>(branch)] = std::move(eta_dual);
  }

  // Spectral projections. Branches with coinciding delta (non-generic
  // fields) are merged into one projection; the tensor-product dual family
  // stays a valid basis either way, so the sum keeps q^2 = q exact.
  double delta_scale = 0.0;
  for (const Complex& z : lsd.deltas)
    delta_scale = std::max(delta_scale, std::abs(z));
  const double cluster_tol = 1e-12 * std::max(delta_scale, 1e-300);
  std::vector<bool> used(static_cast<size_t>(d), false);
  for (int i = 0; i < d; ++i) {
    if (used[static_cast<size_t>(i)]) continue;
    std::vector<int> cluster{i};
    used[static_cast<size_t>(i)] = true;
    for (int k = i + 1; k < d; ++k) {
      if (!used[static_cast<size_t>(k)] &&
          std::abs(lsd.deltas[static_cast<size_t>(k)] -
                   lsd.deltas[static_cast<size_t>(i)]) <= cluster_tol) {
        cluster.push_back(k);
        used[static_cast<size_t>(k)] = true;
      }
    }
    Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(d, d);
    for (int b : cluster) {
      q += lsd.etas[static_cast<size_t>(b)] *
           lsd.etas_dual[static_cast<size_t>(b)].adjoint();
    }
    lsd.distinct_deltas.push_back(lsd.deltas[static_cast<size_t>(cluster[0])]);
    lsd.clusters.push_back(std::move(cluster));
    lsd.q_projections.push_back(std::move(q));
  }
  return lsd;
}

/// Decay data of one group as reported.
struct GroupRates {
  double e = 0.0;
  int n0 = 0;
  std::vector<int> mu;
  double e0 = 0.0;
  int hamming = 0;
  std::vector<Complex> deltas;
  double gamma = 0.0;
  bool oscillatory = false;            // all resonances exactly zero
  bool has_real_nonzero_branch = false;  // some nonzero resonance stays real
  RateCoefficients rates;
};

struct RateReport {
  bool interacting = false;
  std::vector<GroupRates> groups;
  double y0 = 0.0;
  double gamma0 = 0.0;  // lambda2^2 * y0 for J = 0, Eq-level formula else
  double printed_radical_max_dev = 0.0;
};

inline bool resonance_is_zero(Complex eps, double e_value) {
  return std::abs(eps) <= 1e-12 * std::max(1.0, std::abs(e_value));
}

namespace detail {

inline void fill_gamma(GroupRates& gr) {
  double best = std::numeric_limits<double>::infinity();
  bool any_nonzero = false;
  for (const Complex& delta : gr.deltas) {
    const Complex eps = Complex(gr.e, 0.0) + delta;
    if (resonance_is_zero(eps, gr.e)) continue;
    any_nonzero = true;
    best = std::min(best, eps.imag());
    if (eps.imag() <= 1e-15 * std::max(1.0, std::abs(eps))) {
      gr.has_real_nonzero_branch = true;
    }
  }
  gr.oscillatory = !any_nonzero;
  gr.gamma = any_nonzero ? best : 0.0;
}

}  // namespace detail

/// Per-group decay rates for the whole table, with the channel
/// decomposition. Dispatches on J = 0 (tensor closed forms) versus the
/// interacting register (diagonal shifts plus the e = 0 golden-rule
/// formula).
inline RateReport decoherence_rates(const SpectralTable& table,
                                    const RegisterParams& params,
                                    const CouplingScalars& scalars) {
  RateReport report;
  report.interacting = params.interacting();
  const double l2sq = params.lambda2 * params.lambda2;

  for (const EnergyGroup& group : table.groups) {
    GroupRates gr;
    gr.e = group.e_value;
    gr.n0 = group.n0;
    gr.mu = group.mu;
    gr.e0 = group.e0;
    gr.hamming = group.hamming;

    if (!report.interacting) {
      const LevelShiftData lsd = build_level_shift(group, params, scalars);
      gr.deltas = lsd.deltas;
      gr.rates = lsd.rates;
      report.y0 = lsd.rates.y0;
      for (const SiteCoefficients& sc : lsd.sites) {
        report.printed_radical_max_dev = std::max(
            report.printed_radical_max_dev, printed_radical_deviation(sc));
      }
      detail::fill_gamma(gr);
    } else {
      if (!table.generic) {
        throw GenericnessError(
            "interacting rates require a generic parameter set");
      }
      if (resonance_is_zero(Complex(group.e_value, 0.0), group.e_value) ||
          group.e_value == 0.0 || std::abs(group.e_value) <= table.tol) {
        gr.gamma = gamma0_interacting(params, scalars);
        gr.oscillatory = false;
      } else {
        for (const auto& [sigma, tau] : group.members) {
          const InteractingShift shift =
              interacting_shift(params, scalars, sigma, tau);
          gr.deltas.push_back(shift.delta);
          gr.rates.x1 = shift.x1;
          gr.rates.y1 = shift.y1;
          gr.rates.x2 = shift.x2;
          gr.rates.y2 = shift.y2;
        }
        detail::fill_gamma(gr);
      }
    }
    report.groups.push_back(std::move(gr));
  }

  if (report.interacting) {
    report.gamma0 = gamma0_interacting(params, scalars);
  } else {
    report.gamma0 = l2sq * report.y0;
  }
  return report;
}

}  // namespace qreson
