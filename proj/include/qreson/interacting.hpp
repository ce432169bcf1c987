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

#include <complex>
#include <vector>

#include "qreson/coupling.hpp"
#include "qreson/spin.hpp"

namespace qreson {

/// Resonance shift of one configuration pair of the interacting register.
/// The level shift operator is diagonal in the energy basis for nonzero e,
/// so the pair's basis vector is its own (self-dual) eigenvector.
struct InteractingShift {
  double e = 0.0;
  std::complex<double> delta;
  double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;
  std::vector<double> v;        // sigma-side flip detunings per site
  std::vector<double> v_prime;  // tau-side flip detunings per site
};

namespace detail {

// Energy change under a single spin flip: site k of sigma for v_k, of tau
// for v'_k. The diagonal couplings J_kk drop out of every energy
// difference (s_k^2 = 1), so the row/column sums exclude k.
inline double flip_detuning(const RegisterParams& params, const SpinConfig& cfg,
                            int k, double sign) {
  double coupling = 0.0;
  for (int j = 0; j < params.n; ++j) {
    if (j == k) continue;
    coupling += (params.j_matrix(j, k) + params.j_matrix(k, j)) * cfg[j];
  }
  return sign * 2.0 * cfg[k] * (coupling + params.b_fields[k]);
}

}  // namespace detail

inline InteractingShift interacting_shift(const RegisterParams& params,
                                          const CouplingScalars& scalars,
                                          const SpinConfig& sigma,
                                          const SpinConfig& tau) {
  if (sigma.size() != params.n || tau.size() != params.n) {
    throw InvalidInputError("configuration length does not match register");
  }
  InteractingShift out;
  out.e = energy_diff(params, sigma, tau);
  const double scale = std::max(1.0, std::abs(energy(params, sigma)) +
                                         std::abs(energy(params, tau)));
  if (std::abs(out.e) <= 1e-12 * scale) {
    throw InvalidInputError(
        "interacting_shift requires e != 0; use gamma0_interacting for the "
        "zero group");
  }

  double e0 = 0.0;
  double equal_site_sum = 0.0;
  for (int j = 0; j < params.n; ++j) {
    e0 += sigma[j] - tau[j];
    if (sigma[j] == tau[j]) equal_site_sum += sigma[j];
  }
  out.y1 = kPi * e0 * e0 * scalars.gamma_plus1() / (2.0 * scalars.beta());
  out.x1 = -e0 * scalars.s1() * equal_site_sum;

  out.v.resize(static_cast<size_t>(params.n));
  out.v_prime.resize(static_cast<size_t>(params.n));
  for (int k = 0; k < params.n; ++k) {
    out.v[static_cast<size_t>(k)] = detail::flip_detuning(params, sigma, k, -1.0);
    out.v_prime[static_cast<size_t>(k)] =
        detail::flip_detuning(params, tau, k, +1.0);
  }

  // Plemelj split of the two resolvent channels: the delta parts build y2,
  // the principal values build x2, each channel keeping the thermal weight
  // it carries under the integral.
  out.x2 = 0.0;
  out.y2 = 0.0;
  for (int k = 0; k < params.n; ++k) {
    const double vk = out.v[static_cast<size_t>(k)];
    const double vpk = out.v_prime[static_cast<size_t>(k)];
    out.x2 -= 0.5 * (scalars.pv_minus(-vk) + scalars.pv_plus(-vpk));
    out.y2 += 0.5 * kPi *
              (scalars.kernel_minus(-vk) + scalars.kernel_plus(-vpk));
  }

  const double l1sq = params.lambda1 * params.lambda1;
  const double l2sq = params.lambda2 * params.lambda2;
  out.delta = l1sq * std::complex<double>(out.x1, out.y1) +
              l2sq * std::complex<double>(out.x2, out.y2);
  return out;
}

/// Imaginary part of the smallest nonzero resonance bifurcating from e = 0
/// for the interacting register:
///   gamma_0 = 4 pi l2^2 min_j { T(C_{j,+}) + T(C_{j,-}) },
///   T(C) = C^2 G2(2C) / |1 - e^{-2 beta C}|,  C_{j,+-} = sum_k (J_jk + J_kj) +- B_j.
/// T is evaluated through its smooth continuation at C = 0.
inline double gamma0_interacting(const RegisterParams& params,
                                 const CouplingScalars& scalars) {
  params.validate();
  const double beta = scalars.beta();
  auto term = [&](double c_pole) {
    const double occupation =
        c_pole == 0.0 ? 1.0 / (2.0 * beta)
                      : c_pole / (-std::expm1(-2.0 * beta * c_pole));
    return 0.5 * radial_weight(scalars.g2(), 2.0 * c_pole) * occupation;
  };

  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < params.n; ++j) {
    double row = 0.0;
    for (int k = 0; k < params.n; ++k) {
      if (k == j) continue;
      row += params.j_matrix(j, k) + params.j_matrix(k, j);
    }
    const double value =
        term(row + params.b_fields[j]) + term(row - params.b_fields[j]);
    best = std::min(best, value);
  }
  return 4.0 * kPi * params.lambda2 * params.lambda2 * best;
}

}  // namespace qreson
