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
#include <complex>

#include "qreson/errors.hpp"

namespace qreson {

inline constexpr double kPi = 3.14159265358979323846;

/// Coupling function of one reservoir channel, restricted to the admissible
/// family g(u, S) = prefactor * h1(S) * u^p * exp(-u^2 / cutoff_scale^2)
/// with half-integer exponent p and a unit-modulus constant angular profile.
///
/// The phase enters only through the reality constraint
/// h1 = exp(i*phase) * conj(h1); every derived quantity depends on |g|^2.
struct FormFactor {
  double p = 0.5;
  double prefactor = 1.0;
  double cutoff_scale = 1.0;
  double phase = 0.0;
  std::complex<double> angular_profile{1.0, 0.0};

  static FormFactor make(double p, double prefactor, double cutoff_scale,
                         double phase = 0.0,
                         std::complex<double> angular_profile = {1.0, 0.0}) {
    FormFactor ff{p, prefactor, cutoff_scale, phase, angular_profile};
    ff.validate();
    return ff;
  }

  void validate() const {
    const double two_p = 2.0 * p;
    const double nearest = std::round(two_p);
    if (std::abs(two_p - nearest) > 1e-12 ||
        std::abs(std::fmod(nearest, 2.0)) != 1.0 || nearest < -1.0) {
      throw InvalidInputError(
          "form factor exponent must be half-integer, p = -1/2 + n with "
          "n = 0, 1, 2, ...");
    }
    if (!(prefactor >= 0.0)) {
      throw InvalidInputError("form factor prefactor must be >= 0");
    }
    if (!(cutoff_scale > 0.0)) {
      throw InvalidInputError("form factor cutoff scale must be > 0");
    }
    if (std::abs(std::abs(angular_profile) - 1.0) > 1e-12) {
      throw InvalidInputError("angular profile must have unit modulus");
    }
    const std::complex<double> mirrored =
        std::exp(std::complex<double>(0.0, phase)) * std::conj(angular_profile);
    if (std::abs(angular_profile - mirrored) > 1e-12) {
      throw InvalidInputError(
          "angular profile violates the reality constraint h1 = "
          "exp(i*phase)*conj(h1)");
    }
  }
};

/// Angular density G(u) = int_{S^2} |g(u, S)|^2 dS for u >= 0.
/// Diverges at u = 0 when p = -1/2; use radial_weight for the finite
/// combination |u| G(u).
inline double angular_density(const FormFactor& ff, double u) {
  if (!(u >= 0.0)) {
    throw InvalidInputError("angular_density requires u >= 0");
  }
  const double amp2 = ff.prefactor * ff.prefactor;
  const double s2 = ff.cutoff_scale * ff.cutoff_scale;
  return 4.0 * kPi * amp2 * std::pow(u, 2.0 * ff.p) *
         std::exp(-2.0 * u * u / s2);
}

/// |u| G(|u|), a smooth even function of u (the exponent 2p+1 is a
/// nonnegative even integer for the admissible family).
inline double radial_weight(const FormFactor& ff, double u) {
  const double amp2 = ff.prefactor * ff.prefactor;
  const double s2 = ff.cutoff_scale * ff.cutoff_scale;
  const double au = std::abs(u);
  const int k = static_cast<int>(std::lround(2.0 * ff.p + 1.0));  // even, >= 0
  double poly = 1.0;
  for (int i = 0; i < k; ++i) poly *= au;
  return 4.0 * kPi * amp2 * poly * std::exp(-2.0 * u * u / s2);
}

/// Infrared constant gamma_+ = lim_{u -> 0+} u G(u). Nonzero only for the
/// marginal exponent p = -1/2.
inline double gamma_plus(const FormFactor& ff) {
  if (std::lround(2.0 * ff.p) == -1) {
    return 4.0 * kPi * ff.prefactor * ff.prefactor;
  }
  return 0.0;
}

/// Reservoir temperature descriptor, T = 1/beta.
struct ThermalEnv {
  double beta = 1.0;

  static ThermalEnv make(double beta) {
    if (!(beta > 0.0)) throw InvalidInputError("beta must be > 0");
    return ThermalEnv{beta};
  }
};

}  // namespace qreson
