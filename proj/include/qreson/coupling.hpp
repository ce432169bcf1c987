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
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "qreson/form_factor.hpp"
#include "qreson/quadrature.hpp"
#include "qreson/spin.hpp"

namespace qreson {

/// Which reading of the dephasing inner product <g1, w^{-1} g1> to use.
/// The two coincide analytically (the infrared 1/u singularities on the two
/// half-lines cancel in the principal value); both are kept so the oracle
/// can adjudicate numerically.
enum class S1Reading { kThermalLine, kPositiveFrequency };

/// All reservoir-derived scalar kernels shared by the closed-form spectral
/// objects and the quadrature oracle. Immutable after construction; the
/// principal-value kernels are memoized per pole and safe to evaluate
/// concurrently.
class CouplingScalars {
 public:
  CouplingScalars(const FormFactor& g1, const FormFactor& g2, ThermalEnv env,
                  double quad_tol = 1e-10,
                  S1Reading reading = S1Reading::kThermalLine)
      : g1_(g1), g2_(g2), beta_(env.beta), tol_(quad_tol), reading_(reading) {
    g1_.validate();
    g2_.validate();
    if (!(beta_ > 0.0)) throw InvalidInputError("beta must be > 0");
    if (!(tol_ > 0.0)) throw InvalidInputError("quadrature tolerance <= 0");
    gamma_plus1_ = gamma_plus(g1_);
    s1_thermal_ = compute_s1_thermal();
    s1_positive_ = compute_s1_positive();
  }

  static CouplingScalars from_params(const RegisterParams& params,
                                     double quad_tol = 1e-10,
                                     S1Reading reading =
                                         S1Reading::kThermalLine) {
    return CouplingScalars(params.form1, params.form2, params.env(), quad_tol,
                           reading);
  }

  double beta() const { return beta_; }
  double quad_tol() const { return tol_; }
  const FormFactor& g1() const { return g1_; }
  const FormFactor& g2() const { return g2_; }
  double gamma_plus1() const { return gamma_plus1_; }

  /// P.V. <g1, w^{-1} g1>, in the configured reading.
  double s1() const {
    return reading_ == S1Reading::kThermalLine ? s1_thermal_ : s1_positive_;
  }
  double s1_thermal_line() const { return s1_thermal_; }
  double s1_positive_frequency() const { return s1_positive_; }

  // Bose-weighted occupation factors, smooth on the whole line with value
  // 1/beta at u = 0.
  double bose_minus(double u) const {  // u / (1 - e^{-beta u})
    if (u == 0.0) return 1.0 / beta_;
    return u / (-std::expm1(-beta_ * u));
  }
  double bose_plus(double u) const {  // u / (e^{beta u} - 1)
    if (u == 0.0) return 1.0 / beta_;
    return u / std::expm1(beta_ * u);
  }
  double u_coth(double u) const {  // u * coth(beta u)
    if (u == 0.0) return 1.0 / beta_;
    return u / std::tanh(beta_ * u);
  }

  // Resolvent kernel densities on the thermally extended line:
  //   kernel_minus(u) = u^2 G2(|u|) / |1 - e^{-beta u}|
  //   kernel_plus(u)  = u^2 G2(|u|) / |1 - e^{+beta u}|
  // written through the smooth occupation factors above.
  double kernel_minus(double u) const {
    return radial_weight(g2_, u) * bose_minus(u);
  }
  double kernel_plus(double u) const {
    return radial_weight(g2_, u) * bose_plus(u);
  }
  double kernel_sym(double u) const {  // u^2 G2(|u|) coth(beta|u|/2)
    return kernel_minus(u) + kernel_plus(u);
  }

  /// P.V. int kernel_minus(u) / (u - pole) du over the extended line.
  double pv_minus(double pole) const {
    return memoized(0, pole, [&](double u) { return kernel_minus(u); });
  }
  /// P.V. int kernel_plus(u) / (u - pole) du over the extended line.
  double pv_plus(double pole) const {
    return memoized(1, pole, [&](double u) { return kernel_plus(u); });
  }
  /// P.V. int kernel_sym(u) / (u - pole) du over the extended line.
  double pv_sym(double pole) const {
    return memoized(2, pole, [&](double u) { return kernel_sym(u); });
  }

  /// The printed spin-flip Lamb-shift kernel,
  ///   P.V. int u^2 G2(2u) coth(beta|u|) / (u - B) du,
  /// whose integrand is (1/2) * |2u| G2(|2u|) * u coth(beta u) / (u - B).
  double pv_x2_printed(double B) const {
    return memoized(3, B, [&](double u) {
      return 0.5 * radial_weight(g2_, 2.0 * u) * u_coth(u);
    });
  }

 private:
  template <typename F>
  double truncation_radius(F&& f, double pole_abs, double scale) const {
    double radius = std::max({2.0 * pole_abs + 1.0, 2.0 * scale, 1.0});
    const double budget = tol_ / 10.0;
    while (radius < 1e4) {
      const double tail =
          (std::abs(f(radius)) + std::abs(f(-radius))) * scale;
      if (tail <= budget) break;
      radius *= 1.2;
    }
    return radius;
  }

  template <typename F>
  double memoized(int kind, double pole, F&& f) const {
    {
      std::lock_guard<std::mutex> lock(cache_->mutex);
      auto it = cache_->values.find({kind, pole});
      if (it != cache_->values.end()) return it->second;
    }
    const double scale =
        kind == 3 ? 0.5 * g2_.cutoff_scale : g2_.cutoff_scale;
    const double radius = truncation_radius(f, std::abs(pole), scale);
    const double value = quad::pv_integral(f, pole, -radius, radius, tol_);
    std::lock_guard<std::mutex> lock(cache_->mutex);
    cache_->values.emplace(std::make_pair(kind, pole), value);
    return value;
  }

  double compute_s1_thermal() const {
    auto f = [&](double u) { return radial_weight(g1_, u) * bose_minus(u); };
    const double radius = truncation_radius(f, 0.0, g1_.cutoff_scale);
    return quad::pv_integral(f, 0.0, -radius, radius, tol_);
  }

  double compute_s1_positive() const {
    auto f = [&](double u) { return radial_weight(g1_, u); };
    const double radius = truncation_radius(f, 0.0, g1_.cutoff_scale);
    return quad::integrate(f, 0.0, radius, tol_);
  }

  FormFactor g1_, g2_;
  double beta_;
  double tol_;
  S1Reading reading_;
  double gamma_plus1_ = 0.0;
  double s1_thermal_ = 0.0;
  double s1_positive_ = 0.0;

  // The kernel memo is keyed by (kind, pole); copies share it, which is
  // sound because the parameters they were built from are identical.
  struct KernelCache {
    std::mutex mutex;
    std::map<std::pair<int, double>, double> values;
  };
  std::shared_ptr<KernelCache> cache_ = std::make_shared<KernelCache>();
};

}  // namespace qreson
