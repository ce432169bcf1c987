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
#include <vector>

#include "qreson/errors.hpp"

namespace qreson::quad {

/// Gauss-Legendre nodes and weights on [-1, 1], computed once per order by
/// Newton iteration on the Legendre polynomial.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussRule(int order) {
    nodes.resize(static_cast<size_t>(order));
    weights.resize(static_cast<size_t>(order));
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
      double x = std::cos(kPiLocal * (i + 0.75) / (order + 0.5));
      double pp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = 0.0;
        for (int k = 0; k < order; ++k) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
        }
        pp = order * (x * p0 - p1) / (x * x - 1.0);
        const double dx = p0 / pp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      nodes[static_cast<size_t>(i)] = -x;
      nodes[static_cast<size_t>(order - 1 - i)] = x;
      const double w = 2.0 / ((1.0 - x * x) * pp * pp);
      weights[static_cast<size_t>(i)] = w;
      weights[static_cast<size_t>(order - 1 - i)] = w;
    }
  }

  static const GaussRule& order24() {
    static const GaussRule rule(24);
    return rule;
  }

 private:
  static constexpr double kPiLocal = 3.14159265358979323846;
};

namespace detail {

template <typename T>
inline double magnitude(T v) {
  return std::abs(v);
}

}  // namespace detail

/// Composite Gauss-Legendre quadrature over [a, b] with panel doubling.
/// The returned estimate carries a halving certificate: successive estimates
/// agreed to within tol. Throws QuadratureError (with the last two
/// estimates) if the budget of doublings is exhausted first.
template <typename F>
inline auto integrate(F&& f, double a, double b, double tol,
                      int max_doublings = 13) -> decltype(f(a)) {
  using R = decltype(f(a));
  if (!(a < b)) {
    if (a == b) return R{};
    throw InvalidInputError("integration domain is inverted");
  }
  const GaussRule& rule = GaussRule::order24();

  auto composite = [&](int panels) -> R {
    R sum{};
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double lo = a + p * h;
      const double mid = lo + 0.5 * h;
      R panel_sum{};
      for (size_t k = 0; k < rule.nodes.size(); ++k) {
        panel_sum += rule.weights[k] * f(mid + 0.5 * h * rule.nodes[k]);
      }
      sum += 0.5 * h * panel_sum;
    }
    return sum;
  };

  R prev = composite(1);
  int panels = 2;
  for (int d = 0; d < max_doublings; ++d, panels *= 2) {
    const R cur = composite(panels);
    if (detail::magnitude(cur - prev) <= tol) return cur;
    prev = cur;
  }
  const R last = prev;
  const R before = composite(panels / 4);
  throw QuadratureError("quadrature failed to converge",
                        detail::magnitude(last), detail::magnitude(before));
}

/// Cauchy principal value of int f(u) / (u - pole) du over [a, b].
///
/// For an interior pole the singularity is subtracted:
///   P.V. int f/(u - p) = int [f(u) - f(p)]/(u - p) + f(p) log((b-p)/(p-a)),
/// which is the symmetric-excision limit evaluated in closed form. The
/// subtracted integrand is continuous, so the plain adaptive rule applies.
/// A pole outside the closed domain reduces to a regular integral; a pole
/// at an endpoint is rejected (the integral does not exist).
template <typename F>
inline double pv_integral(F&& f, double pole, double a, double b, double tol) {
  if (!(a < b)) throw InvalidInputError("pv_integral domain is inverted");
  if (pole == a || pole == b) {
    throw InvalidInputError("principal-value pole at a domain endpoint");
  }
  if (pole < a || pole > b) {
    return integrate([&](double u) { return f(u) / (u - pole); }, a, b, tol);
  }

  const double fp = f(pole);
  const double scale =
      std::max({1.0, std::abs(pole), std::abs(a), std::abs(b)});
  const double h0 = 1e-6 * scale;
  const double dfp = (f(pole + h0) - f(pole - h0)) / (2.0 * h0);

  auto subtracted = [&](double u) {
    const double d = u - pole;
    if (std::abs(d) < h0) return dfp;
    return (f(u) - fp) / d;
  };
  return integrate(subtracted, a, b, tol) +
         fp * std::log((b - pole) / (pole - a));
}

}  // namespace qreson::quad
