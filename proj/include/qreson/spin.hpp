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
#include <cstdint>
#include <string>
#include <vector>

#include "qreson/errors.hpp"
#include "qreson/form_factor.hpp"

namespace qreson {

/// One spin configuration of the register: a length-N sequence of +1/-1.
class SpinConfig {
 public:
  SpinConfig() = default;

  explicit SpinConfig(std::vector<int> sites) {
    if (sites.empty()) throw InvalidInputError("spin configuration is empty");
    sites_.reserve(sites.size());
    for (int s : sites) {
      if (s != 1 && s != -1) {
        throw InvalidInputError("spin entries must be +1 or -1");
      }
      sites_.push_back(static_cast<int8_t>(s));
    }
  }

  /// Parses "+-+" style strings.
  static SpinConfig from_string(const std::string& text) {
    std::vector<int> sites;
    sites.reserve(text.size());
    for (char ch : text) {
      if (ch == '+') {
        sites.push_back(1);
      } else if (ch == '-') {
        sites.push_back(-1);
      } else {
        throw InvalidInputError(std::string("invalid spin character '") + ch +
                                "', expected '+' or '-'");
      }
    }
    return SpinConfig(std::move(sites));
  }

  /// Configuration number index: site 0 is the most significant bit and a
  /// set bit means spin down, so index order matches the lexicographic
  /// order of "+-..." strings.
  static SpinConfig from_index(std::uint32_t index, int n) {
    std::vector<int> sites(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
      sites[static_cast<size_t>(j)] =
          (index >> (n - 1 - j)) & 1u ? -1 : 1;
    }
    return SpinConfig(std::move(sites));
  }

  int size() const { return static_cast<int>(sites_.size()); }
  int operator[](int j) const { return sites_[static_cast<size_t>(j)]; }

  std::uint32_t index() const {
    std::uint32_t idx = 0;
    for (int8_t s : sites_) idx = (idx << 1) | (s < 0 ? 1u : 0u);
    return idx;
  }

  SpinConfig flipped(int j) const {
    SpinConfig out = *this;
    out.sites_[static_cast<size_t>(j)] =
        static_cast<int8_t>(-out.sites_[static_cast<size_t>(j)]);
    return out;
  }

  std::string to_string() const {
    std::string text;
    text.reserve(sites_.size());
    for (int8_t s : sites_) text.push_back(s > 0 ? '+' : '-');
    return text;
  }

  friend bool operator==(const SpinConfig& a, const SpinConfig& b) {
    return a.sites_ == b.sites_;
  }
  friend bool operator!=(const SpinConfig& a, const SpinConfig& b) {
    return !(a == b);
  }

 private:
  std::vector<int8_t> sites_;
};

/// Full parameter set of one register + reservoir instance.
struct RegisterParams {
  int n = 1;
  Eigen::MatrixXd j_matrix;   // pair couplings J_ij, ordered double sum
  Eigen::VectorXd b_fields;   // local fields B_j >= 0
  double beta = 1.0;          // inverse temperature
  double lambda1 = 0.0;       // energy-conserving coupling strength
  double lambda2 = 0.0;       // energy-exchange coupling strength
  FormFactor form1;           // channel 1 (dephasing) form factor
  FormFactor form2;           // channel 2 (spin flip) form factor

  void validate() const {
    if (n < 1) throw InvalidInputError("register size must be >= 1");
    if (j_matrix.rows() != n || j_matrix.cols() != n) {
      throw InvalidInputError("j_matrix dimensions do not match register size");
    }
    if (b_fields.size() != n) {
      throw InvalidInputError("b_fields length does not match register size");
    }
    for (int j = 0; j < n; ++j) {
      if (!(b_fields[j] >= 0.0)) {
        throw InvalidInputError("b_fields entries must be >= 0");
      }
    }
    if (!(beta > 0.0)) throw InvalidInputError("beta must be > 0");
    form1.validate();
    form2.validate();
  }

  bool interacting() const { return !j_matrix.isZero(0.0); }

  ThermalEnv env() const { return ThermalEnv{beta}; }
};

/// Register energy E(sigma) = sum_{i,j} J_ij s_i s_j + sum_j B_j s_j.
/// The double sum runs over all ordered pairs including i = j.
inline double energy(const RegisterParams& params, const SpinConfig& sigma) {
  if (sigma.size() != params.n) {
    throw InvalidInputError("configuration length does not match register");
  }
  double e = 0.0;
  for (int i = 0; i < params.n; ++i) {
    for (int j = 0; j < params.n; ++j) {
      e += params.j_matrix(i, j) * sigma[i] * sigma[j];
    }
  }
  for (int j = 0; j < params.n; ++j) e += params.b_fields[j] * sigma[j];
  return e;
}

/// Liouvillian eigenvalue e(sigma, tau) = E(sigma) - E(tau). Antisymmetric
/// under argument swap exactly, since both calls evaluate the same formula.
inline double energy_diff(const RegisterParams& params, const SpinConfig& sigma,
                          const SpinConfig& tau) {
  return energy(params, sigma) - energy(params, tau);
}

}  // namespace qreson
