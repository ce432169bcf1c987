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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qreson/spin.hpp"

namespace qreson {

/// One eigenvalue cluster of the Liouville operator L_S, together with the
/// structural data shared by its members.
struct EnergyGroup {
  double e_value = 0.0;
  std::vector<std::pair<SpinConfig, SpinConfig>> members;

  // Structure of the difference pattern sigma_j - tau_j (valid for the
  // generic case; taken from the first member otherwise).
  int n0 = 0;               // number of sites with sigma_j = tau_j
  std::vector<int> mu;      // their 1-based positions, increasing
  double e0 = 0.0;          // sum_j (sigma_j - tau_j), an even integer
  int hamming = 0;          // sum_j |sigma_j - tau_j|
  bool pattern_uniform = true;

  const std::pair<SpinConfig, SpinConfig>& representative() const {
    return members.front();
  }
};

struct GroupStructure {
  int n0;
  std::vector<int> mu;  // 1-based
  double e0;
  int hamming;
};

/// The full clustered spectrum of L_S.
struct SpectralTable {
  int n = 0;
  std::vector<EnergyGroup> groups;  // sorted by e_value ascending
  double gap = 0.0;                 // min distance between distinct e-values
  bool generic = false;
  double a1_margin = 0.0;           // gap - (|l1|+|l2|) * N * c0
  double tol = 0.0;                 // grouping tolerance actually used
  std::vector<std::string> warnings;

  int group_index_of(double e) const {
    for (size_t g = 0; g < groups.size(); ++g) {
      if (std::abs(groups[g].e_value - e) <= tol) return static_cast<int>(g);
    }
    return -1;
  }

  /// Index of the group holding eigenvalue -e of group g. The spectrum is
  /// symmetric under (sigma,tau) -> (tau,sigma), so this always exists.
  int mirror_index(int g) const {
    const int m = group_index_of(-groups[static_cast<size_t>(g)].e_value);
    if (m < 0) throw IncompleteModelError("mirror group not found");
    return m;
  }
};

struct TableOptions {
  double tol = -1.0;  // <= 0 selects 1e-9 * max(1, ||L_S||_inf)
  int n_cap = 8;
  double c0 = 1.0;  // constant entering the non-overlap margin report
};

namespace detail {

inline GroupStructure structure_of(const SpinConfig& sigma,
                                   const SpinConfig& tau) {
  GroupStructure s;
  s.n0 = 0;
  s.e0 = 0.0;
  s.hamming = 0;
  for (int j = 0; j < sigma.size(); ++j) {
    const int d = sigma[j] - tau[j];
    s.e0 += d;
    s.hamming += std::abs(d);
    if (d == 0) {
      ++s.n0;
      s.mu.push_back(j + 1);
    }
  }
  return s;
}

inline bool same_pattern(const std::pair<SpinConfig, SpinConfig>& a,
                         const std::pair<SpinConfig, SpinConfig>& b) {
  for (int j = 0; j < a.first.size(); ++j) {
    if (a.first[j] - a.second[j] != b.first[j] - b.second[j]) return false;
  }
  return true;
}

// Two members are compatible with an exact degeneracy for generic J and B
// iff both the field coefficients n_j and the coupling coefficients m_ij of
// their e-value difference vanish identically.
inline bool related_m_n_zero(const std::pair<SpinConfig, SpinConfig>& a,
                             const std::pair<SpinConfig, SpinConfig>& b) {
  const int n = a.first.size();
  for (int j = 0; j < n; ++j) {
    if (a.first[j] - a.second[j] != b.first[j] - b.second[j]) return false;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int ma = a.first[i] * a.first[j] - a.second[i] * a.second[j];
      const int mb = b.first[i] * b.first[j] - b.second[i] * b.second[j];
      if (ma != mb) return false;
    }
  }
  return true;
}

// Lexicographic branch index of a member within its group: slot k follows
// the k-th equal site mu_k, bit 0 for spin up, slot 0 most significant.
inline std::uint32_t branch_index(const std::pair<SpinConfig, SpinConfig>& m,
                                  const std::vector<int>& mu) {
  std::uint32_t idx = 0;
  for (int site : mu) {
    idx = (idx << 1) | (m.first[site - 1] < 0 ? 1u : 0u);
  }
  return idx;
}

}  // namespace detail

/// Enumerates all 4^N ordered configuration pairs, clusters their energy
/// differences into eigenvalue groups, and evaluates the genericness and
/// non-overlap diagnostics.
inline SpectralTable build_spectral_table(const RegisterParams& params,
                                          const TableOptions& options = {}) {
  params.validate();
  if (params.n > options.n_cap) {
    throw ResourceLimitError("register size " + std::to_string(params.n) +
                             " exceeds enumeration cap " +
                             std::to_string(options.n_cap));
  }

  const int n = params.n;
  const std::uint32_t dim = 1u << n;

  std::vector<SpinConfig> configs;
  configs.reserve(dim);
  std::vector<double> energies(dim);
  for (std::uint32_t i = 0; i < dim; ++i) {
    configs.push_back(SpinConfig::from_index(i, n));
    energies[i] = energy(params, configs.back());
  }

  const auto [emin_it, emax_it] =
      std::minmax_element(energies.begin(), energies.end());
  const double lnorm = *emax_it - *emin_it;  // ||L_S||_inf

  SpectralTable table;
  table.n = n;
  table.tol =
      options.tol > 0.0 ? options.tol : 1e-9 * std::max(1.0, lnorm);

  struct PairEntry {
    double e;
    std::uint32_t si, ti;
  };
  std::vector<PairEntry> entries;
  entries.reserve(static_cast<size_t>(dim) * dim);
  for (std::uint32_t si = 0; si < dim; ++si) {
    for (std::uint32_t ti = 0; ti < dim; ++ti) {
      entries.push_back({energies[si] - energies[ti], si, ti});
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const PairEntry& a, const PairEntry& b) {
              if (a.e != b.e) return a.e < b.e;
              if (a.si != b.si) return a.si < b.si;
              return a.ti < b.ti;
            });

  // Split the sorted list at gaps larger than the tolerance.
  std::vector<std::pair<size_t, size_t>> ranges;  // [first, last)
  size_t first = 0;
  for (size_t i = 1; i <= entries.size(); ++i) {
    if (i == entries.size() || entries[i].e - entries[i - 1].e > table.tol) {
      ranges.emplace_back(first, i);
      first = i;
    }
  }

  for (const auto& [lo, hi] : ranges) {
    EnergyGroup group;
    double sum = 0.0;
    for (size_t i = lo; i < hi; ++i) sum += entries[i].e;
    group.e_value = sum / static_cast<double>(hi - lo);
    for (size_t i = lo; i < hi; ++i) {
      if (std::abs(entries[i].e - group.e_value) > table.tol) {
        throw AmbiguousGroupingError(
            "cluster spread exceeds the grouping tolerance near e = " +
            std::to_string(group.e_value));
      }
      group.members.emplace_back(configs[entries[i].si], configs[entries[i].ti]);
    }

    const GroupStructure s =
        detail::structure_of(group.members[0].first, group.members[0].second);
    group.n0 = s.n0;
    group.mu = s.mu;
    group.e0 = s.e0;
    group.hamming = s.hamming;
    group.pattern_uniform =
        std::all_of(group.members.begin(), group.members.end(),
                    [&](const auto& m) {
                      return detail::same_pattern(group.members[0], m);
                    });

    if (group.pattern_uniform) {
      std::sort(group.members.begin(), group.members.end(),
                [&](const auto& a, const auto& b) {
                  return detail::branch_index(a, group.mu) <
                         detail::branch_index(b, group.mu);
                });
    } else {
      std::sort(group.members.begin(), group.members.end(),
                [](const auto& a, const auto& b) {
                  if (a.first.index() != b.first.index())
                    return a.first.index() < b.first.index();
                  return a.second.index() < b.second.index();
                });
    }
    table.groups.push_back(std::move(group));
  }

  // Gap between distinct eigenvalues; adjacent clusters suffice once sorted.
  table.gap = std::numeric_limits<double>::infinity();
  for (size_t g = 1; g < table.groups.size(); ++g) {
    table.gap = std::min(table.gap, table.groups[g].e_value -
                                        table.groups[g - 1].e_value);
  }
  if (table.groups.size() > 1 && table.gap <= 2.0 * table.tol) {
    throw AmbiguousGroupingError(
        "grouping tolerance exceeds half the smallest cluster separation");
  }
  if (table.groups.size() > 1 && table.gap < 10.0 * table.tol) {
    table.warnings.push_back(
        "spectral gap within 10x of the grouping tolerance; genericness is "
        "marginal");
  }

  if (params.interacting()) {
    table.generic = std::all_of(
        table.groups.begin(), table.groups.end(), [](const EnergyGroup& g) {
          return std::all_of(g.members.begin(), g.members.end(),
                             [&](const auto& m) {
                               return detail::related_m_n_zero(g.members[0], m);
                             });
        });
  } else {
    table.generic = std::all_of(table.groups.begin(), table.groups.end(),
                                [](const EnergyGroup& g) {
                                  return g.pattern_uniform;
                                });
  }

  table.a1_margin =
      table.gap - (std::abs(params.lambda1) + std::abs(params.lambda2)) *
                      static_cast<double>(n) * options.c0;
  return table;
}

/// Structural data of a group, validated across all members.
inline GroupStructure group_structure(const EnergyGroup& group) {
  const GroupStructure ref =
      detail::structure_of(group.members[0].first, group.members[0].second);
  for (const auto& m : group.members) {
    if (!detail::same_pattern(group.members[0], m)) {
      throw GenericnessError(
          "group members disagree on the difference pattern; the register is "
          "not generic");
    }
  }
  return ref;
}

}  // namespace qreson
