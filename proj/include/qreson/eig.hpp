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
#include <algorithm>
#include <complex>
#include <numeric>
#include <vector>

#include "qreson/errors.hpp"

namespace qreson {

struct EigResult {
  std::vector<std::complex<double>> values;   // ordered by (Im, Re) descending
  std::vector<Eigen::VectorXcd> vectors;      // right eigenvectors, unit norm
  std::vector<double> residuals;              // ||A v - z v|| per pair
};

/// Full eigendecomposition of a dense complex matrix with a residual
/// certificate. Backed by a Schur-based dense solver; the contract is the
/// certified residual bound, not the algorithm.
inline EigResult eig_dense_nonhermitian(const Eigen::MatrixXcd& matrix,
                                        int dim_cap = 256) {
  if (matrix.rows() != matrix.cols()) {
    throw InvalidInputError("eigendecomposition requires a square matrix");
  }
  const int d = static_cast<int>(matrix.rows());
  if (d > dim_cap) {
    throw ResourceLimitError("matrix dimension exceeds the eigensolver cap");
  }

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(matrix, true);
  if (solver.info() != Eigen::Success) {
    throw EigensolverError("dense eigensolver did not converge");
  }

  const double scale = std::max(matrix.norm(), 1e-300);  // Frobenius
  EigResult result;
  std::vector<int> order(static_cast<size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto za = solver.eigenvalues()(a), zb = solver.eigenvalues()(b);
    if (za.imag() != zb.imag()) return za.imag() > zb.imag();
    return za.real() > zb.real();
  });

  for (int idx : order) {
    const std::complex<double> z = solver.eigenvalues()(idx);
    Eigen::VectorXcd v = solver.eigenvectors().col(idx);
    v /= v.norm();
    const double residual = (matrix * v - z * v).norm();
    if (residual > 1e-8 * scale) {
      throw EigensolverError("eigenpair residual " + std::to_string(residual) +
                             " exceeds certificate 1e-8 * ||A||");
    }
    result.values.push_back(z);
    result.vectors.push_back(std::move(v));
    result.residuals.push_back(residual);
  }
  return result;
}

/// The unique left family dual to a linearly independent right family:
/// <v_r, w_s> = delta_rs. Solves the Gram system, so the reconstruction
/// sum_r |v_r><w_r| is the projection onto span{v_r}.
inline std::vector<Eigen::VectorXcd> dual_basis(
    const std::vector<Eigen::VectorXcd>& vectors) {
  if (vectors.empty()) throw InvalidInputError("dual_basis of empty family");
  const int d = static_cast<int>(vectors.front().size());
  const int r = static_cast<int>(vectors.size());
  Eigen::MatrixXcd v(d, r);
  for (int k = 0; k < r; ++k) {
    if (vectors[static_cast<size_t>(k)].size() != d) {
      throw InvalidInputError("dual_basis vectors have mixed dimensions");
    }
    v.col(k) = vectors[static_cast<size_t>(k)];
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (!(smin > 0.0) || smax / smin > 1e12) {
    throw DegenerateBasisError(
        "vector family is numerically rank-deficient (condition > 1e12)");
  }

  // W = V (V^H V)^{-1} satisfies V^H W = I.
  const Eigen::MatrixXcd gram = v.adjoint() * v;
  const Eigen::MatrixXcd w = v * gram.inverse();
  std::vector<Eigen::VectorXcd> duals;
  duals.reserve(static_cast<size_t>(r));
  for (int k = 0; k < r; ++k) duals.push_back(w.col(k));
  return duals;
}

/// Minimum-weight perfect matching between two equal-size complex multisets
/// (Hungarian algorithm on |a_i - b_j|). Returns the per-pair distances in
/// the order of `a` and the assignment b-index for each a-index.
struct PairingResult {
  std::vector<int> assignment;
  std::vector<double> distances;
  double max_distance = 0.0;
};

inline PairingResult pair_eigenvalues(
    const std::vector<std::complex<double>>& a,
    const std::vector<std::complex<double>>& b) {
  if (a.size() != b.size()) {
    throw InvalidInputError("eigenvalue multisets differ in size");
  }
  const int n = static_cast<int>(a.size());
  PairingResult out;
  if (n == 0) return out;

  // Standard O(n^3) Hungarian (Jonker-Volgenant style potentials).
  std::vector<std::vector<double>> cost(static_cast<size_t>(n),
                                        std::vector<double>(static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cost[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          std::abs(a[static_cast<size_t>(i)] - b[static_cast<size_t>(j)]);
    }
  }
  std::vector<double> u(static_cast<size_t>(n) + 1), v(static_cast<size_t>(n) + 1);
  std::vector<int> p(static_cast<size_t>(n) + 1), way(static_cast<size_t>(n) + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<size_t>(n) + 1,
                             std::numeric_limits<double>::infinity());
    std::vector<bool> used(static_cast<size_t>(n) + 1, false);
    do {
      used[static_cast<size_t>(j0)] = true;
      const int i0 = p[static_cast<size_t>(j0)];
      double delta = std::numeric_limits<double>::infinity();
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<size_t>(j)]) continue;
        const double cur = cost[static_cast<size_t>(i0 - 1)][static_cast<size_t>(j - 1)] -
                           u[static_cast<size_t>(i0)] - v[static_cast<size_t>(j)];
        if (cur < minv[static_cast<size_t>(j)]) {
          minv[static_cast<size_t>(j)] = cur;
          way[static_cast<size_t>(j)] = j0;
        }
        if (minv[static_cast<size_t>(j)] < delta) {
          delta = minv[static_cast<size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<size_t>(j)]) {
          u[static_cast<size_t>(p[static_cast<size_t>(j)])] += delta;
          v[static_cast<size_t>(j)] -= delta;
        } else {
          minv[static_cast<size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<size_t>(j0)];
      p[static_cast<size_t>(j0)] = p[static_cast<size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  out.assignment.assign(static_cast<size_t>(n), -1);
  for (int j = 1; j <= n; ++j) {
    if (p[static_cast<size_t>(j)] > 0) {
      out.assignment[static_cast<size_t>(p[static_cast<size_t>(j)] - 1)] = j - 1;
    }
  }
  out.distances.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int j = out.assignment[static_cast<size_t>(i)];
    out.distances[static_cast<size_t>(i)] =
        std::abs(a[static_cast<size_t>(i)] - b[static_cast<size_t>(j)]);
    out.max_distance = std::max(out.max_distance, out.distances[static_cast<size_t>(i)]);
  }
  return out;
}

}  // namespace qreson
