// SPDX-License-Identifier: BSD-3-Clause
//
// Chebyshev-extrema collocation on an interval: nodes, dense differentiation
// matrices and Clenshaw-Curtis quadrature weights. Nodes are returned in
// ascending order so that row/column 0 is the left endpoint.

#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "twophase/errors.hpp"

namespace twophase {

/// Collocation grid with N points on [a, b].
struct ChebGrid {
  double a = 0.0;
  double b = 1.0;
  Eigen::VectorXd r;   ///< nodes, ascending, r(0) = a, r(N-1) = b
  Eigen::MatrixXd D;   ///< first-derivative matrix
  Eigen::MatrixXd D2;  ///< second-derivative matrix (D*D)
  Eigen::VectorXd w;   ///< Clenshaw-Curtis weights, sum(w) = b - a

  int size() const { return static_cast<int>(r.size()); }
};

/// Build a Chebyshev-extrema grid with N >= 2 points on [a, b].
///
/// The differentiation matrix is the standard barycentric form with the
/// negative-sum trick on the diagonal; it differentiates polynomials of
/// degree <= N-1 exactly (up to rounding).
inline ChebGrid make_cheb_grid(int N, double a, double b) {
  if (N < 2) throw DomainError("make_cheb_grid: need at least 2 points");
  if (!(b > a)) throw DomainError("make_cheb_grid: need b > a");
  const int n = N - 1;  // polynomial degree
  ChebGrid g;
  g.a = a;
  g.b = b;

  // Nodes x_j = cos(j*pi/n) on [-1,1], reversed to ascending, then mapped.
  Eigen::VectorXd x(N);
  for (int j = 0; j < N; ++j) x(j) = -std::cos(M_PI * j / n);
  g.r = 0.5 * (a + b) + 0.5 * (b - a) * x.array();
  g.r(0) = a;
  g.r(N - 1) = b;

  // Differentiation matrix on [-1,1].
  Eigen::VectorXd c(N);
  for (int j = 0; j < N; ++j) c(j) = (j == 0 || j == n) ? 2.0 : 1.0;
  Eigen::MatrixXd D(N, N);
  for (int i = 0; i < N; ++i) {
    double rowsum = 0.0;
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      D(i, j) = (c(i) / c(j)) * sign / (x(i) - x(j));
      rowsum += D(i, j);
    }
    D(i, i) = -rowsum;
  }
  const double scale = 2.0 / (b - a);
  g.D = scale * D;
  g.D2 = g.D * g.D;

  // Clenshaw-Curtis weights on [-1,1] for nodes cos(j*pi/n), j = 0..n,
  // then reversed (symmetric anyway) and scaled to [a,b].
  Eigen::VectorXd w = Eigen::VectorXd::Zero(N);
  if (n == 1) {
    w(0) = w(1) = 1.0;
  } else {
    const bool even = (n % 2 == 0);
    const double wend = even ? 1.0 / (n * n - 1.0) : 1.0 / (n * n);
    w(0) = w(N - 1) = wend;
    for (int i = 1; i < n; ++i) {
      const double theta = M_PI * i / n;
      double v = 1.0;
      for (int k = 1; k <= (even ? n / 2 - 1 : (n - 1) / 2); ++k)
        v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
      if (even) v -= std::cos(n * theta) / (n * n - 1.0);
      w(i) = 2.0 * v / n;
    }
  }
  g.w = 0.5 * (b - a) * w;
  return g;
}

}  // namespace twophase
