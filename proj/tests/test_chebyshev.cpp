// SPDX-License-Identifier: BSD-3-Clause
//
// Collocation building blocks: exact differentiation of polynomials and
// quadrature accuracy of the Clenshaw-Curtis weights.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "twophase/chebyshev.hpp"

using namespace twophase;

TEST_CASE("differentiation matrix reproduces polynomials of degree <= N-1") {
  for (int N : {8, 16, 33}) {
    const auto g = make_cheb_grid(N, 0.3, 2.1);
    for (int deg = 0; deg < N; ++deg) {
      Eigen::VectorXd p(N), dp(N);
      for (int i = 0; i < N; ++i) {
        p(i) = std::pow(g.r(i), deg);
        dp(i) = deg == 0 ? 0.0 : deg * std::pow(g.r(i), deg - 1);
      }
      const double err = (g.D * p - dp).cwiseAbs().maxCoeff();
      const double scale = std::max(1.0, dp.cwiseAbs().maxCoeff());
      CHECK(err <= 1e-10 * scale);
    }
  }
}

TEST_CASE("second derivative matrix on smooth function") {
  const auto g = make_cheb_grid(40, -1.0, 2.0);
  Eigen::VectorXd f(g.size()), ddf(g.size());
  for (int i = 0; i < g.size(); ++i) {
    f(i) = std::sin(2.0 * g.r(i));
    ddf(i) = -4.0 * std::sin(2.0 * g.r(i));
  }
  CHECK((g.D2 * f - ddf).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("Clenshaw-Curtis weights integrate exactly and accurately") {
  const auto g = make_cheb_grid(24, 0.0, M_PI);
  CHECK(g.w.sum() == Catch::Approx(M_PI).epsilon(1e-13));

  Eigen::VectorXd f(g.size());
  for (int i = 0; i < g.size(); ++i) f(i) = std::sin(g.r(i));
  CHECK(g.w.dot(f) == Catch::Approx(2.0).epsilon(1e-12));

  // Polynomial exactness up to (at least) degree N-1.
  const auto h = make_cheb_grid(10, 1.0, 3.0);
  for (int deg = 0; deg <= 9; ++deg) {
    Eigen::VectorXd p(h.size());
    for (int i = 0; i < h.size(); ++i) p(i) = std::pow(h.r(i), deg);
    const double exact =
        (std::pow(3.0, deg + 1) - std::pow(1.0, deg + 1)) / (deg + 1);
    CHECK(h.w.dot(p) == Catch::Approx(exact).epsilon(1e-12));
  }
}
