// SPDX-License-Identifier: BSD-3-Clause
//
// Thermodynamics: reference-law identities, latent heat, phase flux, and the
// finite-difference consistency of internal energy vs heat capacity.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "twophase/thermo.hpp"

using namespace twophase;

namespace {

MaterialParams ref_material(double c1, double c2, double rho1 = 1.0,
                            double rho2 = 2.0) {
  MaterialParams m;
  m.rho1 = rho1;
  m.rho2 = rho2;
  m.sigma = 1.0;
  m.phase1 = PhaseLaw::reference(c1, 1.0, 1.0);
  m.phase2 = PhaseLaw::reference(c2, 1.0, 1.0);
  return m;
}

}  // namespace

TEST_CASE("reference law calorimetric identities") {
  const double c = 1.7;
  const auto law = PhaseLaw::reference(c, 0.5, 0.25);
  for (double theta : {0.01, 0.5, 1.0, 2.0, 100.0}) {
    const auto e = eval_phase(law, theta);
    CHECK(e.epsilon == Catch::Approx(c * theta).epsilon(1e-14));
    CHECK(e.eta == Catch::Approx(c * std::log(theta)).margin(1e-14));
    CHECK(e.kappa == Catch::Approx(c).epsilon(1e-14));
    CHECK(e.mu == 0.5);
    CHECK(e.d == 0.25);
  }
}

TEST_CASE("internal energy derivative equals heat capacity") {
  // |d(epsilon)/d(theta) - kappa| <= 1e-6 * max(1, kappa) at 64 log-spaced
  // temperatures in [1e-3, 1e3], central differences.
  const auto law = PhaseLaw::reference(2.3, 1.0, 1.0);
  for (int i = 0; i < 64; ++i) {
    const double theta = std::pow(10.0, -3.0 + 6.0 * i / 63.0);
    const double h = 1e-6 * theta;
    const double de = (eval_phase(law, theta + h).epsilon -
                       eval_phase(law, theta - h).epsilon) /
                      (2.0 * h);
    const double kappa = eval_phase(law, theta).kappa;
    CHECK(std::abs(de - kappa) <= 1e-6 * std::max(1.0, kappa));
  }
}

TEST_CASE("latent heat for the reference family") {
  // l(theta) = theta*(c1 - c2)*ln(theta); at c1=1, c2=2, theta=e this is -e.
  const auto mat = ref_material(1.0, 2.0);
  const double e = std::exp(1.0);
  CHECK(latent_heat(mat, e) == Catch::Approx(-e).epsilon(1e-14));
  CHECK(latent_heat(mat, 1.0) == Catch::Approx(0.0).margin(1e-15));

  // Consistency l(theta) = -theta * [[eta]] at 1e-12 relative tolerance.
  for (double theta : {0.2, 0.9, 3.7, 41.0}) {
    const double l = latent_heat(mat, theta);
    const double eta_jump = eval_phase(mat.phase2, theta).eta -
                            eval_phase(mat.phase1, theta).eta;
    CHECK(std::abs(l + theta * eta_jump) <=
          1e-12 * std::max(1.0, std::abs(l)));
  }
}

TEST_CASE("phase flux from normal velocity jump") {
  const auto mat = ref_material(1.0, 1.5);  // rho1=1, rho2=2
  // [[1/rho]] = 1/2 - 1 = -1/2, so a jump of -0.5 gives j = 1.
  CHECK(phase_flux_from_normal_jump(mat, -0.5) == Catch::Approx(1.0));
  CHECK(phase_flux_from_normal_jump(mat, 0.25) == Catch::Approx(-0.5));
}

TEST_CASE("domain errors") {
  const auto mat = ref_material(1.0, 2.0);
  CHECK_THROWS_AS(eval_phase(mat.phase1, 0.0), DomainError);
  CHECK_THROWS_AS(eval_phase(mat.phase1, -1.0), DomainError);
  CHECK_THROWS_AS(latent_heat(mat, 0.0), DomainError);

  MaterialParams bad = mat;
  bad.rho2 = bad.rho1;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_THROWS_AS(phase_flux_from_normal_jump(bad, 1.0), DomainError);

  bad = mat;
  bad.sigma = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);

  CHECK_NOTHROW(mat.validate());
}
