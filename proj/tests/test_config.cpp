// SPDX-License-Identifier: BSD-3-Clause
//
// Run configuration: defaults, the sectioned text parser, typed assignment,
// command-line overrides, phase-law selection, and validation.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "twophase/config.hpp"
#include "twophase/equilibria.hpp"
#include "twophase/thermo.hpp"

using namespace twophase;

TEST_CASE("default configuration is the unit concentric ball at unit temperature") {
  RunConfig cfg;
  cfg.validate();

  const double wn = unit_sphere_area(3);
  CHECK(cfg.conserved.volume == Catch::Approx(wn * 8.0 / 3.0).epsilon(1e-14));

  const ConservedQuantities q = cfg.conserved_quantities();
  const MaterialParams mat = cfg.build_material();
  const EquilibriumConfig eq = solve_equilibrium(q, mat, cfg.geometry.R_out);
  CHECK(eq.R == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(eq.theta_star == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("conserved matching tracks a modified geometry") {
  RunConfig cfg;
  cfg.geometry.n = 2;
  cfg.geometry.m = 3;
  cfg.geometry.R = 0.7;
  cfg.geometry.R_out = 5.0;
  cfg.conserved = ConservedSection::matching(cfg.material, cfg.geometry, 1.0);
  cfg.validate();

  const EquilibriumConfig eq =
      solve_equilibrium(cfg.conserved_quantities(), cfg.build_material(), cfg.geometry.R_out);
  CHECK(eq.R == Catch::Approx(0.7).epsilon(1e-12));
  CHECK(eq.theta_star == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("config text parser round-trips fields") {
  const std::string text = R"(
# comment line
[material]
rho1 = 3.5        ; trailing comment
law2 = power
c2 = 2.0
p2 = 3.0

[geometry]
n = 2
N = 48

[run]
seed = 7
json = out.json
)";
  const RunConfig cfg = parse_config_text(text);
  CHECK(cfg.material.rho1 == 3.5);
  CHECK(cfg.material.law2.family == "power");
  CHECK(cfg.material.law2.c == 2.0);
  CHECK(cfg.material.law2.p == 3.0);
  CHECK(cfg.geometry.n == 2);
  CHECK(cfg.geometry.N == 48);
  CHECK(cfg.run.seed == 7);
  CHECK(cfg.run.json == "out.json");
  // untouched fields keep their defaults
  CHECK(cfg.material.rho2 == 2.0);
  CHECK(cfg.geometry.L_max == 4);
}

TEST_CASE("config parser rejects malformed input") {
  CHECK_THROWS_AS(parse_config_text("[material]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[nope]\nrho1 = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("rho1 = 1\n"), ConfigError);  // key before section
  CHECK_THROWS_AS(parse_config_text("[material]\nrho1 = 1\nrho1 = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[material]\nrho1\n"), ConfigError);  // no '='
  // typed assignment: integer fields reject fractional text, numbers reject junk
  CHECK_THROWS_AS(parse_config_text("[geometry]\nN = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[material]\nrho1 = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[material]\nrho1 = 1.0x\n"), ConfigError);
}

TEST_CASE("command-line overrides map one-to-one onto config keys") {
  RunConfig cfg;
  apply_config_override(cfg, "geometry.N", "128");
  apply_config_override(cfg, "run.rmax", "1e6");
  apply_config_override(cfg, "symbol.m_fn", "decay");
  CHECK(cfg.geometry.N == 128);
  CHECK(cfg.run.rmax == 1e6);
  CHECK(cfg.symbol.m_fn == "decay");

  CHECK_THROWS_AS(apply_config_override(cfg, "geometryN", "128"), ConfigError);
  CHECK_THROWS_AS(apply_config_override(cfg, "geometry.bogus", "1"), ConfigError);
  CHECK_THROWS_AS(apply_config_override(cfg, "nope.N", "1"), ConfigError);
}

TEST_CASE("power phase law builds the documented thermodynamics") {
  PhaseLawChoice choice;
  choice.family = "power";
  choice.c = 2.0;
  choice.p = 3.0;
  const PhaseLaw law = choice.build();

  // psi = -c theta^p / (p(p-1)) gives kappa = c theta^(p-1) and
  // epsilon = psi - theta psi' = c theta^p / p.
  const double th = 1.7;
  const PhaseEval st = eval_phase(law, th);
  CHECK(st.kappa == Catch::Approx(2.0 * th * th).epsilon(1e-14));
  CHECK(st.epsilon == Catch::Approx(2.0 * th * th * th / 3.0).epsilon(1e-14));
  CHECK(st.eta == Catch::Approx(2.0 * th * th / 2.0).epsilon(1e-14));

  choice.p = 1.0;
  CHECK_THROWS_AS(choice.build(), DomainError);
  choice.p = 2.0;
  choice.c = -1.0;
  CHECK_THROWS_AS(choice.build(), DomainError);

  PhaseLawChoice unknown;
  unknown.family = "cubic";
  CHECK_THROWS_AS(unknown.build(), ConfigError);
}

TEST_CASE("multiplier choices stay bounded on the right half-plane") {
  SymbolSection sym;
  for (const char* name : {"one", "zero", "decay"}) {
    sym.m_fn = name;
    const auto m = sym.build_modulus();
    for (const double mod : {1e-4, 1.0, 1e4}) {
      for (const double ang : {-1.5, 0.0, 1.5}) {
        const std::complex<double> z = mod * std::polar(1.0, ang);
        CHECK(std::abs(m(z)) <= 1.0 + 1e-15);
      }
    }
  }
  sym.m_fn = "sawtooth";
  CHECK_THROWS_AS(sym.build_modulus(), ConfigError);
}

TEST_CASE("validation rejects out-of-range fields") {
  const auto broken = [](auto&& mutate) {
    RunConfig cfg;
    mutate(cfg);
    return cfg;
  };
  CHECK_THROWS_AS(broken([](RunConfig& c) { c.geometry.n = 4; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](RunConfig& c) { c.geometry.m = 0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](RunConfig& c) { c.geometry.R_out = 0.5; }).validate(),
                  ConfigError);
  CHECK_THROWS_AS(broken([](RunConfig& c) { c.geometry.N = 4; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](RunConfig& c) { c.geometry.L_max = -1; }).validate(),
                  ConfigError);
  CHECK_THROWS_AS(broken([](RunConfig& c) { c.run.zero_tol = 0.0; }).validate(),
                  ConfigError);
  CHECK_THROWS_AS(broken([](RunConfig& c) { c.run.seed = -1; }).validate(), ConfigError);
  // equal densities break the phase-transition model; caught by the material check
  CHECK_THROWS_AS(broken([](RunConfig& c) { c.material.rho1 = c.material.rho2; }).validate(),
                  DomainError);
  CHECK_NOTHROW(broken([](RunConfig&) {}).validate());
}
