// SPDX-License-Identifier: BSD-3-Clause
//
// Bulk thermodynamics of the two phases: free energy laws, derived
// calorimetric quantities, latent heat, and the phase flux induced by a
// normal-velocity jump across the interface.
//
// Jump convention throughout the library: [[v]] = v2 - v1 (phase 2 minus
// phase 1), phase 1 being the dispersed phase (interior of the balls).

#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "twophase/errors.hpp"

namespace twophase {

/// Scalar function of temperature.
using ThetaFn = std::function<double(double)>;

/// Free-energy law of one phase plus its transport coefficients.
///
/// psi is the Helmholtz free energy density; mu and d are the (temperature
/// dependent) shear viscosity and heat conductivity. psi_d and psi_dd are the
/// first and second temperature derivatives, supplied analytically by the
/// law's constructor.
struct PhaseLaw {
  std::string name;  ///< identifier used by the config loader
  ThetaFn psi;
  ThetaFn psi_d;
  ThetaFn psi_dd;
  ThetaFn mu;
  ThetaFn d;

  /// Reference family psi(theta) = -c * theta * (ln(theta) - 1) with constant
  /// viscosity and conductivity. Heat capacity kappa == c, internal energy
  /// epsilon == c*theta, entropy eta == c*ln(theta).
  static PhaseLaw reference(double c, double mu_const, double d_const) {
    if (c <= 0.0) throw DomainError("reference law needs c > 0");
    if (mu_const <= 0.0 || d_const <= 0.0)
      throw DomainError("reference law needs mu > 0 and d > 0");
    PhaseLaw law;
    law.name = "reference";
    law.psi = [c](double th) { return -c * th * (std::log(th) - 1.0); };
    law.psi_d = [c](double th) { return -c * std::log(th); };
    law.psi_dd = [c](double th) { return -c / th; };
    law.mu = [mu_const](double) { return mu_const; };
    law.d = [d_const](double) { return d_const; };
    return law;
  }

  /// Power family psi(theta) = -c * theta^p / (p*(p-1)) with p > 1 and
  /// constant transport coefficients. Heat capacity kappa == c*theta^(p-1),
  /// internal energy epsilon == c*theta^p/p, entropy eta == c*theta^(p-1)/(p-1).
  /// Unlike the reference family the internal energy is nonlinear in theta,
  /// so equilibrium temperatures require a root solve.
  static PhaseLaw power(double c, double p, double mu_const, double d_const) {
    if (c <= 0.0) throw DomainError("power law needs c > 0");
    if (p <= 1.0) throw DomainError("power law needs exponent p > 1");
    if (mu_const <= 0.0 || d_const <= 0.0)
      throw DomainError("power law needs mu > 0 and d > 0");
    PhaseLaw law;
    law.name = "power";
    law.psi = [c, p](double th) { return -c * std::pow(th, p) / (p * (p - 1.0)); };
    law.psi_d = [c, p](double th) { return -c * std::pow(th, p - 1.0) / (p - 1.0); };
    law.psi_dd = [c, p](double th) { return -c * std::pow(th, p - 2.0); };
    law.mu = [mu_const](double) { return mu_const; };
    law.d = [d_const](double) { return d_const; };
    return law;
  }
};

/// Pointwise thermodynamic state of one phase at temperature theta.
struct PhaseEval {
  double psi;      ///< free energy
  double eta;      ///< entropy, eta = -psi'
  double epsilon;  ///< internal energy, epsilon = psi + theta*eta
  double kappa;    ///< heat capacity, kappa = -theta*psi''
  double mu;       ///< shear viscosity
  double d;        ///< heat conductivity
};

/// Evaluate one phase law. Throws DomainError for theta <= 0 or if the law
/// yields a non-positive heat capacity, viscosity or conductivity there.
inline PhaseEval eval_phase(const PhaseLaw& law, double theta) {
  if (!(theta > 0.0)) throw DomainError("eval_phase: theta must be positive");
  PhaseEval e;
  e.psi = law.psi(theta);
  e.eta = -law.psi_d(theta);
  e.epsilon = e.psi + theta * e.eta;
  e.kappa = -theta * law.psi_dd(theta);
  e.mu = law.mu(theta);
  e.d = law.d(theta);
  if (!(e.kappa > 0.0))
    throw DomainError("eval_phase: heat capacity kappa <= 0 at theta=" +
                      std::to_string(theta));
  if (!(e.mu > 0.0) || !(e.d > 0.0))
    throw DomainError("eval_phase: mu and d must be positive");
  return e;
}

/// Densities, surface tension and the two phase laws.
struct MaterialParams {
  double rho1 = 1.0;
  double rho2 = 2.0;
  double sigma = 1.0;
  PhaseLaw phase1 = PhaseLaw::reference(1.0, 1.0, 1.0);
  PhaseLaw phase2 = PhaseLaw::reference(1.0, 1.0, 1.0);

  double jump_rho() const { return rho2 - rho1; }          ///< [[rho]]
  double jump_inv_rho() const { return 1.0 / rho2 - 1.0 / rho1; }  ///< [[1/rho]]

  /// Validate the scalar parameters and both laws on a log-spaced temperature
  /// grid spanning [1e-3, 1e3]. Throws DomainError on the first violation.
  void validate(int grid_points = 64) const {
    if (!(rho1 > 0.0) || !(rho2 > 0.0))
      throw DomainError("MaterialParams: densities must be positive");
    if (rho1 == rho2)
      throw DomainError("MaterialParams: phase transition model requires rho1 != rho2");
    if (!(sigma > 0.0)) throw DomainError("MaterialParams: sigma must be positive");
    for (int i = 0; i < grid_points; ++i) {
      const double t = grid_points == 1
                           ? 1.0
                           : std::pow(10.0, -3.0 + 6.0 * i / (grid_points - 1.0));
      eval_phase(phase1, t);  // throws if kappa, mu or d non-positive
      eval_phase(phase2, t);
    }
  }
};

/// Latent heat l(theta) = theta * [[psi']] ( = -theta * [[eta]] ).
inline double latent_heat(const MaterialParams& mat, double theta) {
  if (!(theta > 0.0)) throw DomainError("latent_heat: theta must be positive");
  return theta * (mat.phase2.psi_d(theta) - mat.phase1.psi_d(theta));
}

/// Phase flux j across the interface from the jump of the normal velocity:
/// [[u . nu]] = j * [[1/rho]], so j = [[u . nu]] / [[1/rho]].
inline double phase_flux_from_normal_jump(const MaterialParams& mat,
                                          double normal_velocity_jump) {
  const double jr = mat.jump_inv_rho();
  if (jr == 0.0)
    throw DomainError("phase_flux_from_normal_jump: requires rho1 != rho2");
  return normal_velocity_jump / jr;
}

/// Bulk state used by the equilibrium bookkeeping: a uniform temperature.
struct ThermoState {
  double theta = 1.0;
};

}  // namespace twophase
