// SPDX-License-Identifier: BSD-3-Clause
//
// Boundary symbols of the flat-interface model problems.
//
// All quantities are functions of the reduced variable z = lambda/|xi|^2 via
// the roots omega_j(z) = sqrt(1 + rho_j z / mu_j) (principal branch, cuts on
// (-inf, -mu_j/rho_j]). Two transmission variants are provided:
//
//   S11: data = jump of the normal stress, response = the normal-velocity
//        trace (density-weighted);
//   S22: data = jump of the normal stress weighted by 1/rho, response = the
//        phase flux.
//
// For each variant the boundary determinant r = p1*q2 + p2*q1 and its
// factorization r = r1*r2 are evaluated; r2 is the factor whose zero-freeness
// in the closed right half-plane gets certified elsewhere. The unfactored r
// is authoritative; |r - r1*r2| is reported so any disagreement is loud.

#pragma once

#include <cmath>
#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "twophase/errors.hpp"
#include "twophase/thermo.hpp"

namespace twophase {

using Complex = std::complex<double>;

/// Constant coefficients entering the flat-interface symbols: densities and
/// the viscosities frozen at the linearization temperature.
struct SymbolParams {
    double rho1 = 1.0;
    double rho2 = 2.0;
    double mu1 = 1.0;
    double mu2 = 1.0;

    /// Freeze a material's viscosities at temperature `theta`.
    static SymbolParams from_material(const MaterialParams& mat, double theta) {
        SymbolParams p;
        p.rho1 = mat.rho1;
        p.rho2 = mat.rho2;
        p.mu1 = mat.phase1.mu(theta);
        p.mu2 = mat.phase2.mu(theta);
        if (p.rho1 <= 0.0 || p.rho2 <= 0.0)
            throw DomainError("symbols: densities must be positive");
        if (p.rho1 == p.rho2)
            throw DomainError("symbols: equal densities make the phase flux ill-defined");
        if (p.mu1 <= 0.0 || p.mu2 <= 0.0)
            throw DomainError("symbols: viscosities must be positive");
        return p;
    }

    double jump_rho() const { return rho2 - rho1; }
    double jump_inv_rho() const { return 1.0 / rho2 - 1.0 / rho1; }
};

/// The square roots omega_j = sqrt(1 + rho_j z / mu_j) and the derived
/// combinations gamma_j = omega_j + 1/omega_j, gamma = mu1*gamma1 + mu2*gamma2.
struct SymbolPoint {
    Complex z;
    Complex omega1, omega2;
    Complex gamma1, gamma2;
    Complex gamma;
};

namespace detail {

/// Distance from z to the half-line {x + 0i : x <= -mu/rho}.
inline double cut_distance(Complex z, double rho, double mu) {
    const double edge = -mu / rho;
    if (z.real() >= edge) return std::hypot(z.real() - edge, z.imag());
    return std::abs(z.imag());
}

inline Complex omega_of(Complex z, double rho, double mu) {
    return std::sqrt(Complex(1.0, 0.0) + (rho / mu) * z);
}

}  // namespace detail

/// Evaluate the roots and gamma combinations at z. Throws BranchError when z
/// is on (or numerically indistinguishable from) one of the branch cuts.
inline SymbolPoint symbol_point(Complex z, const SymbolParams& par) {
    const double margin = 1e-12 * (1.0 + std::abs(z));
    if (detail::cut_distance(z, par.rho1, par.mu1) < margin ||
        detail::cut_distance(z, par.rho2, par.mu2) < margin)
        throw BranchError("symbols: z lies on a branch cut of omega_j");

    SymbolPoint sp;
    sp.z = z;
    sp.omega1 = detail::omega_of(z, par.rho1, par.mu1);
    sp.omega2 = detail::omega_of(z, par.rho2, par.mu2);
    sp.gamma1 = sp.omega1 + 1.0 / sp.omega1;
    sp.gamma2 = sp.omega2 + 1.0 / sp.omega2;
    sp.gamma = par.mu1 * sp.gamma1 + par.mu2 * sp.gamma2;
    return sp;
}

inline SymbolPoint symbol_point(Complex z, const MaterialParams& mat, double theta) {
    return symbol_point(z, SymbolParams::from_material(mat, theta));
}

/// The interface-pressure weight psi and the velocity-offset symbol ell,
/// together with their product (the numerator actually used downstream):
/// ell(z) = psi_ell(z) / psi(z). psi is zero-free on the closed right
/// half-plane with psi(0) = 2(mu1 + mu2), so the quotient is regular there.
struct PsiEll {
    Complex psi;
    Complex psi_ell;
    Complex ell;
};

inline PsiEll psi_and_ell(const SymbolPoint& sp, const SymbolParams& par) {
    const Complex w1 = sp.omega1, w2 = sp.omega2;
    // Recurring bracket (omega - 1)/omega + 2(omega + 1)/(omega^2 + 1).
    const Complex a1 = (w1 - 1.0) / w1 + 2.0 * (w1 + 1.0) / (w1 * w1 + 1.0);
    const Complex a2 = (w2 - 1.0) / w2 + 2.0 * (w2 + 1.0) / (w2 * w2 + 1.0);

    PsiEll out;
    out.psi = par.mu2 * (w1 + 1.0) / (w1 * w1 + 1.0) * a2 +
              par.mu1 * (w2 + 1.0) / (w2 * w2 + 1.0) * a1;
    out.psi_ell = par.rho1 * par.mu2 * (w1 - 1.0) / (w1 * (w1 * w1 + 1.0)) * a2 -
                  par.rho2 * par.mu1 * (w2 - 1.0) / (w2 * (w2 * w2 + 1.0)) * a1;
    out.ell = out.psi_ell / out.psi;
    return out;
}

inline PsiEll psi_and_ell(Complex z, const SymbolParams& par) {
    return psi_and_ell(symbol_point(z, par), par);
}

/// psi at z = 0 equals 2(mu1 + mu2).
inline double psi_at_zero(const SymbolParams& par) { return 2.0 * (par.mu1 + par.mu2); }

/// Limit of z * ell(z) as |z| -> infinity in the closed right half-plane.
inline double z_ell_limit(const SymbolParams& par) {
    const double s1 = std::sqrt(par.mu1 / par.rho1);
    const double s2 = std::sqrt(par.mu2 / par.rho2);
    return 2.0 * par.mu1 * par.mu2 * (s2 - s1) / (par.mu1 * s2 + par.mu2 * s1);
}

/// Which transmission variant a set of boundary symbols belongs to.
enum class SymbolVariant { S11, S22 };

/// Component symbols of one variant at a fixed z, plus the determinant
/// r = p1*q2 + p2*q1, its factorization r = r1*r2, and the interface-pressure
/// factors pi1, pi2 (coefficient of |xi| * gamma^2 times the interface datum
/// in the pressure trace of the respective phase).
struct BoundarySymbols {
    SymbolVariant variant{};
    Complex p1, p2;
    Complex q1, q2;
    Complex r;
    Complex r1, r2;
    Complex pi1, pi2;
    /// |r - r1*r2| / (1 + |r|), a consistency check on the factorization.
    double factorization_residual = 0.0;
};

namespace detail {

inline void finish_symbols(BoundarySymbols& b) {
    b.r = b.p1 * b.q2 + b.p2 * b.q1;
    b.factorization_residual = std::abs(b.r - b.r1 * b.r2) / (1.0 + std::abs(b.r));
}

}  // namespace detail

/// Variant S11: normal-stress data, density-weighted velocity response.
inline BoundarySymbols s11_symbols(const SymbolPoint& sp, const SymbolParams& par) {
    const Complex w1 = sp.omega1, w2 = sp.omega2;
    const Complex g = sp.gamma;
    const double m1 = par.mu1, m2 = par.mu2;
    const double r1d = par.rho1, r2d = par.rho2;
    const double jmr = m2 / r2d - m1 / r1d;  // jump of mu/rho

    BoundarySymbols b;
    b.variant = SymbolVariant::S11;
    b.p1 = 1.0 / r1d - 2.0 * jmr * (w1 - 1.0) / (g * w1 * (w1 + 1.0));
    b.p2 = 1.0 / r2d + 2.0 * jmr * (w2 - 1.0) / (g * w2 * (w2 + 1.0));
    b.q1 = g * (r1d / w1 + r1d * m2 * sp.gamma2 / (m1 * w1 * (w1 + 1.0)) +
                r2d * (w1 - 1.0) / (w1 * w2 * (w1 + 1.0)));
    b.q2 = g * (r2d / w2 + r2d * m1 * sp.gamma1 / (m2 * w2 * (w2 + 1.0)) +
                r1d * (w2 - 1.0) / (w1 * w2 * (w2 + 1.0)));
    b.r1 = g / (w1 * w2 * (w1 + 1.0) * (w2 + 1.0));
    b.r2 = (r2d / r1d * w1 + r1d / r2d * w2) * (w1 + 1.0) * (w2 + 1.0) +
           2.0 * (w1 - 1.0) * (w2 - 1.0) +
           2.0 * (m2 * r1d / (m1 * r2d)) * (w2 - 1.0) +
           2.0 * (m1 * r2d / (m2 * r1d)) * (w1 - 1.0) +
           (m2 * r1d / (m1 * r2d)) * (w2 * w2 + 1.0) * (w2 + 1.0) +
           (m1 * r2d / (m2 * r1d)) * (w1 * w1 + 1.0) * (w1 + 1.0);
    detail::finish_symbols(b);
    const double jr = par.jump_rho();
    b.pi1 = jr * b.p2 / b.r * g * g;
    b.pi2 = jr * b.p1 / b.r * g * g;
    return b;
}

/// Variant S22: 1/rho-weighted stress data, phase-flux response.
inline BoundarySymbols s22_symbols(const SymbolPoint& sp, const SymbolParams& par) {
    const Complex w1 = sp.omega1, w2 = sp.omega2;
    const Complex g = sp.gamma;
    const double m1 = par.mu1, m2 = par.mu2;
    const double jmu = m2 - m1;

    BoundarySymbols b;
    b.variant = SymbolVariant::S22;
    b.p1 = 1.0 - 2.0 * jmu * (w1 - 1.0) / (g * w1 * (w1 + 1.0));
    b.p2 = 1.0 + 2.0 * jmu * (w2 - 1.0) / (g * w2 * (w2 + 1.0));
    b.q1 = g / w1 *
           (1.0 + (w1 - 1.0) / (w2 * (w1 + 1.0)) + m2 * sp.gamma2 / (m1 * (w1 + 1.0)));
    b.q2 = g / w2 *
           (1.0 + (w2 - 1.0) / (w1 * (w2 + 1.0)) + m1 * sp.gamma1 / (m2 * (w2 + 1.0)));
    b.r1 = g / (w1 * w2 * (w1 + 1.0) * (w2 + 1.0));
    b.r2 = (w1 + w2) * (w1 + 1.0) * (w2 + 1.0) + 2.0 * (w1 - 1.0) * (w2 - 1.0) +
           (m2 / m1) * (2.0 * (w2 - 1.0) + (w2 * w2 + 1.0) * (w2 + 1.0)) +
           (m1 / m2) * (2.0 * (w1 - 1.0) + (w1 * w1 + 1.0) * (w1 + 1.0));
    detail::finish_symbols(b);
    const double jir = par.jump_inv_rho();
    b.pi1 = jir * b.p2 / b.r * g * g;
    b.pi2 = jir * b.p1 / b.r * g * g;
    return b;
}

inline BoundarySymbols s11_symbols(Complex z, const SymbolParams& par) {
    return s11_symbols(symbol_point(z, par), par);
}

inline BoundarySymbols s22_symbols(Complex z, const SymbolParams& par) {
    return s22_symbols(symbol_point(z, par), par);
}

/// Closed-form values of the component symbols at z = 0 and |z| -> infinity.
struct SymbolLimits {
    double p1_zero, p2_zero, q1_zero, q2_zero;
    double p1_inf, p2_inf, q1_inf, q2_inf;
};

/// S = sqrt(rho1*mu1) + sqrt(rho2*mu2), the effective impedance sum entering
/// the high-frequency limits.
inline double impedance_sum(const SymbolParams& par) {
    return std::sqrt(par.rho1 * par.mu1) + std::sqrt(par.rho2 * par.mu2);
}

inline SymbolLimits s11_limits(const SymbolParams& par) {
    const double msum = par.mu1 + par.mu2;
    const double S = impedance_sum(par);
    SymbolLimits lim;
    lim.p1_zero = 1.0 / par.rho1;
    lim.p2_zero = 1.0 / par.rho2;
    lim.q1_zero = 2.0 * msum * msum * par.rho1 / par.mu1;
    lim.q2_zero = 2.0 * msum * msum * par.rho2 / par.mu2;
    lim.p1_inf = 1.0 / par.rho1;
    lim.p2_inf = 1.0 / par.rho2;
    lim.q1_inf = S * S;
    lim.q2_inf = S * S;
    return lim;
}

inline SymbolLimits s22_limits(const SymbolParams& par) {
    const double msum = par.mu1 + par.mu2;
    const double S = impedance_sum(par);
    SymbolLimits lim;
    lim.p1_zero = 1.0;
    lim.p2_zero = 1.0;
    lim.q1_zero = 2.0 * msum * msum / par.mu1;
    lim.q2_zero = 2.0 * msum * msum / par.mu2;
    lim.p1_inf = 1.0;
    lim.p2_inf = 1.0;
    lim.q1_inf = S * S / par.rho1;
    lim.q2_inf = S * S / par.rho2;
    return lim;
}

/// Callable giving the curvature-like multiplier m(z) of the full boundary
/// symbol; it is model input here, not something this header derives.
using ModulusFn = std::function<Complex(Complex)>;

/// Full boundary symbol of the linearized problem at frequency lambda and
/// tangential wave vector xi:
///
///   s(lambda, xi) = lambda + sigma*|xi|*m(z)/[[rho]]^2
///                 + c0*|xi|*ell(z)/[[rho]] + i*|xi|*(b0.xi_hat)/[[rho]],
///
/// with z = lambda/|xi|^2. `m_fn` must be supplied by the caller.
inline Complex s_boundary_symbol(Complex lambda, const Eigen::VectorXd& xi,
                                 const SymbolParams& par, double sigma, double c0,
                                 const Eigen::VectorXd& b0, const ModulusFn& m_fn) {
    if (!m_fn) throw ConfigError("boundary symbol: modulus function m(z) not supplied");
    const double tau = xi.norm();
    if (tau <= 0.0) throw DomainError("boundary symbol: |xi| must be positive");
    if (b0.size() != xi.size())
        throw ShapeError("boundary symbol: b0 and xi must have equal dimension");
    const Complex z = lambda / (tau * tau);
    const double jr = par.jump_rho();
    const Complex ell = psi_and_ell(z, par).ell;
    const double drift = b0.dot(xi) / tau;
    return lambda + sigma * tau * m_fn(z) / (jr * jr) + c0 * tau * ell / jr +
           Complex(0.0, 1.0) * tau * drift / jr;
}

/// Threshold constant for the instability window of the full symbol: any
/// root with Re(lambda) > threshold_constant(...) * |xi| is ruled out when
/// |m| <= M and |ell| <= L on the closed right half-plane.
inline double threshold_constant(const SymbolParams& par, double sigma, double M,
                                 double c0, double L, double b0_norm) {
    const double jr = std::abs(par.jump_rho());
    return 2.0 * (sigma * M / (jr * jr) + std::abs(c0) * L / jr + b0_norm / jr);
}

}  // namespace twophase
