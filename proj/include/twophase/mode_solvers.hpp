// SPDX-License-Identifier: BSD-3-Clause
//
// Per-harmonic-mode radial transmission solvers at a spherical interface:
// the heat problem with a prescribed flux jump (Neumann-to-Dirichlet mode
// value), the Stokes problems with prescribed normal-stress jumps (the
// 2x2 response matrix coupling the two weighted normal-velocity jumps)
// and with continuous velocity (the scalar normal response), and the
// reduced dispersion function whose roots are the nonzero real
// eigenvalues of the linearization restricted to one harmonic degree.
//
// Velocity modes are represented by the radial pair (vr, vt) in
// u = vr(r) Y e_r + vt(r) grad_S Y with grad_S the unit-sphere gradient,
// valid for n = 2 (Fourier modes) and n = 3 (spherical harmonics). The
// outer boundary is either a rigid wall (no slip, insulated) or an open
// reservoir (zero traction, fixed temperature); the reservoir closure is
// what allows a net volume flux in the ball-constant l = 0 mode.

#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "twophase/errors.hpp"
#include "twophase/geometry.hpp"
#include "twophase/radial.hpp"

namespace twophase {

using Complex = std::complex<double>;

enum class OuterClosure { wall, reservoir };

/// Which pair of interface conditions closes the Stokes transmission
/// problem: continuous velocity with one prescribed normal-stress jump, or
/// free normal velocity with both weighted normal-stress jumps prescribed.
enum class StokesJumps { velocity_continuous, normal_stress_pair };

struct HeatModeSolution {
    Complex value = 0.0;  // theta(R) per unit flux jump
    Eigen::VectorXcd th1, th2;
};

struct StokesModeSolution {
    Complex k = 0.0;      // [[rho vr]] / [[rho]] at the interface
    Complex j = 0.0;      // [[vr]] / [[1/rho]] at the interface
    Complex trace = 0.0;  // vr(R) from the outer side
    Eigen::VectorXcd vr1, vt1, p1, vr2, vt2, p2;
};

namespace detail {

/// Ratio of the smallest to largest absolute diagonal entry of U in the LU
/// factorization; a cheap singularity screen for the collocation systems.
inline void check_conditioning(const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu,
                               const char* what) {
    const Eigen::VectorXd mags = lu.matrixLU().diagonal().cwiseAbs();
    const double worst = mags.minCoeff();
    const double best = mags.maxCoeff();
    if (!(worst > 1e-14 * best))
        throw ConvergenceError(std::string(what) +
                               ": collocation system is numerically singular");
}

/// Solve m x = rhs after scaling each row by its largest entry. The
/// collocation rows mix second-derivative stencils with order-one interface
/// conditions, so equilibration keeps the singularity screen meaningful.
inline Eigen::VectorXcd equilibrated_solve(Eigen::MatrixXcd& m, Eigen::VectorXcd& rhs,
                                           const char* what) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double scale = m.row(i).cwiseAbs().maxCoeff();
        if (scale > 0.0) {
            m.row(i) /= scale;
            rhs[i] /= scale;
        }
    }
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    check_conditioning(lu, what);
    return lu.solve(rhs);
}

/// Extension matrix for the staggered pressure space: given values of a
/// degree npts-3 polynomial at the interior collocation nodes, returns its
/// values at all npts nodes. Endpoint values come from barycentric Lagrange
/// evaluation, accumulated in log space to avoid underflow of the node
/// products.
inline Eigen::MatrixXd interior_extension(const CollocationInterval& iv) {
    const int n = static_cast<int>(iv.r.size());
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n - 2);
    for (int j = 0; j < n - 2; ++j) e(j + 1, j) = 1.0;
    for (const int end : {0, n - 1}) {
        const double x = iv.r[end];
        for (int j = 0; j < n - 2; ++j) {
            double logs = 0.0;
            int sign = 1;
            for (int k = 0; k < n - 2; ++k) {
                if (k == j) continue;
                const double num = x - iv.r[k + 1];
                const double den = iv.r[j + 1] - iv.r[k + 1];
                logs += std::log(std::abs(num)) - std::log(std::abs(den));
                if (num < 0.0) sign = -sign;
                if (den < 0.0) sign = -sign;
            }
            e(end, j) = sign * std::exp(logs);
        }
    }
    return e;
}

}  // namespace detail

/// Solve the per-mode heat transmission problem
///   rho kappa lambda theta - d (theta'' + (n-1) theta'/r - L theta/r^2) = 0
/// with continuous temperature, flux jump -[[d theta']] = 1 at r = R, a
/// regularity closure at the inner offset, and the chosen outer closure
/// (insulated wall or fixed-temperature reservoir). Returns theta(R).
inline HeatModeSolution heat_mode_solve(Complex lambda, int l, const RadialGeometry& geom,
                                        const LinearizationParams& par,
                                        OuterClosure closure = OuterClosure::wall) {
    if (l < 0) throw DomainError("heat_mode_solve: harmonic degree must be nonnegative");
    if (l == 0 && lambda == 0.0 && closure == OuterClosure::wall)
        throw SolvabilityError(
            "heat_mode_solve: the insulated steady problem requires mean-zero flux data, "
            "which a ball-constant mode violates");

    const int n = geom.npts;
    const double lap = mode_laplace_eigenvalue(geom.dim, l);
    const CollocationInterval& in = geom.inner;
    const CollocationInterval& out = geom.outer;

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(2 * n);

    auto fill_interior = [&](const CollocationInterval& iv, int col0, double rho_kappa,
                             double d, int row0) {
        for (int i = 1; i + 1 < n; ++i) {
            const double r = iv.r[i];
            for (int c = 0; c < n; ++c)
                m(row0 + i, col0 + c) =
                    -d * (iv.d2(i, c) + (geom.dim - 1) / r * iv.d1(i, c));
            m(row0 + i, col0 + i) += rho_kappa * lambda + d * lap / (r * r);
        }
    };
    fill_interior(in, 0, par.rho1 * par.kappa1, par.d1, 0);
    fill_interior(out, n, par.rho2 * par.kappa2, par.d2, n);

    // Regularity at the inner offset: delta0 theta' - l theta = 0.
    for (int c = 0; c < n; ++c) m(0, c) = geom.offset * in.d1(0, c);
    m(0, 0) -= l;

    // Continuity across the interface.
    m(n - 1, n) = 1.0;
    m(n - 1, n - 1) = -1.0;

    // Prescribed flux jump: -(d2 theta2' - d1 theta1') = 1 at r = R.
    for (int c = 0; c < n; ++c) {
        m(n, n + c) = -par.d2 * out.d1(0, c);
        m(n, c) = par.d1 * in.d1(n - 1, c);
    }
    rhs[n] = 1.0;

    // Outer closure.
    if (closure == OuterClosure::wall) {
        for (int c = 0; c < n; ++c) m(2 * n - 1, n + c) = out.d1(n - 1, c);
    } else {
        m(2 * n - 1, 2 * n - 1) = 1.0;
    }

    const Eigen::VectorXcd x = detail::equilibrated_solve(m, rhs, "heat_mode_solve");

    HeatModeSolution sol;
    sol.th1 = x.head(n);
    sol.th2 = x.tail(n);
    sol.value = sol.th1[n - 1];
    return sol;
}

/// Neumann-to-Dirichlet mode value of the heat problem.
inline Complex heat_ntd(Complex lambda, int l, const RadialGeometry& geom,
                        const LinearizationParams& par,
                        OuterClosure closure = OuterClosure::wall) {
    return heat_mode_solve(lambda, l, geom, par, closure).value;
}

/// Integral of rho kappa |theta|^2 over the domain for a unit-normalized
/// surface harmonic factor.
inline double heat_mode_energy(const RadialGeometry& geom, const LinearizationParams& par,
                               const HeatModeSolution& sol) {
    const int n = geom.npts;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += par.rho1 * par.kappa1 * std::norm(sol.th1[i]) *
               std::pow(geom.inner.r[i], geom.dim - 1) * geom.inner.w[i];
        acc += par.rho2 * par.kappa2 * std::norm(sol.th2[i]) *
               std::pow(geom.outer.r[i], geom.dim - 1) * geom.outer.w[i];
    }
    return acc;
}

/// Integral of d |grad theta|^2 over the domain for a unit-normalized
/// surface harmonic factor of degree l.
inline double heat_mode_dissipation(const RadialGeometry& geom, const LinearizationParams& par,
                                    int l, const HeatModeSolution& sol) {
    const int n = geom.npts;
    const double lap = mode_laplace_eigenvalue(geom.dim, l);
    const Eigen::VectorXcd g1 = geom.inner.d1 * sol.th1;
    const Eigen::VectorXcd g2 = geom.outer.d1 * sol.th2;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double ri = geom.inner.r[i];
        const double ro = geom.outer.r[i];
        acc += par.d1 * (std::norm(g1[i]) + lap * std::norm(sol.th1[i]) / (ri * ri)) *
               std::pow(ri, geom.dim - 1) * geom.inner.w[i];
        acc += par.d2 * (std::norm(g2[i]) + lap * std::norm(sol.th2[i]) / (ro * ro)) *
               std::pow(ro, geom.dim - 1) * geom.outer.w[i];
    }
    return acc;
}

/// Solve one per-mode Stokes transmission problem for harmonic degree l >= 1.
/// Tangential velocity and tangential traction are always continuous; the
/// remaining two interface rows are selected by `jumps`:
///   velocity_continuous:  [[vr]] = 0 and [[p]] - 2[[mu vr']] = g1,
///   normal_stress_pair:   [[p]] - 2[[mu vr']] = g1 and
///                         [[p/rho]] - 2[[(mu/rho) vr']] = g2.
inline StokesModeSolution stokes_transmission_solve(Complex lambda, int l,
                                                    const RadialGeometry& geom,
                                                    const LinearizationParams& par,
                                                    StokesJumps jumps, Complex g1,
                                                    Complex g2 = 0.0,
                                                    OuterClosure closure = OuterClosure::wall) {
    if (l < 1)
        throw DomainError("stokes_transmission_solve: requires harmonic degree l >= 1");
    const int n = geom.npts;
    const int dim = geom.dim;
    const double lap = mode_laplace_eigenvalue(dim, l);
    const double ct = lap + 3.0 - dim;  // vt/r^2 coefficient in the tangential momentum row
    const double big_r = geom.radius;

    // The pressure lives on the interior nodes only (a degree npts-3
    // polynomial); endpoint values follow by extension. This staggering
    // removes the near-null checkerboard pressure modes of the collocated
    // equal-order formulation. Velocities keep all npts values, so the
    // column layout is vr1, vt1, p1 (npts-2 wide), vr2, vt2, p2.
    const Eigen::MatrixXd e1 = detail::interior_extension(geom.inner);
    const Eigen::MatrixXd e2 = detail::interior_extension(geom.outer);
    const Eigen::MatrixXd dp1 = geom.inner.d1 * e1;
    const Eigen::MatrixXd dp2 = geom.outer.d1 * e2;
    const int c_vr1 = 0, c_vt1 = n, c_p1 = 2 * n;
    const int c_vr2 = 3 * n - 2, c_vt2 = 4 * n - 2, c_p2 = 5 * n - 2;
    const int size = 6 * n - 4;

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(size, size);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(size);
    int row = 0;

    auto fill_phase = [&](const CollocationInterval& iv, const Eigen::MatrixXd& dp, int cvr,
                          int cvt, int cp, double rho, double mu) {
        // Incompressibility at interior points.
        for (int i = 1; i + 1 < n; ++i, ++row) {
            const double r = iv.r[i];
            for (int c = 0; c < n; ++c) m(row, cvr + c) = iv.d1(i, c);
            m(row, cvr + i) += (dim - 1) / r;
            m(row, cvt + i) -= lap / r;
        }
        // Radial momentum at interior points.
        for (int i = 1; i + 1 < n; ++i, ++row) {
            const double r = iv.r[i];
            for (int c = 0; c < n; ++c)
                m(row, cvr + c) = -mu * (iv.d2(i, c) + (dim - 1) / r * iv.d1(i, c));
            for (int c = 0; c + 2 < n; ++c) m(row, cp + c) = dp(i, c);
            m(row, cvr + i) += rho * lambda + mu * (lap + dim - 1) / (r * r);
            m(row, cvt + i) -= mu * 2.0 * lap / (r * r);
        }
        // Tangential momentum at interior points; the pressure value at an
        // interior node is that node's own unknown.
        for (int i = 1; i + 1 < n; ++i, ++row) {
            const double r = iv.r[i];
            for (int c = 0; c < n; ++c)
                m(row, cvt + c) = -mu * (iv.d2(i, c) + (dim - 1) / r * iv.d1(i, c));
            m(row, cvt + i) += rho * lambda + mu * ct / (r * r);
            m(row, cvr + i) -= mu * 2.0 / (r * r);
            m(row, cp + i - 1) += 1.0 / r;
        }
    };

    fill_phase(geom.inner, dp1, c_vr1, c_vt1, c_p1, par.rho1, par.mu1);
    if (l == 1) {
        // Degree-one closures. The generic Robin rows degenerate to bare
        // derivative rows here; their tiny natural scale turns the offset
        // truncation error into an excitation of the near-null pressure
        // mode. Use two rows that both regular branches satisfy exactly:
        // the difference w = vr - vt obeys w - (delta0/2) w' = 0 (w is zero
        // for the translation branch and proportional to r^2 for the
        // pressure branch), and the regular pressure r^l obeys
        // delta0 p' - l p = 0. Every singular branch violates one of the
        // two at full row scale.
        for (int c = 0; c < n; ++c) {
            const double dw = -0.5 * geom.offset * geom.inner.d1(0, c);
            m(row, c_vr1 + c) = dw;
            m(row, c_vt1 + c) = -dw;
        }
        for (int c = 0; c + 2 < n; ++c)
            m(row + 1, c_p1 + c) = geom.offset * dp1(0, c) - l * e1(0, c);
        m(row, c_vr1) += 1.0;
        m(row, c_vt1) -= 1.0;
    } else {
        // Regularity closures at the inner offset: delta0 f' - (l-1) f = 0.
        for (int c = 0; c < n; ++c) {
            m(row, c_vr1 + c) = geom.offset * geom.inner.d1(0, c);
            m(row + 1, c_vt1 + c) = geom.offset * geom.inner.d1(0, c);
        }
        m(row, c_vr1) -= (l - 1);
        m(row + 1, c_vt1) -= (l - 1);
    }
    row += 2;

    fill_phase(geom.outer, dp2, c_vr2, c_vt2, c_p2, par.rho2, par.mu2);
    if (closure == OuterClosure::wall) {
        m(row, c_vr2 + n - 1) = 1.0;
        m(row + 1, c_vt2 + n - 1) = 1.0;
    } else {
        // Zero traction: 2 mu vr' - p = 0 and mu (vt' - vt/r + vr/r) = 0.
        const double rb = geom.outer_radius;
        for (int c = 0; c < n; ++c) {
            m(row, c_vr2 + c) = 2.0 * par.mu2 * geom.outer.d1(n - 1, c);
            m(row + 1, c_vt2 + c) = par.mu2 * geom.outer.d1(n - 1, c);
        }
        for (int c = 0; c + 2 < n; ++c) m(row, c_p2 + c) = -e2(n - 1, c);
        m(row + 1, c_vt2 + n - 1) -= par.mu2 / rb;
        m(row + 1, c_vr2 + n - 1) += par.mu2 / rb;
    }
    row += 2;

    // Tangential continuity and tangential traction continuity.
    m(row, c_vt2) = 1.0;
    m(row, c_vt1 + n - 1) = -1.0;
    ++row;
    for (int c = 0; c < n; ++c) {
        m(row, c_vt2 + c) = par.mu2 * geom.outer.d1(0, c);
        m(row, c_vt1 + c) = -par.mu1 * geom.inner.d1(n - 1, c);
    }
    m(row, c_vt2) -= par.mu2 / big_r;
    m(row, c_vr2) += par.mu2 / big_r;
    m(row, c_vt1 + n - 1) += par.mu1 / big_r;
    m(row, c_vr1 + n - 1) -= par.mu1 / big_r;
    ++row;

    // Normal-stress jump: [[p]] - 2 [[mu vr']] = g1, optionally weighted by
    // the reciprocal densities.
    auto stress_row = [&](double w1, double w2, Complex g) {
        for (int c = 0; c + 2 < n; ++c) {
            m(row, c_p2 + c) = w2 * e2(0, c);
            m(row, c_p1 + c) = -w1 * e1(n - 1, c);
        }
        for (int c = 0; c < n; ++c) {
            m(row, c_vr2 + c) -= 2.0 * par.mu2 * w2 * geom.outer.d1(0, c);
            m(row, c_vr1 + c) += 2.0 * par.mu1 * w1 * geom.inner.d1(n - 1, c);
        }
        rhs[row] = g;
        ++row;
    };

    if (jumps == StokesJumps::velocity_continuous) {
        m(row, c_vr2) = 1.0;
        m(row, c_vr1 + n - 1) = -1.0;
        ++row;
        stress_row(1.0, 1.0, g1);
    } else {
        stress_row(1.0, 1.0, g1);
        stress_row(1.0 / par.rho1, 1.0 / par.rho2, g2);
    }

    const Eigen::VectorXcd x =
        detail::equilibrated_solve(m, rhs, "stokes_transmission_solve");

    StokesModeSolution sol;
    sol.vr1 = x.segment(c_vr1, n);
    sol.vt1 = x.segment(c_vt1, n);
    sol.p1 = e1 * x.segment(c_p1, n - 2);
    sol.vr2 = x.segment(c_vr2, n);
    sol.vt2 = x.segment(c_vt2, n);
    sol.p2 = e2 * x.segment(c_p2, n - 2);
    sol.trace = sol.vr2[0];
    sol.k = (par.rho2 * sol.vr2[0] - par.rho1 * sol.vr1[n - 1]) / par.jump_rho();
    sol.j = (sol.vr2[0] - sol.vr1[n - 1]) / par.jump_inv_rho();
    return sol;
}

/// Kinetic weight integral of a velocity mode: rho (|vr|^2 + L |vt|^2).
inline double stokes_mode_kinetic(const RadialGeometry& geom, const LinearizationParams& par,
                                  int l, const StokesModeSolution& sol) {
    const int n = geom.npts;
    const double lap = mode_laplace_eigenvalue(geom.dim, l);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += par.rho1 * (std::norm(sol.vr1[i]) + lap * std::norm(sol.vt1[i])) *
               std::pow(geom.inner.r[i], geom.dim - 1) * geom.inner.w[i];
        acc += par.rho2 * (std::norm(sol.vr2[i]) + lap * std::norm(sol.vt2[i])) *
               std::pow(geom.outer.r[i], geom.dim - 1) * geom.outer.w[i];
    }
    return acc;
}

/// Viscous dissipation of a velocity mode: 2 mu |D(u)|^2 integrated over
/// the domain, expressed through the radial profiles.
inline double stokes_mode_dissipation(const RadialGeometry& geom, const LinearizationParams& par,
                                      int l, const StokesModeSolution& sol) {
    const int n = geom.npts;
    const int dim = geom.dim;
    const double lap = mode_laplace_eigenvalue(dim, l);
    const Eigen::VectorXcd dvr1 = geom.inner.d1 * sol.vr1;
    const Eigen::VectorXcd dvt1 = geom.inner.d1 * sol.vt1;
    const Eigen::VectorXcd dvr2 = geom.outer.d1 * sol.vr2;
    const Eigen::VectorXcd dvt2 = geom.outer.d1 * sol.vt2;

    auto phase = [&](const CollocationInterval& iv, const Eigen::VectorXcd& vr,
                     const Eigen::VectorXcd& vt, const Eigen::VectorXcd& dvr,
                     const Eigen::VectorXcd& dvt, double mu) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = iv.r[i];
            const Complex shear = dvt[i] - vt[i] / r + vr[i] / r;
            double density = std::norm(dvr[i]) + 0.5 * lap * std::norm(shear) +
                             (lap * lap - (dim - 2.0) * lap) * std::norm(vt[i]) / (r * r) -
                             2.0 * lap * std::real(vr[i] * std::conj(vt[i])) / (r * r) +
                             (dim - 1.0) * std::norm(vr[i]) / (r * r);
            acc += 2.0 * mu * density * std::pow(r, dim - 1) * iv.w[i];
        }
        return acc;
    };
    return phase(geom.inner, sol.vr1, sol.vt1, dvr1, dvt1, par.mu1) +
           phase(geom.outer, sol.vr2, sol.vt2, dvr2, dvt2, par.mu2);
}

/// Mode response of the Stokes interface problems: the 2x2 matrix mapping
/// the prescribed normal-stress jumps (g1, g2) to (k, j), the independent
/// velocity-continuous normal response, and the response to the supplied
/// data. For l = 0 against a rigid wall the volume is locked and every
/// response vanishes identically; against a reservoir the exact rank-one
/// response is returned in closed form.
struct StokesModeResponse {
    Complex s11 = 0.0, s12 = 0.0, s21 = 0.0, s22 = 0.0;
    Complex ntd = 0.0;  // velocity-continuous normal response (independent solve)
    Complex k = 0.0, j = 0.0;
    bool volume_locked = false;

    Complex schur_ntd() const { return s11 - s12 * s21 / s22; }
};

inline StokesModeResponse stokes_mode_solve(Complex lambda, int l, const RadialGeometry& geom,
                                            const LinearizationParams& par, Complex g1 = 1.0,
                                            Complex g2 = 0.0,
                                            OuterClosure closure = OuterClosure::wall) {
    if (l < 0) throw DomainError("stokes_mode_solve: harmonic degree must be nonnegative");
    StokesModeResponse resp;

    if (l == 0) {
        if (closure == OuterClosure::wall) {
            // Bounded at the center and no slip at the wall force vr = 0 in
            // both phases; the pressures absorb the jumps and k = j = 0.
            resp.volume_locked = true;
            return resp;
        }
        // Open reservoir: vr2 = C r^{1-n} with the zero-traction closure.
        // The traction balance gives -T_rr,2(R) = C Phi with
        // Phi = 2 mu2 (n-1) (R^{-n} - Rb^{-n}) + lambda rho2 Q and
        // Q the integral of s^{1-n} from R to Rb.
        const int dim = geom.dim;
        const double r0 = geom.radius;
        const double rb = geom.outer_radius;
        const double q = dim == 3 ? (1.0 / r0 - 1.0 / rb) : std::log(rb / r0);
        const Complex phi = 2.0 * par.mu2 * (dim - 1.0) *
                                (std::pow(r0, -dim) - std::pow(rb, -dim)) +
                            lambda * par.rho2 * q;
        if (std::abs(phi) < 1e-300)
            throw SolvabilityError("stokes_mode_solve: degenerate reservoir response");
        const double jr = par.jump_rho();
        const Complex base = std::pow(r0, 1.0 - dim) / (phi * jr * jr);
        resp.s11 = par.rho2 * par.rho2 * base;
        resp.s12 = -par.rho1 * resp.s11;
        resp.s21 = resp.s12;
        resp.s22 = par.rho1 * par.rho1 * resp.s11;
        resp.ntd = 0.0;  // constant data on a single sphere draws no net response
        resp.k = resp.s11 * g1 + resp.s12 * g2;
        resp.j = resp.s21 * g1 + resp.s22 * g2;
        return resp;
    }

    const StokesModeSolution col1 = stokes_transmission_solve(
        lambda, l, geom, par, StokesJumps::normal_stress_pair, 1.0, 0.0, closure);
    const StokesModeSolution col2 = stokes_transmission_solve(
        lambda, l, geom, par, StokesJumps::normal_stress_pair, 0.0, 1.0, closure);
    const StokesModeSolution sym = stokes_transmission_solve(
        lambda, l, geom, par, StokesJumps::velocity_continuous, 1.0, 0.0, closure);
    resp.s11 = col1.k;
    resp.s21 = col1.j;
    resp.s12 = col2.k;
    resp.s22 = col2.j;
    resp.ntd = sym.trace;
    resp.k = resp.s11 * g1 + resp.s12 * g2;
    resp.j = resp.s21 * g1 + resp.s22 * g2;
    return resp;
}

/// One point of the reduced dispersion relation b(lambda, l) = lambda t + sigma a_l,
/// where t is the scalar mode value of the height-response time operator
/// assembled from the Stokes response matrix and the heat mode value.
struct DispersionPoint {
    double lambda = 0.0;
    int l = 0;
    double t_value = 0.0;
    double b_value = 0.0;
    double stokes_ntd = 0.0;  // Schur-complement normal response
    double heat_ntd = 0.0;    // heat mode value (zero when the heat block decouples)
};

inline DispersionPoint reduced_dispersion_point(double lambda, int l,
                                                const RadialGeometry& geom,
                                                const LinearizationParams& par,
                                                OuterClosure closure = OuterClosure::wall) {
    if (l < 0) throw DomainError("reduced_dispersion_point: degree must be nonnegative");
    if (l == 0 && closure == OuterClosure::wall)
        throw SolvabilityError(
            "reduced_dispersion_point: the ball-constant mode is volume-locked by a rigid "
            "wall; use the reservoir closure");

    const StokesModeResponse s = stokes_mode_solve(lambda, l, geom, par, 1.0, 0.0, closure);
    const double s11 = std::real(s.s11), s12 = std::real(s.s12);
    const double s21 = std::real(s.s21), s22 = std::real(s.s22);
    if (!(std::abs(s22) > 0.0))
        throw SolvabilityError("reduced_dispersion_point: degenerate mode matrix, s22 = 0");

    const double ns = s11 - s12 * s21 / s22;
    const double g = 1.0 / s22;
    const double r = s21 / s22;
    double nh = 0.0;
    double denom = ns;
    if (par.l_star != 0.0) {
        nh = std::real(heat_ntd(lambda, l, geom, par, closure));
        denom += r * r / (par.c_star() * nh + g);
    } else {
        denom += r * r / g;
    }
    if (!(std::abs(denom) > 0.0))
        throw SolvabilityError("reduced_dispersion_point: singular response-time denominator");

    DispersionPoint p;
    p.lambda = lambda;
    p.l = l;
    p.t_value = 1.0 / denom;
    p.stokes_ntd = ns;
    p.heat_ntd = nh;
    const double a_l = linearized_curvature_mode(geom.dim, l, geom.radius);
    p.b_value = lambda * p.t_value + par.sigma * a_l;
    return p;
}

inline double reduced_dispersion(double lambda, int l, const RadialGeometry& geom,
                                 const LinearizationParams& par,
                                 OuterClosure closure = OuterClosure::wall) {
    return reduced_dispersion_point(lambda, l, geom, par, closure).b_value;
}

}  // namespace twophase
