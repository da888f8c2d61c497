// SPDX-License-Identifier: BSD-3-Clause
//
// Eigenvalue spectrum of the linearization at a spherical equilibrium,
// one harmonic degree at a time. Each degree yields a small dense
// generalized pencil (M0 + lambda M1) x = 0 in the radial mode values of
// (vr, vt, p, theta) per phase plus the interface height amplitude h:
//
//   l = 0   reduced pencil: the wall locks the volume, so the velocity
//           vanishes and only the heat profiles, the height amplitude and
//           one pressure constant per phase remain;
//   l >= 1  full pencil: momentum, incompressibility and heat in both
//           phases with the capillary, phase-flux and kinematic interface
//           rows coupling them to h;
//   rotational pencil: the toroidal velocity part (n = 3, any l >= 1) or
//           the planar swirl (n = 2, l = 0), which decouples from
//           pressure, temperature and height.
//
// Discrete eigenvalues are trusted only when they pass two gates: they
// must persist under doubling the radial resolution, and eigenpairs in
// the closed right half-plane must satisfy the energy identity
//   0 = Re lambda |rho^{1/2} u|^2 + 2 |mu^{1/2} D(u)|^2
//       + sigma Re lambda (A h | h)
//       + theta_* (Re lambda |(rho kappa)^{1/2} theta|^2 + |d^{1/2} grad theta|^2)
// to a small relative residual. Everything else is reported separately as
// non-converged, never silently merged.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "twophase/errors.hpp"
#include "twophase/geometry.hpp"
#include "twophase/mode_solvers.hpp"
#include "twophase/radial.hpp"

namespace twophase {

/// Spectrum of one harmonic degree after resolution deflation. The
/// eigenvalue list is closed under conjugation and sorted by descending
/// real part; residuals[i] is the energy-identity residual of
/// eigenvalues[i]. Values that appeared in the search window but failed
/// the resolution or energy gate are listed in non_converged.
struct ModeSpectrum {
    int l = 0;
    std::vector<Complex> eigenvalues;
    std::vector<double> residuals;
    std::vector<Complex> non_converged;
    int kernel_dim = 0;
    bool semisimple = true;
    bool rank_conclusive = true;
};

/// Dimension and Jordan structure of the eigenvalue zero, aggregated over
/// all harmonic degrees and interface components.
struct KernelReport {
    int dim = 0;
    bool semisimple = true;
    bool conclusive = true;
};

/// Instability count of the disconnected-interface configuration in the
/// non-interacting block model.
struct BlockSpectrumReport {
    int positive_eigenvalue_count = 0;
    std::vector<double> crossing_locations;
    double mu_at_zero = 0.0;
};

namespace detail {

/// Real generalized pencil a x = lambda b x. The a block collects every
/// lambda-independent row; b is the negated mass block, nonzero only on
/// the momentum, heat and kinematic rows.
struct ModePencil {
    Eigen::MatrixXd a;
    Eigen::MatrixXd b;
};

/// Column offsets of the full degree-l pencil. Pressures are staggered
/// (interior nodes only), matching the transmission solver layout.
struct FullLayout {
    int n = 0;
    int vr1 = 0, vt1 = 0, p1 = 0, th1 = 0;
    int vr2 = 0, vt2 = 0, p2 = 0, th2 = 0;
    int h = 0, size = 0;
};

inline FullLayout full_layout(int n) {
    FullLayout lo;
    lo.n = n;
    lo.vr1 = 0;
    lo.vt1 = n;
    lo.p1 = 2 * n;
    lo.th1 = 3 * n - 2;
    lo.vr2 = 4 * n - 2;
    lo.vt2 = 5 * n - 2;
    lo.p2 = 6 * n - 2;
    lo.th2 = 7 * n - 4;
    lo.h = 8 * n - 4;
    lo.size = 8 * n - 3;
    return lo;
}

/// Assemble the coupled degree-l pencil, l >= 1. The rows repeat the
/// transmission solver verbatim (same closures, same staggered pressure)
/// with the heat block added and the data slots replaced by the couplings
/// to h and theta(R): the capillarity sigma a_l h in the normal-stress
/// row, the latent-heat trace l_* theta(R) in the weighted-stress row, the
/// phase flux (l_*/theta_*) j in the heat-flux row, and the kinematic row
/// lambda h = [[rho vr]]/[[rho]].
inline ModePencil full_mode_pencil(int l, const RadialGeometry& geom,
                                   const LinearizationParams& par) {
    if (l < 1) throw DomainError("full_mode_pencil: requires harmonic degree l >= 1");
    const int n = geom.npts;
    const int dim = geom.dim;
    const double lap = mode_laplace_eigenvalue(dim, l);
    const double ct = lap + 3.0 - dim;
    const double big_r = geom.radius;
    const FullLayout lo = full_layout(n);

    const Eigen::MatrixXd e1 = interior_extension(geom.inner);
    const Eigen::MatrixXd e2 = interior_extension(geom.outer);
    const Eigen::MatrixXd dp1 = geom.inner.d1 * e1;
    const Eigen::MatrixXd dp2 = geom.outer.d1 * e2;

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(lo.size, lo.size);
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(lo.size, lo.size);
    int row = 0;

    auto fill_phase = [&](const CollocationInterval& iv, const Eigen::MatrixXd& dp, int cvr,
                          int cvt, int cp, int cth, double rho, double mu, double rho_kappa,
                          double d) {
        for (int i = 1; i + 1 < n; ++i, ++row) {
            const double r = iv.r[i];
            for (int c = 0; c < n; ++c) a(row, cvr + c) = iv.d1(i, c);
            a(row, cvr + i) += (dim - 1) / r;
            a(row, cvt + i) -= lap / r;
        }
        for (int i = 1; i + 1 < n; ++i, ++row) {
            const double r = iv.r[i];
            for (int c = 0; c < n; ++c)
                a(row, cvr + c) = -mu * (iv.d2(i, c) + (dim - 1) / r * iv.d1(i, c));
            for (int c = 0; c + 2 < n; ++c) a(row, cp + c) = dp(i, c);
            a(row, cvr + i) += mu * (lap + dim - 1) / (r * r);
            a(row, cvt + i) -= mu * 2.0 * lap / (r * r);
            mass(row, cvr + i) = rho;
        }
        for (int i = 1; i + 1 < n; ++i, ++row) {
            const double r = iv.r[i];
            for (int c = 0; c < n; ++c)
                a(row, cvt + c) = -mu * (iv.d2(i, c) + (dim - 1) / r * iv.d1(i, c));
            a(row, cvt + i) += mu * ct / (r * r);
            a(row, cvr + i) -= mu * 2.0 / (r * r);
            a(row, cp + i - 1) += 1.0 / r;
            mass(row, cvt + i) = rho;
        }
        for (int i = 1; i + 1 < n; ++i, ++row) {
            const double r = iv.r[i];
            for (int c = 0; c < n; ++c)
                a(row, cth + c) = -d * (iv.d2(i, c) + (dim - 1) / r * iv.d1(i, c));
            a(row, cth + i) += d * lap / (r * r);
            mass(row, cth + i) = rho_kappa;
        }
    };

    fill_phase(geom.inner, dp1, lo.vr1, lo.vt1, lo.p1, lo.th1, par.rho1, par.mu1,
               par.rho1 * par.kappa1, par.d1);
    if (l == 1) {
        for (int c = 0; c < n; ++c) {
            const double dw = -0.5 * geom.offset * geom.inner.d1(0, c);
            a(row, lo.vr1 + c) = dw;
            a(row, lo.vt1 + c) = -dw;
        }
        for (int c = 0; c + 2 < n; ++c)
            a(row + 1, lo.p1 + c) = geom.offset * dp1(0, c) - l * e1(0, c);
        a(row, lo.vr1) += 1.0;
        a(row, lo.vt1) -= 1.0;
    } else {
        for (int c = 0; c < n; ++c) {
            a(row, lo.vr1 + c) = geom.offset * geom.inner.d1(0, c);
            a(row + 1, lo.vt1 + c) = geom.offset * geom.inner.d1(0, c);
        }
        a(row, lo.vr1) -= (l - 1);
        a(row + 1, lo.vt1) -= (l - 1);
    }
    row += 2;
    for (int c = 0; c < n; ++c) a(row, lo.th1 + c) = geom.offset * geom.inner.d1(0, c);
    a(row, lo.th1) -= l;
    ++row;

    fill_phase(geom.outer, dp2, lo.vr2, lo.vt2, lo.p2, lo.th2, par.rho2, par.mu2,
               par.rho2 * par.kappa2, par.d2);
    a(row, lo.vr2 + n - 1) = 1.0;
    a(row + 1, lo.vt2 + n - 1) = 1.0;
    row += 2;
    for (int c = 0; c < n; ++c) a(row, lo.th2 + c) = geom.outer.d1(n - 1, c);
    ++row;

    // Interface rows at r = R: tangential continuity, tangential traction,
    // normal stress with the capillary drive, temperature continuity,
    // interfacial energy balance, weighted normal stress with the
    // latent-heat trace, and the kinematic evolution of h.
    a(row, lo.vt2) = 1.0;
    a(row, lo.vt1 + n - 1) = -1.0;
    ++row;

    for (int c = 0; c < n; ++c) {
        a(row, lo.vt2 + c) = par.mu2 * geom.outer.d1(0, c);
        a(row, lo.vt1 + c) = -par.mu1 * geom.inner.d1(n - 1, c);
    }
    a(row, lo.vt2) -= par.mu2 / big_r;
    a(row, lo.vr2) += par.mu2 / big_r;
    a(row, lo.vt1 + n - 1) += par.mu1 / big_r;
    a(row, lo.vr1 + n - 1) -= par.mu1 / big_r;
    ++row;

    auto stress_row = [&](double w1, double w2) {
        for (int c = 0; c + 2 < n; ++c) {
            a(row, lo.p2 + c) = w2 * e2(0, c);
            a(row, lo.p1 + c) = -w1 * e1(n - 1, c);
        }
        for (int c = 0; c < n; ++c) {
            a(row, lo.vr2 + c) -= 2.0 * par.mu2 * w2 * geom.outer.d1(0, c);
            a(row, lo.vr1 + c) += 2.0 * par.mu1 * w1 * geom.inner.d1(n - 1, c);
        }
    };
    stress_row(1.0, 1.0);
    a(row, lo.h) += par.sigma * linearized_curvature_mode(dim, l, big_r);
    ++row;

    a(row, lo.th2) = 1.0;
    a(row, lo.th1 + n - 1) = -1.0;
    ++row;

    for (int c = 0; c < n; ++c) {
        a(row, lo.th2 + c) = par.d2 * geom.outer.d1(0, c);
        a(row, lo.th1 + c) = -par.d1 * geom.inner.d1(n - 1, c);
    }
    {
        const double w = par.l_star / (par.theta_star * par.jump_inv_rho());
        a(row, lo.vr2) += w;
        a(row, lo.vr1 + n - 1) -= w;
    }
    ++row;

    stress_row(1.0 / par.rho1, 1.0 / par.rho2);
    a(row, lo.th2) += par.l_star;
    ++row;

    a(row, lo.vr2) -= par.rho2 / par.jump_rho();
    a(row, lo.vr1 + n - 1) += par.rho1 / par.jump_rho();
    mass(row, lo.h) = 1.0;
    ++row;

    return {std::move(a), -mass};
}

/// Assemble the reduced degree-zero pencil. Against a rigid wall the
/// ball-constant velocity mode is identically zero, so the unknowns are
/// the two heat profiles, the height amplitude and one pressure constant
/// per phase; the stress and weighted-stress rows survive as scalar
/// relations and the kinematic row degenerates to lambda h = 0.
inline ModePencil reduced_mode_pencil(const RadialGeometry& geom,
                                      const LinearizationParams& par) {
    const int n = geom.npts;
    const int dim = geom.dim;
    const int c_th1 = 0, c_th2 = n, c_h = 2 * n, c_p1 = 2 * n + 1, c_p2 = 2 * n + 2;
    const int size = 2 * n + 3;

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size, size);
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(size, size);
    int row = 0;

    auto fill_interior = [&](const CollocationInterval& iv, int cth, double rho_kappa,
                             double d) {
        for (int i = 1; i + 1 < n; ++i, ++row) {
            const double r = iv.r[i];
            for (int c = 0; c < n; ++c)
                a(row, cth + c) = -d * (iv.d2(i, c) + (dim - 1) / r * iv.d1(i, c));
            mass(row, cth + i) = rho_kappa;
        }
    };
    fill_interior(geom.inner, c_th1, par.rho1 * par.kappa1, par.d1);
    fill_interior(geom.outer, c_th2, par.rho2 * par.kappa2, par.d2);

    for (int c = 0; c < n; ++c) a(row, c_th1 + c) = geom.offset * geom.inner.d1(0, c);
    ++row;
    for (int c = 0; c < n; ++c) a(row, c_th2 + c) = geom.outer.d1(n - 1, c);
    ++row;

    a(row, c_th2) = 1.0;
    a(row, c_th1 + n - 1) = -1.0;
    ++row;

    // No flow means no phase flux, so the heat-flux jump closes to zero.
    for (int c = 0; c < n; ++c) {
        a(row, c_th2 + c) = par.d2 * geom.outer.d1(0, c);
        a(row, c_th1 + c) = -par.d1 * geom.inner.d1(n - 1, c);
    }
    ++row;

    a(row, c_p2) = 1.0;
    a(row, c_p1) = -1.0;
    a(row, c_h) = par.sigma * linearized_curvature_mode(dim, 0, geom.radius);
    ++row;

    a(row, c_p2) = 1.0 / par.rho2;
    a(row, c_p1) = -1.0 / par.rho1;
    a(row, c_th2) = par.l_star;
    ++row;

    mass(row, c_h) = 1.0;
    ++row;

    return {std::move(a), -mass};
}

/// Assemble the rotational pencil: one velocity amplitude per phase obeying
///   lambda rho T - mu (T'' + (n-1) T'/r - c_op T/r^2) = 0
/// with regularity T ~ r^{s_reg} at the center, continuity of T and of the
/// traction mu (T' - T/r) at the interface, and no slip at the wall.
inline ModePencil rotational_mode_pencil(double c_op, double s_reg,
                                         const RadialGeometry& geom,
                                         const LinearizationParams& par) {
    const int n = geom.npts;
    const int dim = geom.dim;
    const int c_t1 = 0, c_t2 = n;
    const int size = 2 * n;

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size, size);
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(size, size);
    int row = 0;

    auto fill_interior = [&](const CollocationInterval& iv, int ct, double rho, double mu) {
        for (int i = 1; i + 1 < n; ++i, ++row) {
            const double r = iv.r[i];
            for (int c = 0; c < n; ++c)
                a(row, ct + c) = -mu * (iv.d2(i, c) + (dim - 1) / r * iv.d1(i, c));
            a(row, ct + i) += mu * c_op / (r * r);
            mass(row, ct + i) = rho;
        }
    };
    fill_interior(geom.inner, c_t1, par.rho1, par.mu1);
    fill_interior(geom.outer, c_t2, par.rho2, par.mu2);

    for (int c = 0; c < n; ++c) a(row, c_t1 + c) = geom.offset * geom.inner.d1(0, c);
    a(row, c_t1) -= s_reg;
    ++row;
    a(row, c_t2 + n - 1) = 1.0;
    ++row;

    a(row, c_t2) = 1.0;
    a(row, c_t1 + n - 1) = -1.0;
    ++row;
    for (int c = 0; c < n; ++c) {
        a(row, c_t2 + c) = par.mu2 * geom.outer.d1(0, c);
        a(row, c_t1 + c) = -par.mu1 * geom.inner.d1(n - 1, c);
    }
    a(row, c_t2) -= par.mu2 / geom.radius;
    a(row, c_t1 + n - 1) += par.mu1 / geom.radius;
    ++row;

    return {std::move(a), -mass};
}

/// Equilibrate rows of the pencil in place, scaling a and b jointly so the
/// row norms stay comparable between derivative stencils and order-one
/// interface rows. Row scaling changes neither eigenvalues nor kernels.
inline void equilibrate_pencil(Eigen::MatrixXd& a, Eigen::MatrixXd& b) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const double s =
            std::max(a.row(i).cwiseAbs().maxCoeff(), b.row(i).cwiseAbs().maxCoeff());
        if (s > 0.0) {
            a.row(i) /= s;
            b.row(i) /= s;
        }
    }
}

/// All finite eigenvalues of the pencil via the QZ iteration. The
/// constraint rows carry no mass, so the pencil has many infinite
/// eigenvalues; they are filtered on the beta scale, along with values
/// too large to be meaningful on any grid.
inline std::vector<Complex> pencil_eigenvalues(const ModePencil& pen) {
    Eigen::MatrixXd a = pen.a;
    Eigen::MatrixXd b = pen.b;
    equilibrate_pencil(a, b);
    Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges;
    ges.compute(a, b, false);
    if (ges.info() != Eigen::Success)
        throw ConvergenceError("pencil_eigenvalues: QZ iteration did not converge");
    std::vector<Complex> out;
    for (Eigen::Index i = 0; i < ges.alphas().size(); ++i) {
        const Complex alpha = ges.alphas()[i];
        const double beta = ges.betas()[i];
        if (std::abs(beta) <= 1e-11 * std::max(1.0, std::abs(alpha))) continue;
        const Complex lam = alpha / beta;
        if (std::abs(lam) > 1e8) continue;
        out.push_back(lam);
    }
    return out;
}

/// Eigenvector for a computed eigenvalue: the right singular vector of
/// a - lambda b with the smallest singular value.
inline Eigen::VectorXcd pencil_null_vector(const ModePencil& pen, Complex lambda) {
    Eigen::MatrixXcd m = pen.a.cast<Complex>() - lambda * pen.b.cast<Complex>();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double s = m.row(i).cwiseAbs().maxCoeff();
        if (s > 0.0) m.row(i) /= s;
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinV);
    return svd.matrixV().col(m.cols() - 1);
}

/// Kernel dimension of the pencil at lambda = 0 and the Jordan test: zero
/// is semisimple iff no kernel direction continues into a generalized
/// eigenvector, i.e. iff [a | b X0] has full row rank for a kernel basis
/// X0. Singular values within a factor ten of the rank threshold make the
/// decision inconclusive rather than silently picking a side.
inline void kernel_structure(const ModePencil& pen, int& kdim, bool& semisimple,
                             bool& conclusive) {
    Eigen::MatrixXd a = pen.a;
    Eigen::MatrixXd b = pen.b;
    equilibrate_pencil(a, b);

    Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    // Rank threshold anchored to the roundoff floor of the equilibrated
    // pencil. Kernel directions land at most a few hundred epsilon above
    // zero, while the smallest physical singular values shrink only like a
    // small power of the grid size, so this split stays conclusive under
    // refinement where a fixed fraction of sv[0] would not.
    const double tau = 1e3 * std::numeric_limits<double>::epsilon() *
                       static_cast<double>(std::max(a.rows(), a.cols())) * sv[0];
    kdim = 0;
    conclusive = true;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv[i] <= tau) ++kdim;
        if (sv[i] > 0.1 * tau && sv[i] < 10.0 * tau) conclusive = false;
    }
    semisimple = true;
    if (kdim == 0) return;

    const Eigen::MatrixXd x0 = svd.matrixV().rightCols(kdim);
    Eigen::MatrixXd aug(a.rows(), a.cols() + kdim);
    aug << a, b * x0;
    Eigen::BDCSVD<Eigen::MatrixXd> asvd(aug);
    const Eigen::VectorXd& asv = asvd.singularValues();
    semisimple = asv[asv.size() - 1] > tau;
    for (Eigen::Index i = 0; i < asv.size(); ++i)
        if (asv[i] > 0.1 * tau && asv[i] < 10.0 * tau) conclusive = false;
}

/// Floor below which the identity terms of a unit eigenvector count as
/// identically zero. Kernel vectors (constant temperature, pure height
/// shift) reach ~1e-20 through differentiation roundoff; any direction
/// with genuine velocity or temperature content sits many orders higher.
inline bool energy_terms_vanish(double den, Complex lambda) {
    return den <= 1e-9 * (1.0 + std::abs(lambda));
}

/// Energy-identity residual of a full-pencil eigenpair, relative to the
/// sum of the magnitudes of its terms. Kernel vectors make every term
/// vanish; they return zero by convention.
inline double full_mode_energy_residual(Complex lambda, int l, const RadialGeometry& geom,
                                        const LinearizationParams& par,
                                        const Eigen::VectorXcd& x) {
    const int n = geom.npts;
    const FullLayout lo = full_layout(n);

    StokesModeSolution u;
    u.vr1 = x.segment(lo.vr1, n);
    u.vt1 = x.segment(lo.vt1, n);
    u.vr2 = x.segment(lo.vr2, n);
    u.vt2 = x.segment(lo.vt2, n);
    HeatModeSolution th;
    th.th1 = x.segment(lo.th1, n);
    th.th2 = x.segment(lo.th2, n);
    const Complex h = x[lo.h];

    const double kin = stokes_mode_kinetic(geom, par, l, u);
    const double dis = stokes_mode_dissipation(geom, par, l, u);
    const double he = heat_mode_energy(geom, par, th);
    const double hd = heat_mode_dissipation(geom, par, l, th);
    const double cap = par.sigma * linearized_curvature_mode(geom.dim, l, geom.radius) *
                       std::norm(h) * std::pow(geom.radius, geom.dim - 1);
    const double rp = lambda.real();

    const double num = rp * kin + dis + rp * cap + par.theta_star * (rp * he + hd);
    const double den = std::abs(rp) * kin + dis + std::abs(rp * cap) +
                       par.theta_star * (std::abs(rp) * he + hd);
    if (energy_terms_vanish(den, lambda)) return 0.0;
    return std::abs(num) / den;
}

/// Energy-identity residual of a reduced degree-zero eigenpair: the
/// velocity is zero, so only the heat and capillary terms remain.
inline double reduced_mode_energy_residual(Complex lambda, const RadialGeometry& geom,
                                           const LinearizationParams& par,
                                           const Eigen::VectorXcd& x) {
    const int n = geom.npts;
    HeatModeSolution th;
    th.th1 = x.segment(0, n);
    th.th2 = x.segment(n, n);
    const Complex h = x[2 * n];

    const double he = heat_mode_energy(geom, par, th);
    const double hd = heat_mode_dissipation(geom, par, 0, th);
    const double cap = par.sigma * linearized_curvature_mode(geom.dim, 0, geom.radius) *
                       std::norm(h) * std::pow(geom.radius, geom.dim - 1);
    const double rp = lambda.real();

    const double num = rp * cap + par.theta_star * (rp * he + hd);
    const double den = std::abs(rp * cap) + par.theta_star * (std::abs(rp) * he + hd);
    if (energy_terms_vanish(den, lambda)) return 0.0;
    return std::abs(num) / den;
}

/// Energy-identity residual of a rotational eigenpair,
///   0 = Re lambda int rho |T|^2 r^{n-1}
///       + int mu (|T' - T/r|^2 + (c_op - n + 1) |T|^2 / r^2) r^{n-1},
/// the integration-by-parts form of the mode equation under the interface
/// and wall conditions.
inline double rotational_mode_energy_residual(Complex lambda, double c_op,
                                              const RadialGeometry& geom,
                                              const LinearizationParams& par,
                                              const Eigen::VectorXcd& x) {
    const int n = geom.npts;
    const int dim = geom.dim;
    const Eigen::VectorXcd t1 = x.segment(0, n);
    const Eigen::VectorXcd t2 = x.segment(n, n);
    const Eigen::VectorXcd g1 = geom.inner.d1 * t1;
    const Eigen::VectorXcd g2 = geom.outer.d1 * t2;

    double kin = 0.0, dis = 0.0;
    auto phase = [&](const CollocationInterval& iv, const Eigen::VectorXcd& t,
                     const Eigen::VectorXcd& g, double rho, double mu) {
        for (int i = 0; i < n; ++i) {
            const double r = iv.r[i];
            const double w = std::pow(r, dim - 1) * iv.w[i];
            kin += rho * std::norm(t[i]) * w;
            dis += mu *
                   (std::norm(g[i] - t[i] / r) + (c_op - dim + 1) * std::norm(t[i]) / (r * r)) *
                   w;
        }
    };
    phase(geom.inner, t1, g1, par.rho1, par.mu1);
    phase(geom.outer, t2, g2, par.rho2, par.mu2);

    const double rp = lambda.real();
    const double num = rp * kin + dis;
    const double den = std::abs(rp) * kin + dis;
    if (energy_terms_vanish(den, lambda)) return 0.0;
    return std::abs(num) / den;
}

/// Resolution deflation and gating shared by all pencil kinds. Fine-grid
/// window values are matched greedily (nearest first by magnitude) against
/// unconsumed coarse values; a match within 1e-7 relative promotes the
/// fine value, anything else is non-converged. Promoted right-half-plane
/// values must additionally pass the energy-identity gate.
template <typename Residual>
ModeSpectrum deflated_spectrum(int l, const ModePencil& coarse, const ModePencil& fine,
                               double delta, double ztol, Residual&& residual) {
    ModeSpectrum spec;
    spec.l = l;

    const std::vector<Complex> ec = pencil_eigenvalues(coarse);
    const std::vector<Complex> ef = pencil_eigenvalues(fine);

    std::vector<Complex> window;
    for (const Complex& z : ef)
        if (z.real() >= -delta) window.push_back(z);
    std::sort(window.begin(), window.end(),
              [](const Complex& x, const Complex& y) { return std::abs(x) < std::abs(y); });

    std::vector<bool> used(ec.size(), false);
    std::vector<std::pair<Complex, double>> kept;
    for (const Complex& z : window) {
        int best = -1;
        double dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < ec.size(); ++i) {
            if (used[i]) continue;
            const double d = std::abs(ec[i] - z);
            if (d < dist) {
                dist = d;
                best = static_cast<int>(i);
            }
        }
        if (best < 0 || dist > 1e-7 * std::max(1.0, std::abs(z))) {
            spec.non_converged.push_back(z);
            continue;
        }
        used[best] = true;

        const Complex lam = std::abs(z) <= ztol ? Complex(0.0) : z;
        const Eigen::VectorXcd v = pencil_null_vector(fine, lam);
        const double res = residual(lam, v);
        if (lam.real() >= 0.0 && !(res <= 1e-6)) {
            spec.non_converged.push_back(lam);
            continue;
        }
        kept.emplace_back(lam, res);
    }

    auto by_real_desc = [](const Complex& x, const Complex& y) {
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() < y.imag();
    };
    std::sort(kept.begin(), kept.end(),
              [&](const auto& x, const auto& y) { return by_real_desc(x.first, y.first); });
    for (const auto& [lam, res] : kept) {
        spec.eigenvalues.push_back(lam);
        spec.residuals.push_back(res);
    }
    std::sort(spec.non_converged.begin(), spec.non_converged.end(), by_real_desc);

    kernel_structure(fine, spec.kernel_dim, spec.semisimple, spec.rank_conclusive);
    return spec;
}

inline double default_window(const RadialGeometry& geom, const LinearizationParams& par) {
    return 0.5 * par.sigma * (geom.dim - 1) / (geom.radius * geom.radius);
}

inline double zero_snap_tolerance(const RadialGeometry& geom, const LinearizationParams& par) {
    return 1e-8 * std::max(1.0, par.sigma * (geom.dim - 1) / (geom.radius * geom.radius));
}

}  // namespace detail

/// Spectrum of the coupled (velocity, temperature, height) block at one
/// harmonic degree, within the half-plane Re lambda >= -delta. A negative
/// delta selects the default window, half the capillary scale
/// sigma (n-1)/R^2. Degree zero uses the reduced pencil.
inline ModeSpectrum full_mode_eigenvalues(int l, const RadialGeometry& geom,
                                          const LinearizationParams& par,
                                          double delta = -1.0) {
    if (l < 0) throw DomainError("full_mode_eigenvalues: harmonic degree must be nonnegative");
    if (delta < 0.0) delta = detail::default_window(geom, par);
    const double ztol = detail::zero_snap_tolerance(geom, par);
    const RadialGeometry fine = geom.with_npts(2 * geom.npts);

    if (l == 0) {
        const detail::ModePencil pc = detail::reduced_mode_pencil(geom, par);
        const detail::ModePencil pf = detail::reduced_mode_pencil(fine, par);
        return detail::deflated_spectrum(
            0, pc, pf, delta, ztol, [&](Complex lam, const Eigen::VectorXcd& x) {
                return detail::reduced_mode_energy_residual(lam, fine, par, x);
            });
    }
    const detail::ModePencil pc = detail::full_mode_pencil(l, geom, par);
    const detail::ModePencil pf = detail::full_mode_pencil(l, fine, par);
    return detail::deflated_spectrum(
        l, pc, pf, delta, ztol, [&](Complex lam, const Eigen::VectorXcd& x) {
            return detail::full_mode_energy_residual(lam, l, fine, par, x);
        });
}

/// Spectrum of the rotational velocity block, which carries no pressure,
/// temperature or height coupling: the toroidal part for n = 3 (degree
/// l >= 1) or the planar swirl for n = 2 (degree 0 only; planar degrees
/// l >= 1 carry both velocity components in the coupled pencil already).
inline ModeSpectrum toroidal_mode_eigenvalues(int l, const RadialGeometry& geom,
                                              const LinearizationParams& par,
                                              double delta = -1.0) {
    double c_op = 0.0, s_reg = 0.0;
    if (geom.dim == 3) {
        if (l < 1)
            throw DomainError(
                "toroidal_mode_eigenvalues: the toroidal block starts at degree 1");
        c_op = mode_laplace_eigenvalue(3, l);
        s_reg = l;
    } else {
        if (l != 0)
            throw DomainError(
                "toroidal_mode_eigenvalues: the planar swirl block exists only at degree 0");
        c_op = 1.0;
        s_reg = 1.0;
    }
    if (delta < 0.0) delta = detail::default_window(geom, par);
    const double ztol = detail::zero_snap_tolerance(geom, par);
    const RadialGeometry fine = geom.with_npts(2 * geom.npts);

    const detail::ModePencil pc = detail::rotational_mode_pencil(c_op, s_reg, geom, par);
    const detail::ModePencil pf = detail::rotational_mode_pencil(c_op, s_reg, fine, par);
    return detail::deflated_spectrum(
        l, pc, pf, delta, ztol, [&, c_op](Complex lam, const Eigen::VectorXcd& x) {
            return detail::rotational_mode_energy_residual(lam, c_op, fine, par, x);
        });
}

/// Dimension and semisimplicity of the eigenvalue zero for m well-separated
/// balls of equal radius. Degree zero contributes the uniform temperature
/// and uniform height directions once; degree one contributes one
/// translation direction per spatial axis per ball. Higher degrees carry
/// no kernel because their capillary term is strictly stabilizing.
inline KernelReport kernel_analysis(const RadialGeometry& geom, const LinearizationParams& par,
                                    int m = 1) {
    if (m < 1) throw DomainError("kernel_analysis: need at least one ball");
    const ModeSpectrum s0 = full_mode_eigenvalues(0, geom, par);
    const ModeSpectrum s1 = full_mode_eigenvalues(1, geom, par);
    KernelReport rep;
    rep.dim = s0.kernel_dim + geom.dim * s1.kernel_dim * m;
    rep.semisimple = s0.semisimple && s1.semisimple;
    rep.conclusive = s0.rank_conclusive && s1.rank_conclusive;
    return rep;
}

/// Instability count for m equal balls in the non-interacting block model.
/// On the mean-zero span of per-ball-constant height functions the
/// linearization acts through the scalar curve
///   mu(lambda) = lambda t(lambda) + sigma a_0,
/// with t the ball-constant response time against an open reservoir. The
/// curve starts at sigma a_0 < 0 and grows without bound, so it crosses
/// zero once; each of the m-1 mean-zero directions contributes one
/// positive eigenvalue at that crossing. A single ball has no mean-zero
/// direction and no instability.
inline BlockSpectrumReport multi_ball_block_spectrum(int m, const RadialGeometry& geom,
                                                     const LinearizationParams& par) {
    if (m < 1) throw DomainError("multi_ball_block_spectrum: need at least one ball");
    BlockSpectrumReport rep;
    rep.mu_at_zero = par.sigma * linearized_curvature_mode(geom.dim, 0, geom.radius);
    if (m == 1) return rep;

    auto mu = [&](double lam) {
        return reduced_dispersion(lam, 0, geom, par, OuterClosure::reservoir);
    };
    if (!(mu(0.0) < 0.0))
        throw SolvabilityError(
            "multi_ball_block_spectrum: the ball-constant curve does not start negative");

    double lo = 0.0;
    double hi = 1.0;
    int guard = 0;
    while (mu(hi) <= 0.0) {
        lo = hi;
        hi *= 10.0;
        if (++guard > 40)
            throw ConvergenceError(
                "multi_ball_block_spectrum: no sign change of the ball-constant curve");
    }
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (mu(mid) <= 0.0)
            lo = mid;
        else
            hi = mid;
    }

    rep.positive_eigenvalue_count = m - 1;
    rep.crossing_locations.assign(m - 1, 0.5 * (lo + hi));
    return rep;
}

}  // namespace twophase
