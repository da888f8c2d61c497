// SPDX-License-Identifier: BSD-3-Clause
//
// Radial collocation scaffolding for the per-mode solvers: Chebyshev
// extrema grids with differentiation matrices and Clenshaw-Curtis
// quadrature weights on the two subintervals [delta0, R] and [R, R_out],
// plus the frozen linearization coefficients evaluated at the equilibrium
// temperature. The tiny inner offset delta0 stands in for the coordinate
// singularity at r = 0; regularity is enforced through Robin closures
// supplied by the individual solvers.

#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "twophase/errors.hpp"
#include "twophase/thermo.hpp"

namespace twophase {

/// One collocation subinterval: ascending points, first and second
/// derivative matrices, and quadrature weights for integrals against dr.
struct CollocationInterval {
    Eigen::VectorXd r;
    Eigen::MatrixXd d1;
    Eigen::MatrixXd d2;
    Eigen::VectorXd w;
};

/// Chebyshev-extrema collocation on [a, b] with npts points. The
/// differentiation matrix is the standard barycentric form; the weights are
/// Clenshaw-Curtis, exact for polynomials of degree < npts.
inline CollocationInterval make_interval(double a, double b, int npts) {
    if (!(b > a)) throw DomainError("make_interval: requires b > a");
    if (npts < 4) throw DomainError("make_interval: requires at least 4 points");
    const int n = npts - 1;

    CollocationInterval iv;
    iv.r.resize(npts);
    Eigen::VectorXd x(npts);  // extrema of T_n, descending on [-1, 1]
    for (int j = 0; j <= n; ++j) {
        x[j] = std::cos(std::numbers::pi * j / n);
        iv.r[j] = 0.5 * (a + b) - 0.5 * (b - a) * x[j];  // ascending on [a, b]
    }

    // Differentiation matrix on the reference points, then the chain rule
    // for the affine (and orientation-reversing) map to [a, b].
    Eigen::MatrixXd d(npts, npts);
    auto c = [n](int j) { return (j == 0 || j == n) ? 2.0 : 1.0; };
    for (int i = 0; i <= n; ++i) {
        double diag = 0.0;
        for (int j = 0; j <= n; ++j) {
            if (i == j) continue;
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            d(i, j) = (c(i) / c(j)) * sign / (x[i] - x[j]);
            diag -= d(i, j);
        }
        d(i, i) = diag;
    }
    iv.d1 = (-2.0 / (b - a)) * d;
    iv.d2 = iv.d1 * iv.d1;

    // Clenshaw-Curtis weights on [-1, 1], then scaled by the interval
    // half-width. Symmetric in j, so the reversed ordering needs no flip.
    Eigen::VectorXd w = Eigen::VectorXd::Zero(npts);
    if (n % 2 == 0) {
        w[0] = w[n] = 1.0 / (n * n - 1.0);
        for (int j = 1; j < n; ++j) {
            double v = 1.0;
            for (int k = 1; k <= n / 2 - 1; ++k)
                v -= 2.0 * std::cos(2.0 * k * std::numbers::pi * j / n) / (4.0 * k * k - 1.0);
            v -= std::cos(std::numbers::pi * j) / (n * n - 1.0);
            w[j] = 2.0 * v / n;
        }
    } else {
        w[0] = w[n] = 1.0 / (n * n);
        for (int j = 1; j < n; ++j) {
            double v = 1.0;
            for (int k = 1; k <= (n - 1) / 2; ++k)
                v -= 2.0 * std::cos(2.0 * k * std::numbers::pi * j / n) / (4.0 * k * k - 1.0);
            w[j] = 2.0 * v / n;
        }
    }
    iv.w = 0.5 * (b - a) * w;
    return iv;
}

/// Concentric radial geometry for the mode solvers: phase 1 occupies
/// [delta0, R], phase 2 occupies [R, R_out], with npts collocation points
/// on each subinterval.
struct RadialGeometry {
    int dim = 3;
    double radius = 1.0;
    double outer_radius = 2.0;
    int npts = 24;
    double offset = 1e-6;  // delta0, absolute
    CollocationInterval inner;
    CollocationInterval outer;

    /// Same geometry at a different resolution (used by the refinement gate).
    RadialGeometry with_npts(int n) const;
};

inline RadialGeometry make_radial_geometry(int n, double radius, double outer_radius,
                                           int npts, double offset_factor = 1e-6) {
    if (n != 2 && n != 3) throw DomainError("make_radial_geometry: dim must be 2 or 3");
    if (!(radius > 0.0)) throw DomainError("make_radial_geometry: radius must be positive");
    if (!(outer_radius > radius))
        throw DomainError("make_radial_geometry: outer radius must exceed the interface radius");
    if (!(offset_factor > 0.0) || !(offset_factor < 1e-2))
        throw DomainError("make_radial_geometry: offset factor must lie in (0, 1e-2)");
    RadialGeometry g;
    g.dim = n;
    g.radius = radius;
    g.outer_radius = outer_radius;
    g.npts = npts;
    g.offset = offset_factor * radius;
    g.inner = make_interval(g.offset, radius, npts);
    g.outer = make_interval(radius, outer_radius, npts);
    return g;
}

inline RadialGeometry RadialGeometry::with_npts(int n) const {
    return make_radial_geometry(dim, radius, outer_radius, n, offset / radius);
}

/// Coefficients of the linearization frozen at the equilibrium temperature:
/// viscosities, heat capacities and conductivities per phase, densities,
/// surface tension, the latent heat and its quadratic coupling constant.
struct LinearizationParams {
    double rho1 = 1.0, rho2 = 2.0;
    double mu1 = 1.0, mu2 = 1.0;        // mu(theta_star)
    double kappa1 = 1.0, kappa2 = 1.0;  // kappa(theta_star)
    double d1 = 1.0, d2 = 1.0;          // d(theta_star)
    double sigma = 1.0;
    double theta_star = 1.0;
    double l_star = 0.0;  // latent heat at theta_star; zero decouples the heat block

    double c_star() const { return l_star * l_star / theta_star; }
    double jump_rho() const { return rho2 - rho1; }
    double jump_inv_rho() const { return 1.0 / rho2 - 1.0 / rho1; }

    void validate() const {
        if (!(rho1 > 0.0) || !(rho2 > 0.0) || rho1 == rho2)
            throw DomainError("LinearizationParams: densities must be positive and distinct");
        if (!(mu1 > 0.0) || !(mu2 > 0.0) || !(kappa1 > 0.0) || !(kappa2 > 0.0) ||
            !(d1 > 0.0) || !(d2 > 0.0))
            throw DomainError("LinearizationParams: transport coefficients must be positive");
        if (!(sigma > 0.0)) throw DomainError("LinearizationParams: sigma must be positive");
        if (!(theta_star > 0.0))
            throw DomainError("LinearizationParams: theta_star must be positive");
    }

    static LinearizationParams from_material(const MaterialParams& mat, double theta_star) {
        const PhaseEval e1 = eval_phase(mat.phase1, theta_star);
        const PhaseEval e2 = eval_phase(mat.phase2, theta_star);
        LinearizationParams p;
        p.rho1 = mat.rho1;
        p.rho2 = mat.rho2;
        p.mu1 = e1.mu;
        p.mu2 = e2.mu;
        p.kappa1 = e1.kappa;
        p.kappa2 = e2.kappa;
        p.d1 = e1.d;
        p.d2 = e2.d;
        p.sigma = mat.sigma;
        p.theta_star = theta_star;
        p.l_star = latent_heat(mat, theta_star);
        p.validate();
        return p;
    }
};

/// Mode multiplicity helpers shared by the solvers: the surface Laplacian
/// eigenvalue of degree-l harmonics and the measure of the interface sphere.
inline double mode_laplace_eigenvalue(int n, int l) {
    return static_cast<double>(l) * (l + n - 2);
}

inline double sphere_measure(int n, double radius) {
    const double area = 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
    return area * std::pow(radius, n - 1);
}

}  // namespace twophase
