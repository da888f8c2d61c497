// SPDX-License-Identifier: BSD-3-Clause
//
// Orthonormal real harmonics on the unit sphere S^{n-1} for n in {2, 3},
// with quadrature nodes, analysis/synthesis transforms, and tangential
// derivatives in the local orthonormal frame.
//
// n = 2: Fourier modes on the circle, uniform nodes.
// n = 3: real spherical harmonics on a Gauss-Legendre x uniform-longitude
//        grid. Associated Legendre functions use the fully normalized
//        three-term recurrences, stable to high degree.
//
// The quadrature integrates products of any two basis functions exactly
// (degrees up to 2*lmax), which makes analysis the exact inverse of
// synthesis for band-limited data.

#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "twophase/errors.hpp"

namespace twophase {

/// One harmonic mode: degree l, azimuthal order m, and whether the
/// longitude factor is the cosine or the sine branch (n = 3 only; for n = 2
/// the mode is the Fourier pair itself and l == m).
struct HarmonicMode {
    int l = 0;
    int m = 0;
    bool sine = false;
};

/// Precomputed grid, quadrature, and transform tables on the unit sphere.
struct SphereBasis {
    int dim = 3;   // ambient dimension n
    int lmax = 0;  // highest resolved degree

    Eigen::VectorXd colat;  // node colatitude theta (n = 3); pi/2 for n = 2
    Eigen::VectorXd lon;    // node longitude phi
    Eigen::VectorXd w;      // quadrature weights for the surface measure

    Eigen::MatrixXd y;   // node x mode basis values
    Eigen::MatrixXd dt;  // node x mode: d/dtheta (zero for n = 2)
    Eigen::MatrixXd dp;  // node x mode: (1/sin theta) d/dphi; d/dphi for n = 2

    std::vector<HarmonicMode> modes;

    int node_count() const { return static_cast<int>(w.size()); }
    int mode_count() const { return static_cast<int>(modes.size()); }

    /// Eigenvalue of the Laplace-Beltrami operator on degree-l harmonics.
    double laplace_eigenvalue(int l) const { return -static_cast<double>(l) * (l + dim - 2); }
};

namespace detail {

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Legendre recurrence.
inline void gauss_legendre(int n, Eigen::VectorXd& x, Eigen::VectorXd& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt_newton = p1 / pp;
            t -= dt_newton;
            if (std::abs(dt_newton) < 1e-15) break;
        }
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * pp * pp);
    }
}

/// Fully normalized associated Legendre values P(l, m) at one x = cos(theta),
/// all degrees m <= l <= lmax for all orders m. Output indexed [m][l - m].
/// Normalization: integral over [-1, 1] of P(l,m)^2 dx = 1.
inline std::vector<std::vector<double>> normalized_legendre(int lmax, double x) {
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));  // sin(theta)
    std::vector<std::vector<double>> p(lmax + 1);
    double pmm = 1.0 / std::sqrt(2.0);  // P(0,0)
    for (int m = 0; m <= lmax; ++m) {
        if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
        auto& col = p[m];
        col.resize(lmax - m + 1);
        col[0] = pmm;
        if (m < lmax) col[1] = std::sqrt(2.0 * m + 3.0) * x * pmm;
        for (int l = m + 2; l <= lmax; ++l) {
            const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - m * m));
            const double b =
                std::sqrt((4.0 * (l - 1.0) * (l - 1.0) - 1.0) /
                          ((l - 1.0) * (l - 1.0) - static_cast<double>(m) * m));
            col[l - m] = a * (x * col[l - 1 - m] - col[l - 2 - m] / b);
        }
    }
    return p;
}

}  // namespace detail

/// Build the basis for the circle (n = 2). Modes: constant, then
/// cos(m phi), sin(m phi) for m = 1..lmax, all orthonormal.
inline SphereBasis make_circle_basis(int lmax, int node_count = 0) {
    if (lmax < 1) throw DomainError("basis: lmax must be at least 1");
    const int nn = node_count > 0 ? node_count : 4 * (lmax + 1);
    if (nn <= 2 * lmax) throw ResolutionError("basis: too few nodes for the requested degree");

    SphereBasis b;
    b.dim = 2;
    b.lmax = lmax;
    b.colat = Eigen::VectorXd::Constant(nn, std::numbers::pi / 2.0);
    b.lon.resize(nn);
    b.w = Eigen::VectorXd::Constant(nn, 2.0 * std::numbers::pi / nn);
    for (int i = 0; i < nn; ++i) b.lon[i] = 2.0 * std::numbers::pi * i / nn;

    const int nm = 1 + 2 * lmax;
    b.modes.reserve(nm);
    b.modes.push_back({0, 0, false});
    for (int m = 1; m <= lmax; ++m) {
        b.modes.push_back({m, m, false});
        b.modes.push_back({m, m, true});
    }
    b.y.resize(nn, nm);
    b.dt = Eigen::MatrixXd::Zero(nn, nm);
    b.dp.resize(nn, nm);
    const double c0 = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    const double cm = 1.0 / std::sqrt(std::numbers::pi);
    for (int i = 0; i < nn; ++i) {
        b.y(i, 0) = c0;
        b.dp(i, 0) = 0.0;
        for (int m = 1; m <= lmax; ++m) {
            const double c = std::cos(m * b.lon[i]), s = std::sin(m * b.lon[i]);
            b.y(i, 2 * m - 1) = cm * c;
            b.y(i, 2 * m) = cm * s;
            b.dp(i, 2 * m - 1) = -cm * m * s;
            b.dp(i, 2 * m) = cm * m * c;
        }
    }
    return b;
}

/// Build the basis for the two-sphere (n = 3) on a Gauss-Legendre grid with
/// lmax + 1 colatitude rings; longitude count resolves products exactly.
inline SphereBasis make_sphere_basis_3d(int lmax) {
    if (lmax < 1) throw DomainError("basis: lmax must be at least 1");
    const int nt = lmax + 1;
    const int np = 4 * (lmax + 1);

    Eigen::VectorXd xg, wg;
    detail::gauss_legendre(nt, xg, wg);

    SphereBasis b;
    b.dim = 3;
    b.lmax = lmax;
    const int nn = nt * np;
    b.colat.resize(nn);
    b.lon.resize(nn);
    b.w.resize(nn);

    const int nm = (lmax + 1) * (lmax + 1);
    b.modes.reserve(nm);
    for (int l = 0; l <= lmax; ++l) {
        b.modes.push_back({l, 0, false});
        for (int m = 1; m <= l; ++m) {
            b.modes.push_back({l, m, false});
            b.modes.push_back({l, m, true});
        }
    }
    b.y.resize(nn, nm);
    b.dt.resize(nn, nm);
    b.dp.resize(nn, nm);

    const double wphi = 2.0 * std::numbers::pi / np;
    const double f0 = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    const double fm = 1.0 / std::sqrt(std::numbers::pi);

    for (int it = 0; it < nt; ++it) {
        const double x = xg[it];
        const double sth = std::sqrt(1.0 - x * x);
        const auto p = detail::normalized_legendre(lmax, x);
        for (int ip = 0; ip < np; ++ip) {
            const int i = it * np + ip;
            const double phi = wphi * ip;
            b.colat[i] = std::acos(x);
            b.lon[i] = phi;
            b.w[i] = wg[it] * wphi;
            int k = 0;
            for (int l = 0; l <= lmax; ++l) {
                for (int m = 0; m <= l; ++m) {
                    const double plm = p[m][l - m];
                    // d/dtheta via (l x P(l,m) - c(l,m) P(l-1,m)) / sin(theta).
                    const double clm =
                        l == m ? 0.0
                               : std::sqrt((2.0 * l + 1.0) *
                                           (static_cast<double>(l) * l - m * m) /
                                           (2.0 * l - 1.0));
                    const double plm1 = l == m ? 0.0 : p[m][l - 1 - m];
                    const double dtheta = (l * x * plm - clm * plm1) / sth;
                    if (m == 0) {
                        b.y(i, k) = f0 * plm;
                        b.dt(i, k) = f0 * dtheta;
                        b.dp(i, k) = 0.0;
                        ++k;
                    } else {
                        const double c = std::cos(m * phi), s = std::sin(m * phi);
                        b.y(i, k) = fm * plm * c;
                        b.dt(i, k) = fm * dtheta * c;
                        b.dp(i, k) = -fm * (plm / sth) * m * s;
                        ++k;
                        b.y(i, k) = fm * plm * s;
                        b.dt(i, k) = fm * dtheta * s;
                        b.dp(i, k) = fm * (plm / sth) * m * c;
                        ++k;
                    }
                }
            }
        }
    }
    return b;
}

/// Build the basis for ambient dimension n in {2, 3}.
inline SphereBasis make_sphere_basis(int n, int lmax) {
    if (n == 2) return make_circle_basis(lmax);
    if (n == 3) return make_sphere_basis_3d(lmax);
    throw DomainError("basis: only ambient dimensions 2 and 3 are supported");
}

/// Harmonic coefficients of nodal values: c_k = sum_i w_i f_i Y_ik.
inline Eigen::VectorXd analyze(const SphereBasis& b, const Eigen::VectorXd& values) {
    if (values.size() != b.node_count())
        throw ShapeError("analyze: value count does not match the grid");
    return b.y.transpose() * (b.w.asDiagonal() * values);
}

/// Nodal values of a coefficient vector.
inline Eigen::VectorXd synthesize(const SphereBasis& b, const Eigen::VectorXd& coeffs) {
    if (coeffs.size() != b.mode_count())
        throw ShapeError("synthesize: coefficient count does not match the basis");
    return b.y * coeffs;
}

/// Tangential gradient of a coefficient vector in the local orthonormal
/// frame: column 0 along increasing colatitude (zero for n = 2), column 1
/// along increasing longitude.
inline Eigen::MatrixXd gradient(const SphereBasis& b, const Eigen::VectorXd& coeffs) {
    if (coeffs.size() != b.mode_count())
        throw ShapeError("gradient: coefficient count does not match the basis");
    Eigen::MatrixXd g(b.node_count(), 2);
    g.col(0) = b.dt * coeffs;
    g.col(1) = b.dp * coeffs;
    return g;
}

/// Laplace-Beltrami applied in coefficient space, returned as nodal values.
inline Eigen::VectorXd laplacian(const SphereBasis& b, const Eigen::VectorXd& coeffs) {
    if (coeffs.size() != b.mode_count())
        throw ShapeError("laplacian: coefficient count does not match the basis");
    Eigen::VectorXd scaled = coeffs;
    for (int k = 0; k < b.mode_count(); ++k) scaled[k] *= b.laplace_eigenvalue(b.modes[k].l);
    return b.y * scaled;
}

}  // namespace twophase
