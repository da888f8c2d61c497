// SPDX-License-Identifier: BSD-3-Clause
//
// Equilibrium configurations from conserved quantities: the common ball
// radius from the mass constraint, the temperature from the energy
// constraint, the total energy and entropy functionals on sampled states,
// and a constrained criticality probe of the entropy at the equal-radius
// point (the Ostwald ripening instability for two or more balls).

#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "twophase/chebyshev.hpp"
#include "twophase/errors.hpp"
#include "twophase/sphere_basis.hpp"
#include "twophase/thermo.hpp"

namespace twophase {

/// Surface measure of the unit sphere in R^n: 2 pi^{n/2} / Gamma(n/2).
inline double unit_sphere_area(int n) {
    if (n < 2) throw DomainError("unit sphere area: dimension must be at least 2");
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

/// Conserved quantities that pin an equilibrium: total mass, total energy,
/// and the fixed ambient volume, plus the topology (dimension, ball count).
struct ConservedQuantities {
    double c0 = 0.0;      // total mass
    double E0 = 0.0;      // total energy
    double volume = 1.0;  // |Omega|
    int n = 3;
    int m = 1;  // number of balls
};

/// One point of the equilibrium manifold.
struct EquilibriumConfig {
    int m = 1;
    int n = 3;
    double R = 1.0;           // common ball radius
    double theta_star = 1.0;  // equilibrium temperature
    Eigen::MatrixXd centers;  // m x n ball centers (may be empty: unplaced)
    double R_out = 2.0;       // ambient ball radius for the concentric geometry

    /// Dimension of the equilibrium manifold: n translations per ball plus
    /// the radius and temperature parameters.
    int manifold_dimension() const { return n * m + 2; }
};

/// Phase-1 volume implied by the mass constraint; throws when no equilibrium
/// with a disperse phase exists for these data.
inline double phase1_volume(const ConservedQuantities& q, const MaterialParams& mat) {
    const double v1 = (mat.rho2 * q.volume - q.c0) / mat.jump_rho();
    if (v1 <= 0.0)
        throw NoEquilibriumError("mass constraint leaves no volume for the disperse phase");
    if (v1 >= q.volume)
        throw NoEquilibriumError("mass constraint demands more disperse volume than the domain holds");
    return v1;
}

/// Common ball radius from the mass constraint m omega_n R^n / n = |Omega_1|.
inline double radius_from_mass(const ConservedQuantities& q, const MaterialParams& mat) {
    if (q.m < 1) throw DomainError("radius: ball count must be at least 1");
    const double v1 = phase1_volume(q, mat);
    return std::pow(q.n * v1 / (q.m * unit_sphere_area(q.n)), 1.0 / q.n);
}

namespace detail {

/// Bracketing plus bisection-safeguarded secant for a scalar increasing
/// function; relative tolerance on the root.
template <typename F>
double increasing_root(const F& f, double lo, double hi, double rel_tol) {
    double flo = f(lo), fhi = f(hi);
    if (flo > 0.0)
        throw NoEquilibriumError("root solve: target below the attainable range");
    if (fhi < 0.0)
        throw DomainError("root solve: no bracket inside [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
    double a = lo, b = hi, fa = flo, fb = fhi;
    for (int it = 0; it < 200; ++it) {
        double x = (fb != fa) ? b - fb * (b - a) / (fb - fa) : 0.5 * (a + b);
        if (!(x > a && x < b)) x = 0.5 * (a + b);
        const double fx = f(x);
        if (fx == 0.0) return x;
        if (fx < 0.0) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        if (b - a <= rel_tol * std::max(1.0, std::abs(a))) break;
    }
    return 0.5 * (a + b);
}

}  // namespace detail

/// Equilibrium temperature from the energy constraint
/// rho1 |Omega_1| eps1(theta) + rho2 |Omega_2| eps2(theta)
///   + sigma m omega_n R^{n-1} = E0,
/// using that the internal energies are strictly increasing in theta.
inline double temperature_from_energy(const ConservedQuantities& q, double R,
                                      const MaterialParams& mat) {
    if (R <= 0.0) throw DomainError("temperature: radius must be positive");
    const double wn = unit_sphere_area(q.n);
    const double v1 = q.m * wn * std::pow(R, q.n) / q.n;
    const double v2 = q.volume - v1;
    if (v2 <= 0.0) throw NoEquilibriumError("temperature: balls exhaust the domain");
    const double surface = mat.sigma * q.m * wn * std::pow(R, q.n - 1);

    const auto residual = [&](double theta) {
        return mat.rho1 * v1 * eval_phase(mat.phase1, theta).epsilon +
               mat.rho2 * v2 * eval_phase(mat.phase2, theta).epsilon +
               surface - q.E0;
    };
    return detail::increasing_root(residual, 1e-8, 1e8, 1e-12);
}

/// Solve the full equilibrium point (radius, temperature) for the conserved
/// quantities; centers are left unplaced.
inline EquilibriumConfig solve_equilibrium(const ConservedQuantities& q,
                                           const MaterialParams& mat, double R_out) {
    EquilibriumConfig cfg;
    cfg.m = q.m;
    cfg.n = q.n;
    cfg.R = radius_from_mass(q, mat);
    cfg.theta_star = temperature_from_energy(q, cfg.R, mat);
    cfg.R_out = R_out;
    return cfg;
}

/// Check non-degeneracy of placed balls: pairwise disjoint and strictly
/// inside the ambient ball, both with a relative gap. Throws GeometryError.
inline void validate_equilibrium_config(const EquilibriumConfig& cfg, double gap_factor = 0.05) {
    if (cfg.centers.size() == 0) return;  // unplaced configurations are legal
    if (cfg.centers.rows() != cfg.m || cfg.centers.cols() != cfg.n)
        throw ShapeError("config: centers must be an m x n array");
    const double gap = gap_factor * cfg.R;
    for (int i = 0; i < cfg.m; ++i) {
        if (cfg.centers.row(i).norm() + cfg.R > cfg.R_out - gap)
            throw GeometryError("config: ball touches the outer boundary");
        for (int j = i + 1; j < cfg.m; ++j) {
            if ((cfg.centers.row(i) - cfg.centers.row(j)).norm() < 2.0 * cfg.R + gap)
                throw GeometryError("config: balls touch each other");
        }
    }
}

/// Radial-angular product grids for the concentric single-ball geometry:
/// phase 1 fills [0, R], phase 2 the shell [R, R_out].
struct BulkGrid {
    ChebGrid r1;
    ChebGrid r2;
    std::shared_ptr<const SphereBasis> angular;

    int nodes_per_phase(int phase) const {
        return static_cast<int>((phase == 1 ? r1 : r2).r.size()) * angular->node_count();
    }
};

inline BulkGrid make_bulk_grid(const EquilibriumConfig& cfg, int n_radial, int lmax) {
    if (cfg.m != 1)
        throw DomainError("bulk grid: sampled-state functionals use the single-ball geometry");
    BulkGrid g;
    g.r1 = make_cheb_grid(n_radial, 0.0, cfg.R);
    g.r2 = make_cheb_grid(n_radial, cfg.R, cfg.R_out);
    g.angular = std::make_shared<SphereBasis>(make_sphere_basis(cfg.n, lmax));
    return g;
}

/// Bulk fields sampled on a BulkGrid; radial index major, angular minor.
struct SampledState {
    Eigen::MatrixXd u1, u2;      // velocity samples, nodes x n
    Eigen::VectorXd theta1, theta2;
};

inline SampledState equilibrium_state(const BulkGrid& g, const EquilibriumConfig& cfg) {
    SampledState s;
    const int n1 = g.nodes_per_phase(1), n2 = g.nodes_per_phase(2);
    s.u1 = Eigen::MatrixXd::Zero(n1, cfg.n);
    s.u2 = Eigen::MatrixXd::Zero(n2, cfg.n);
    s.theta1 = Eigen::VectorXd::Constant(n1, cfg.theta_star);
    s.theta2 = Eigen::VectorXd::Constant(n2, cfg.theta_star);
    return s;
}

namespace detail {

template <typename PerNode>
double bulk_integral(const ChebGrid& rad, const SphereBasis& ang, int n,
                     const PerNode& f) {
    double acc = 0.0;
    const int nr = static_cast<int>(rad.r.size());
    for (int ir = 0; ir < nr; ++ir) {
        const double rw = rad.w[ir] * std::pow(rad.r[ir], n - 1);
        for (int ia = 0; ia < ang.node_count(); ++ia)
            acc += rw * ang.w[ia] * f(ir * ang.node_count() + ia);
    }
    return acc;
}

}  // namespace detail

/// Total energy of a sampled state: kinetic + internal + surface.
inline double total_energy(const SampledState& s, const BulkGrid& g,
                           const EquilibriumConfig& cfg, const MaterialParams& mat) {
    if (s.u1.rows() != g.nodes_per_phase(1) || s.theta1.size() != s.u1.rows() ||
        s.u2.rows() != g.nodes_per_phase(2) || s.theta2.size() != s.u2.rows())
        throw ShapeError("energy: state does not match the grid");
    const SphereBasis& ang = *g.angular;
    const double e1 = detail::bulk_integral(g.r1, ang, cfg.n, [&](int i) {
        return mat.rho1 * (0.5 * s.u1.row(i).squaredNorm() +
                           eval_phase(mat.phase1, s.theta1[i]).epsilon);
    });
    const double e2 = detail::bulk_integral(g.r2, ang, cfg.n, [&](int i) {
        return mat.rho2 * (0.5 * s.u2.row(i).squaredNorm() +
                           eval_phase(mat.phase2, s.theta2[i]).epsilon);
    });
    const double surface =
        mat.sigma * cfg.m * unit_sphere_area(cfg.n) * std::pow(cfg.R, cfg.n - 1);
    return e1 + e2 + surface;
}

/// Total entropy of a sampled state.
inline double total_entropy(const SampledState& s, const BulkGrid& g,
                            const EquilibriumConfig& cfg, const MaterialParams& mat) {
    if (s.theta1.size() != g.nodes_per_phase(1) || s.theta2.size() != g.nodes_per_phase(2))
        throw ShapeError("entropy: state does not match the grid");
    const SphereBasis& ang = *g.angular;
    const double p1 = detail::bulk_integral(g.r1, ang, cfg.n, [&](int i) {
        return mat.rho1 * eval_phase(mat.phase1, s.theta1[i]).eta;
    });
    const double p2 = detail::bulk_integral(g.r2, ang, cfg.n, [&](int i) {
        return mat.rho2 * eval_phase(mat.phase2, s.theta2[i]).eta;
    });
    return p1 + p2;
}

/// Report of the constrained entropy probe at the equal-radius point.
struct CriticalityReport {
    bool is_local_max = true;
    Eigen::VectorXd worst_direction;  // volume-transfer weights, sum zero
    double worst_increase = 0.0;      // entropy gain along that direction
    double delta = 0.0;               // step at which the gain was measured
};

/// Probe entropy criticality on the reduced family of m-ball configurations:
/// per-ball volumes move along sum-zero directions (total phase-1 volume
/// fixed exactly), the shared temperature re-solves the energy constraint,
/// and the entropy of the perturbed configuration is compared with the
/// equal-radius point. A single ball admits no such direction and is
/// reported a local maximum; for m >= 2 volume transfer between balls frees
/// surface energy, raises the temperature, and strictly raises the entropy.
inline CriticalityReport entropy_criticality_probe(const EquilibriumConfig& cfg,
                                                   const ConservedQuantities& q,
                                                   const MaterialParams& mat,
                                                   int n_samples = 8) {
    if (cfg.m != q.m || cfg.n != q.n) throw ShapeError("probe: config/quantities mismatch");
    const int m = cfg.m;
    const double wn = unit_sphere_area(q.n);
    const double ball_vol = wn * std::pow(cfg.R, q.n) / q.n;
    const double v1 = m * ball_vol;
    const double v2 = q.volume - v1;
    if (v2 <= 0.0) throw NoEquilibriumError("probe: balls exhaust the domain");

    // Entropy of an m-ball configuration with per-ball volumes vols and the
    // temperature solving the energy constraint.
    const auto entropy_of = [&](const Eigen::VectorXd& vols) {
        double area = 0.0;
        for (int i = 0; i < m; ++i) {
            if (vols[i] <= 0.0)
                throw NoEquilibriumError("probe: a ball lost all its volume");
            const double Ri = std::pow(q.n * vols[i] / wn, 1.0 / q.n);
            area += wn * std::pow(Ri, q.n - 1);
        }
        const auto residual = [&](double theta) {
            return mat.rho1 * v1 * eval_phase(mat.phase1, theta).epsilon +
                   mat.rho2 * v2 * eval_phase(mat.phase2, theta).epsilon +
                   mat.sigma * area - q.E0;
        };
        const double theta = detail::increasing_root(residual, 1e-8, 1e8, 1e-13);
        return mat.rho1 * v1 * eval_phase(mat.phase1, theta).eta +
               mat.rho2 * v2 * eval_phase(mat.phase2, theta).eta;
    };

    CriticalityReport rep;
    rep.worst_direction = Eigen::VectorXd::Zero(m);
    const Eigen::VectorXd base_vols = Eigen::VectorXd::Constant(m, ball_vol);
    const double phi0 = entropy_of(base_vols);

    if (m == 1) {
        rep.is_local_max = true;
        return rep;
    }

    // Canonical transfer direction first, then seeded random sum-zero ones.
    std::vector<Eigen::VectorXd> dirs;
    {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(m);
        d[0] = 1.0;
        d[1] = -1.0;
        dirs.push_back(d.normalized());
    }
    std::mt19937 rng(2026);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int s = 1; s < n_samples; ++s) {
        Eigen::VectorXd d(m);
        for (int i = 0; i < m; ++i) d[i] = gauss(rng);
        d.array() -= d.mean();
        if (d.norm() < 1e-12) continue;
        dirs.push_back(d.normalized());
    }

    const double delta = 1e-3 * ball_vol;
    for (const Eigen::VectorXd& d : dirs) {
        const double gain = entropy_of(base_vols + delta * d) - phi0;
        if (gain > rep.worst_increase) {
            rep.worst_increase = gain;
            rep.worst_direction = d;
            rep.delta = delta;
        }
    }
    rep.is_local_max = !(rep.worst_increase > 0.0);
    return rep;
}

}  // namespace twophase
