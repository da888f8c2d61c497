// SPDX-License-Identifier: BSD-3-Clause
//
// Tests of the per-mode Stokes transmission solvers and the reduced
// dispersion function: agreement of the steady response matrix with an
// exact power-function solution basis, self-adjointness and positive
// semidefiniteness of the response matrix, the Schur-complement identity
// linking the two interface problems, the quadratic-form identity tying
// the response to kinetic energy and viscous dissipation, the volume-locked
// and reservoir closures of the ball-constant mode, and positivity of the
// dispersion function for a single sphere.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "twophase/mode_solvers.hpp"

using namespace twophase;

namespace {

LinearizationParams test_params() {
    LinearizationParams p;
    p.rho1 = 1.0;
    p.rho2 = 2.0;
    p.mu1 = 1.0;
    p.mu2 = 2.0;
    p.kappa1 = 1.0;
    p.kappa2 = 1.5;
    p.d1 = 1.0;
    p.d2 = 2.0;
    p.sigma = 1.0;
    p.theta_star = 1.0;
    p.l_star = 0.5;
    return p;
}

// Exact steady mode solutions per phase: two pressure-free gradient fields
// and two pressure-driven particular solutions, all pure powers of r.
struct PowerSolution {
    double ev, eV, ep;    // exponents of vr, vt, p
    double cv, cV, cp;    // coefficients
    double value_v(double r) const { return cv * std::pow(r, ev); }
    double value_V(double r) const { return cV * std::pow(r, eV); }
    double value_p(double r) const { return cp * std::pow(r, ep); }
    double dv(double r) const { return cv * ev * std::pow(r, ev - 1.0); }
    double dV(double r) const { return cV * eV * std::pow(r, eV - 1.0); }
    double traction(double r, double mu) const {
        return mu * (dV(r) - value_V(r) / r + value_v(r) / r);
    }
    double normal_stress(double r, double mu) const {
        return 2.0 * mu * dv(r) - value_p(r);
    }
};

std::array<PowerSolution, 4> power_basis(int n, int l, double mu) {
    const double lap = static_cast<double>(l) * (l + n - 2);
    std::array<PowerSolution, 4> b{};
    // Increasing gradient field.
    b[0] = {l - 1.0, l - 1.0, 0.0, static_cast<double>(l), 1.0, 0.0};
    // Decreasing gradient field.
    b[1] = {1.0 - n - l, 1.0 - n - l, 0.0, 2.0 - n - l, 1.0, 0.0};
    // Increasing pressure mode p = r^l.
    {
        Eigen::Matrix2d m;
        m << l + n, -lap, 2.0 * mu, 2.0 * mu * (l + n - 2.0);
        const Eigen::Vector2d ab = m.fullPivLu().solve(Eigen::Vector2d(0.0, 1.0));
        b[2] = {l + 1.0, l + 1.0, static_cast<double>(l), ab[0], ab[1], 1.0};
    }
    // Decreasing pressure mode p = r^{2-n-l}.
    {
        Eigen::Matrix2d m;
        m << 2.0 - l, -lap, 2.0 * mu, -2.0 * mu * l;
        const Eigen::Vector2d ab = m.fullPivLu().solve(Eigen::Vector2d(0.0, 1.0));
        b[3] = {3.0 - n - l, 3.0 - n - l, 2.0 - n - l, ab[0], ab[1], 1.0};
    }
    return b;
}

// Steady response matrix from the exact basis: interior phase keeps the two
// regular solutions, outer phase all four, closed by no slip at the wall and
// the four interface rows.
struct OracleResponse {
    double s11, s12, s21, s22, ntd;
};

OracleResponse steady_oracle(int n, int l, const LinearizationParams& par, double R,
                             double R_out) {
    const auto b1 = power_basis(n, l, par.mu1);
    const auto b2 = power_basis(n, l, par.mu2);
    auto solve = [&](bool velocity_continuous, double g1, double g2) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(6);
        // Columns: phase-1 regular pair, then the four outer solutions.
        for (int c = 0; c < 2; ++c) {
            const PowerSolution& s = b1[2 * c];  // entries 0 and 2 are regular
            m(2, c) = -s.value_V(R);
            m(3, c) = -s.traction(R, par.mu1);
            if (velocity_continuous) {
                m(4, c) = -s.value_v(R);
                m(5, c) = s.normal_stress(R, par.mu1);
            } else {
                m(4, c) = s.normal_stress(R, par.mu1);
                m(5, c) = s.normal_stress(R, par.mu1) / par.rho1;
            }
        }
        for (int c = 0; c < 4; ++c) {
            const PowerSolution& s = b2[c];
            m(0, 2 + c) = s.value_v(R_out);
            m(1, 2 + c) = s.value_V(R_out);
            m(2, 2 + c) = s.value_V(R);
            m(3, 2 + c) = s.traction(R, par.mu2);
            if (velocity_continuous) {
                m(4, 2 + c) = s.value_v(R);
                m(5, 2 + c) = -s.normal_stress(R, par.mu2);
            } else {
                m(4, 2 + c) = -s.normal_stress(R, par.mu2);
                m(5, 2 + c) = -s.normal_stress(R, par.mu2) / par.rho2;
            }
        }
        rhs[4] = velocity_continuous ? 0.0 : g1;
        rhs[5] = velocity_continuous ? g1 : g2;
        const Eigen::VectorXd c = m.fullPivLu().solve(rhs);
        const double v1 = c[0] * b1[0].value_v(R) + c[1] * b1[2].value_v(R);
        double v2 = 0.0;
        for (int k = 0; k < 4; ++k) v2 += c[2 + k] * b2[k].value_v(R);
        return std::pair<double, double>{v1, v2};
    };

    OracleResponse o{};
    auto [v1a, v2a] = solve(false, 1.0, 0.0);
    o.s11 = (par.rho2 * v2a - par.rho1 * v1a) / par.jump_rho();
    o.s21 = (v2a - v1a) / par.jump_inv_rho();
    auto [v1b, v2b] = solve(false, 0.0, 1.0);
    o.s12 = (par.rho2 * v2b - par.rho1 * v1b) / par.jump_rho();
    o.s22 = (v2b - v1b) / par.jump_inv_rho();
    auto [v1c, v2c] = solve(true, 1.0, 0.0);
    o.ntd = v2c;
    return o;
}

}  // namespace

TEST_CASE("steady response matrix matches the power-basis solution") {
    const LinearizationParams p = test_params();
    struct Case {
        int n, l;
    };
    for (Case c : {Case{3, 1}, Case{3, 2}, Case{3, 3}, Case{2, 2}, Case{2, 3}}) {
        const RadialGeometry g = make_radial_geometry(c.n, 1.0, 2.0, 28);
        const OracleResponse o = steady_oracle(c.n, c.l, p, 1.0, 2.0);
        const StokesModeResponse r = stokes_mode_solve(0.0, c.l, g, p);
        INFO("n = " << c.n << ", l = " << c.l);
        REQUIRE(std::real(r.s11) == Catch::Approx(o.s11).epsilon(1e-8));
        REQUIRE(std::real(r.s12) == Catch::Approx(o.s12).epsilon(1e-8));
        REQUIRE(std::real(r.s21) == Catch::Approx(o.s21).epsilon(1e-8));
        REQUIRE(std::real(r.s22) == Catch::Approx(o.s22).epsilon(1e-8));
        REQUIRE(std::real(r.ntd) == Catch::Approx(o.ntd).epsilon(1e-8));
    }
}

TEST_CASE("planar degree-one response matches the log-branch solution") {
    // In two dimensions at l = 1 the decreasing pressure mode degenerates:
    // p = 1/r drives v = al log r, V = al (log r + 1) with al = -1/(2 mu).
    // The remaining branches stay pure powers.
    const LinearizationParams p = test_params();
    const double R = 1.0, R_out = 2.0;
    const int nb = 4;
    auto v_of = [&](int k, double mu, double r) {
        switch (k) {
            case 0: return 1.0;
            case 1: return -1.0 / (r * r);
            case 2: return r * r / (8.0 * mu);  // p = r drives a = 1/(8 mu), b = 3/(8 mu)
            default: return -std::log(r) / (2.0 * mu);
        }
    };
    auto dv_of = [&](int k, double mu, double r) {
        switch (k) {
            case 0: return 0.0;
            case 1: return 2.0 / (r * r * r);
            case 2: return 2.0 * r / (8.0 * mu);
            default: return -1.0 / (2.0 * mu * r);
        }
    };
    auto V_of = [&](int k, double mu, double r) {
        switch (k) {
            case 0: return 1.0;
            case 1: return 1.0 / (r * r);
            case 2: return 3.0 * r * r / (8.0 * mu);
            default: return -(std::log(r) + 1.0) / (2.0 * mu);
        }
    };
    auto dV_of = [&](int k, double mu, double r) {
        switch (k) {
            case 0: return 0.0;
            case 1: return -2.0 / (r * r * r);
            case 2: return 6.0 * r / (8.0 * mu);
            default: return -1.0 / (2.0 * mu * r);
        }
    };
    auto p_of = [&](int k, double, double r) {
        switch (k) {
            case 0: case 1: return 0.0;
            case 2: return r;
            default: return 1.0 / r;
        }
    };
    auto traction = [&](int k, double mu, double r) {
        return mu * (dV_of(k, mu, r) - V_of(k, mu, r) / r + v_of(k, mu, r) / r);
    };
    auto tnn = [&](int k, double mu, double r) {
        return 2.0 * mu * dv_of(k, mu, r) - p_of(k, mu, r);
    };
    auto solve = [&](double g1, double g2) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(6);
        const int regular[2] = {0, 2};
        for (int c = 0; c < 2; ++c) {
            const int k = regular[c];
            m(2, c) = -V_of(k, p.mu1, R);
            m(3, c) = -traction(k, p.mu1, R);
            m(4, c) = tnn(k, p.mu1, R);
            m(5, c) = tnn(k, p.mu1, R) / p.rho1;
        }
        for (int k = 0; k < nb; ++k) {
            m(0, 2 + k) = v_of(k, p.mu2, R_out);
            m(1, 2 + k) = V_of(k, p.mu2, R_out);
            m(2, 2 + k) = V_of(k, p.mu2, R);
            m(3, 2 + k) = traction(k, p.mu2, R);
            m(4, 2 + k) = -tnn(k, p.mu2, R);
            m(5, 2 + k) = -tnn(k, p.mu2, R) / p.rho2;
        }
        rhs[4] = g1;
        rhs[5] = g2;
        const Eigen::VectorXd c = m.fullPivLu().solve(rhs);
        const double v1 = c[0] * v_of(0, p.mu1, R) + c[1] * v_of(2, p.mu1, R);
        double v2 = 0.0;
        for (int k = 0; k < nb; ++k) v2 += c[2 + k] * v_of(k, p.mu2, R);
        return std::pair<double, double>{v1, v2};
    };
    auto [v1a, v2a] = solve(1.0, 0.0);
    const double s11 = (p.rho2 * v2a - p.rho1 * v1a) / p.jump_rho();
    const double s21 = (v2a - v1a) / p.jump_inv_rho();
    auto [v1b, v2b] = solve(0.0, 1.0);
    const double s12 = (p.rho2 * v2b - p.rho1 * v1b) / p.jump_rho();
    const double s22 = (v2b - v1b) / p.jump_inv_rho();
    REQUIRE(s12 == Catch::Approx(s21).epsilon(1e-12));

    const RadialGeometry g = make_radial_geometry(2, R, R_out, 28);
    const StokesModeResponse r = stokes_mode_solve(0.0, 1, g, p);
    REQUIRE(std::real(r.s11) == Catch::Approx(s11).epsilon(1e-8));
    REQUIRE(std::real(r.s12) == Catch::Approx(s12).epsilon(1e-8));
    REQUIRE(std::real(r.s21) == Catch::Approx(s21).epsilon(1e-8));
    REQUIRE(std::real(r.s22) == Catch::Approx(s22).epsilon(1e-8));
}

TEST_CASE("response matrix is symmetric and positive semidefinite") {
    const LinearizationParams p = test_params();
    for (int n : {2, 3}) {
        const RadialGeometry g = make_radial_geometry(n, 1.0, 2.0, 28);
        for (int l : {1, 2, 5}) {
            for (double lambda : {0.0, 1.0, 10.0}) {
                const StokesModeResponse r = stokes_mode_solve(lambda, l, g, p);
                const double s11 = std::real(r.s11), s12 = std::real(r.s12);
                const double s21 = std::real(r.s21), s22 = std::real(r.s22);
                const double scale = std::max({std::abs(s11), std::abs(s22), std::abs(s12)});
                INFO("n = " << n << ", l = " << l << ", lambda = " << lambda);
                REQUIRE(std::abs(s12 - s21) <= 1e-8 * scale);
                // Smallest eigenvalue of the symmetrized 2x2 matrix.
                const double tr = s11 + s22;
                const double det = s11 * s22 - s12 * s21;
                const double lo = 0.5 * (tr - std::sqrt(std::max(tr * tr - 4.0 * det, 0.0)));
                REQUIRE(lo >= -1e-8 * scale);
            }
        }
    }
}

TEST_CASE("schur complement reproduces the velocity-continuous response") {
    const LinearizationParams p = test_params();
    for (int n : {2, 3}) {
        const RadialGeometry g = make_radial_geometry(n, 1.0, 2.0, 28);
        for (int l : {1, 3}) {
            for (double lambda : {0.0, 2.5}) {
                const StokesModeResponse r = stokes_mode_solve(lambda, l, g, p);
                INFO("n = " << n << ", l = " << l << ", lambda = " << lambda);
                REQUIRE(std::real(r.schur_ntd()) ==
                        Catch::Approx(std::real(r.ntd)).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("quadratic form equals kinetic energy plus dissipation") {
    const LinearizationParams p = test_params();
    for (int n : {2, 3}) {
        const RadialGeometry g = make_radial_geometry(n, 1.0, 2.0, 32);
        for (double lambda : {0.0, 2.0}) {
            for (int l : {1, 2, 4}) {
                const double g1 = 0.7, g2 = -1.3;
                const StokesModeSolution sol = stokes_transmission_solve(
                    lambda, l, g, p, StokesJumps::normal_stress_pair, g1, g2);
                const double k = std::real(sol.k), j = std::real(sol.j);
                const double form = (k * g1 + j * g2) * std::pow(g.radius, n - 1);
                const double rhs = lambda * stokes_mode_kinetic(g, p, l, sol) +
                                   stokes_mode_dissipation(g, p, l, sol);
                INFO("n = " << n << ", l = " << l << ", lambda = " << lambda);
                REQUIRE(form == Catch::Approx(rhs).epsilon(1e-8));
                REQUIRE(form >= 0.0);

                // Same identity for the velocity-continuous problem.
                const StokesModeSolution sym = stokes_transmission_solve(
                    lambda, l, g, p, StokesJumps::velocity_continuous, g1);
                const double sform =
                    std::real(sym.trace) * g1 * std::pow(g.radius, n - 1);
                const double srhs = lambda * stokes_mode_kinetic(g, p, l, sym) +
                                    stokes_mode_dissipation(g, p, l, sym);
                REQUIRE(sform == Catch::Approx(srhs).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("ball-constant mode is volume-locked by a rigid wall") {
    const LinearizationParams p = test_params();
    const RadialGeometry g = make_radial_geometry(3, 1.0, 2.0, 24);
    const StokesModeResponse r = stokes_mode_solve(1.0, 0, g, p, 0.3, -0.4);
    REQUIRE(r.volume_locked);
    REQUIRE(std::abs(r.k) == 0.0);
    REQUIRE(std::abs(r.j) == 0.0);
    REQUIRE(std::abs(r.ntd) == 0.0);
}

TEST_CASE("ball-constant mode against a reservoir") {
    const LinearizationParams p = test_params();
    for (int n : {2, 3}) {
        const RadialGeometry g = make_radial_geometry(n, 1.0, 2.0, 24);
        for (double lambda : {0.0, 1.0, 25.0}) {
            const StokesModeResponse r =
                stokes_mode_solve(lambda, 0, g, p, 1.0, 0.0, OuterClosure::reservoir);
            const double s11 = std::real(r.s11), s12 = std::real(r.s12);
            const double s21 = std::real(r.s21), s22 = std::real(r.s22);
            INFO("n = " << n << ", lambda = " << lambda);
            REQUIRE_FALSE(r.volume_locked);
            REQUIRE(s11 > 0.0);
            REQUIRE(s12 == Catch::Approx(s21).epsilon(1e-14));
            // Exactly rank one: the normal response of the velocity-continuous
            // problem vanishes on ball constants.
            REQUIRE(std::abs(s11 * s22 - s12 * s21) <= 1e-14 * s11 * s22);
            REQUIRE(std::abs(r.ntd) == 0.0);

            // Quadratic form against the explicit radial field
            // vr2 = C r^{1-n}: kinetic rho2 C^2 Q and dissipation
            // 2 mu2 C^2 n (n-1) integral of r^{-n-1}.
            const double R = g.radius, Rb = g.outer_radius;
            const double q = n == 3 ? (1.0 / R - 1.0 / Rb) : std::log(Rb / R);
            const double phi =
                2.0 * p.mu2 * (n - 1.0) * (std::pow(R, -n) - std::pow(Rb, -n)) +
                lambda * p.rho2 * q;
            const double c = p.rho2 * 1.0 / (phi * p.jump_rho());  // g1 = 1, g2 = 0
            const double kinetic = p.rho2 * c * c * q;
            const double dissipation =
                2.0 * p.mu2 * c * c * (n - 1.0) * (std::pow(R, -n) - std::pow(Rb, -n));
            const double form = std::real(r.k) * 1.0 * std::pow(R, n - 1);
            REQUIRE(form ==
                    Catch::Approx(lambda * kinetic + dissipation).epsilon(1e-12));
        }
    }
}

TEST_CASE("transmission solver edge cases") {
    const LinearizationParams p = test_params();
    const RadialGeometry g = make_radial_geometry(3, 1.0, 2.0, 24);
    REQUIRE_THROWS_AS(
        stokes_transmission_solve(1.0, 0, g, p, StokesJumps::normal_stress_pair, 1.0),
        DomainError);
    REQUIRE_THROWS_AS(stokes_mode_solve(1.0, -2, g, p), DomainError);

    // Conjugation symmetry for complex lambda.
    const Complex lam(2.0, 3.0);
    const StokesModeResponse a = stokes_mode_solve(lam, 2, g, p);
    const StokesModeResponse b = stokes_mode_solve(std::conj(lam), 2, g, p);
    REQUIRE(std::abs(a.s11 - std::conj(b.s11)) < 1e-12 * std::abs(a.s11));
    REQUIRE(std::abs(a.s22 - std::conj(b.s22)) < 1e-12 * std::abs(a.s22));
}

TEST_CASE("dispersion function is positive for a single sphere") {
    const LinearizationParams p = test_params();
    for (int n : {2, 3}) {
        const RadialGeometry g = make_radial_geometry(n, 1.0, 2.0, 24);
        for (int l : {2, 3, 6}) {
            for (double lambda : {1e-3, 0.1, 1.0, 10.0, 1e3}) {
                const DispersionPoint pt = reduced_dispersion_point(lambda, l, g, p);
                INFO("n = " << n << ", l = " << l << ", lambda = " << lambda);
                REQUIRE(pt.t_value > 0.0);
                REQUIRE(pt.b_value > 0.0);
            }
        }
    }
}

TEST_CASE("degree-one dispersion vanishes at the origin") {
    const LinearizationParams p = test_params();
    const RadialGeometry g = make_radial_geometry(3, 1.0, 2.0, 24);
    const DispersionPoint pt = reduced_dispersion_point(1e-8, 1, g, p);
    REQUIRE(pt.t_value > 0.0);
    REQUIRE(pt.b_value > 0.0);
    REQUIRE(pt.b_value < 1e-6);  // b = lambda t with a_1 = 0
}

TEST_CASE("ball-constant dispersion changes sign") {
    const LinearizationParams p = test_params();
    const RadialGeometry g = make_radial_geometry(3, 1.0, 2.0, 24);
    REQUIRE_THROWS_AS(reduced_dispersion_point(1.0, 0, g, p), SolvabilityError);

    const double b_small = reduced_dispersion(1e-6, 0, g, p, OuterClosure::reservoir);
    REQUIRE(b_small < 0.0);
    REQUIRE(b_small ==
            Catch::Approx(p.sigma * linearized_curvature_mode(3, 0, g.radius)).margin(1e-4));
    const double b_large = reduced_dispersion(1e4, 0, g, p, OuterClosure::reservoir);
    REQUIRE(b_large > 0.0);
}
