// SPDX-License-Identifier: BSD-3-Clause
//
// Tests of the winding-number certifier: elementary winding counts, planted
// zeros, refinement invariance, zero-freeness of the determinant factors on
// half-plane truncations, and the lower-bound scan of the full symbol.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "twophase/zerocert.hpp"

using namespace twophase;

namespace {

SymbolParams equal_viscosity_params() {
    SymbolParams par;
    par.rho1 = 1.0;
    par.rho2 = 2.0;
    par.mu1 = 1.0;
    par.mu2 = 1.0;
    return par;
}

}  // namespace

TEST_CASE("winding of the identity along the unit circle is one") {
    const auto f = [](Complex z) { return z; };
    const Certificate cert = winding_number(f, circle_contour(0.0, 1.0));
    REQUIRE(cert.winding == 1);
    REQUIRE(cert.verdict == CertVerdict::zeros_detected);
    REQUIRE(cert.zero_count == 1);
    REQUIRE(cert.min_modulus == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("winding of a nonzero constant is zero") {
    const auto f = [](Complex) { return Complex(2.0, -3.0); };
    const Certificate cert = winding_number(f, circle_contour(Complex(1.0, 1.0), 7.0));
    REQUIRE(cert.winding == 0);
    REQUIRE(cert.verdict == CertVerdict::zero_free);
    REQUIRE(std::abs(cert.accumulated_argument) <= 1e-12);
}

TEST_CASE("winding counts only the enclosed root") {
    const auto f = [](Complex z) { return (z - 0.5) * (z + 2.0); };
    const Certificate cert = winding_number(f, circle_contour(0.0, 1.0));
    REQUIRE(cert.winding == 1);
    REQUIRE(cert.verdict == CertVerdict::zeros_detected);
}

TEST_CASE("winding is invariant under extra refinement") {
    const auto f = [](Complex z) { return (z - Complex(0.1, 0.2)) * (z - Complex(-0.3, 0.1)); };
    const Certificate a = winding_number(f, circle_contour(0.0, 1.0), 1e-12, 64);
    const Certificate b = winding_number(f, circle_contour(0.0, 1.0), 1e-12, 256);
    REQUIRE(a.winding == 2);
    REQUIRE(b.winding == a.winding);
}

TEST_CASE("a zero on the contour is refused") {
    const auto f = [](Complex z) { return z - 1.0; };
    REQUIRE_THROWS_AS(winding_number(f, circle_contour(0.0, 1.0)), ContourError);
}

TEST_CASE("an exhausted refinement budget yields an inconclusive verdict") {
    const auto f = [](Complex z) { return z; };
    const Certificate cert = winding_number(f, circle_contour(0.0, 1.0), 1e-12, 2, 0);
    REQUIRE(cert.verdict == CertVerdict::inconclusive);
}

TEST_CASE("determinant factors are zero-free on half-plane truncations") {
    const SymbolParams par = equal_viscosity_params();
    const Region reg = Region::half_plane(1e3);
    const Certificate c11 = certify_zero_free(SymbolVariant::S11, reg, par);
    REQUIRE(c11.zero_free());
    REQUIRE(c11.winding == 0);
    const Certificate c22 = certify_zero_free(SymbolVariant::S22, reg, par);
    REQUIRE(c22.zero_free());
}

TEST_CASE("zero-freeness holds across random admissible materials") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> rho_dist(0.2, 5.0);
    std::uniform_real_distribution<double> mu_dist(0.1, 10.0);
    const Region reg = Region::half_plane(1e3);
    for (int draw = 0; draw < 10; ++draw) {
        SymbolParams par;
        par.rho1 = rho_dist(rng);
        do {
            par.rho2 = rho_dist(rng);
        } while (std::abs(par.rho2 - par.rho1) < 1e-2);
        par.mu1 = mu_dist(rng);
        par.mu2 = mu_dist(rng);
        REQUIRE(certify_zero_free(SymbolVariant::S11, reg, par).zero_free());
        REQUIRE(certify_zero_free(SymbolVariant::S22, reg, par).zero_free());
    }
}

TEST_CASE("a planted interior zero increments the winding by one") {
    const SymbolParams par = equal_viscosity_params();
    const auto planted = [&par](Complex z) {
        return s22_symbols(symbol_point(z, par), par).r2 * (z - 1.0);
    };
    const Certificate cert = winding_number(planted, half_disk_contour(1e3));
    REQUIRE(cert.winding == 1);
    REQUIRE(cert.verdict == CertVerdict::zeros_detected);
}

TEST_CASE("certification works from material laws directly") {
    MaterialParams mat;
    mat.phase1 = PhaseLaw::reference(1.0, 1.0, 1.0);
    mat.phase2 = PhaseLaw::reference(2.0, 3.0, 1.0);
    const Certificate cert =
        certify_zero_free(SymbolVariant::S11, Region::half_plane(1e1), mat, 1.0);
    REQUIRE(cert.zero_free());
}

TEST_CASE("sector boundaries too close to a branch cut are rejected") {
    const SymbolParams par = equal_viscosity_params();
    const Region bad = Region::sector(3.1, 0.1, 10.0, 0.5);
    REQUIRE_THROWS_AS(validate_region(bad, par), GeometryError);
    const Region good = Region::sector(2.0, 0.1, 10.0, 0.3);
    REQUIRE_NOTHROW(validate_region(good, par));
}

TEST_CASE("lower-bound scan on the real ray matches the two-term bound") {
    ScanParams sp;
    sp.material = equal_viscosity_params();
    sp.sigma = 0.8;
    sp.c0 = 0.0;
    sp.b0_along_xi = 0.0;
    const double m0 = 1.5;
    sp.m_fn = [m0](Complex) { return Complex(m0, 0.0); };
    sp.lambda0 = 1.0;

    ScanGrid grid;
    grid.n_lambda_angle = 1;  // angle 0: the real ray
    const Region sector = Region::sector(1e-6, sp.lambda0, grid.lambda_max);
    const ScanResult res = lower_bound_scan(sp, sector, grid);
    const double jr = sp.material.jump_rho();
    // (lambda + c*tau)/(lambda + tau) >= min(1, c) for positive terms, so the
    // scan can never undercut half of it.
    REQUIRE(res.c_hat >= std::min(1.0, sp.sigma * m0 / (2.0 * jr * jr)));
    REQUIRE(res.c_hat > 0.0);
    REQUIRE(res.skipped == 0);
    REQUIRE(res.evaluated == grid.n_lambda_modulus * grid.n_tau);
}

TEST_CASE("the symbol ratio tends to one as tau vanishes") {
    ScanParams sp;
    sp.material = equal_viscosity_params();
    sp.sigma = 1.0;
    sp.c0 = 0.4;
    sp.b0_along_xi = 0.2;
    sp.m_fn = [](Complex) { return Complex(1.0, 0.0); };
    sp.lambda0 = 2.0;

    ScanGrid grid;
    grid.n_lambda_modulus = 1;
    grid.n_lambda_angle = 1;
    grid.n_tau = 1;
    grid.tau_min = grid.tau_max = 1e-9;
    grid.lambda_max = sp.lambda0;
    const ScanResult res = lower_bound_scan(sp, Region::sector(0.3, 1.0, 10.0), grid);
    REQUIRE(res.c_hat == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("parabolic rescaling leaves the reduced variable invariant") {
    const SymbolParams par = equal_viscosity_params();
    const double sigma = 1.0, c0 = 0.4, b0 = 0.2;
    const ModulusFn m_fn = [](Complex z) { return 1.0 / (1.0 + z); };
    const double jr = par.jump_rho();

    const Complex lambda(3.0, 1.0);
    const double tau = 0.7;
    const auto s_of = [&](Complex lam, double t) {
        const Complex z = lam / (t * t);
        return lam + sigma * t * m_fn(z) / (jr * jr) + c0 * t * psi_and_ell(z, par).ell / jr +
               Complex(0.0, 1.0) * t * b0 / jr;
    };
    const Complex base = s_of(lambda, tau) - lambda;
    for (const double a : {2.0, 4.0}) {
        const Complex z_scaled = (a * a * lambda) / ((a * tau) * (a * tau));
        REQUIRE(std::abs(z_scaled - lambda / (tau * tau)) <= 1e-14 * std::abs(z_scaled));
        // The non-frequency part is degree one in tau once z is frozen.
        const Complex scaled = s_of(a * a * lambda, a * tau) - a * a * lambda;
        REQUIRE(std::abs(scaled - a * base) <= 1e-12 * std::abs(scaled));
    }
}
