// SPDX-License-Identifier: BSD-3-Clause
//
// Trace the scalar dispersion function b(lambda) of the height-coupled
// modes for a concentric two-phase ball, degree by degree, and bracket its
// real roots. The sign structure makes the stability split visible at a
// glance: for l >= 2 surface tension pushes every root into the left half
// line, l = 1 carries the translation kernel at lambda = 0, and l = 0 is
// volume-locked by the rigid outer wall. Usage:
//
//   demo_dispersion [l_max] [N]
//
// prints a CSV table (degree, lambda, b) to stdout and a root summary to
// stderr.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "twophase/mode_solvers.hpp"
#include "twophase/radial.hpp"

using namespace twophase;

int main(int argc, char** argv) {
    const int l_max = argc > 1 ? std::atoi(argv[1]) : 4;
    const int npts = argc > 2 ? std::atoi(argv[2]) : 32;

    const RadialGeometry geom = make_radial_geometry(3, 1.0, 2.0, npts);

    LinearizationParams par;
    par.rho1 = 1.0;
    par.rho2 = 2.0;
    par.mu1 = 1.0;
    par.mu2 = 1.0;
    par.kappa1 = 1.0;
    par.kappa2 = 1.0;
    par.d1 = 1.0;
    par.d2 = 1.0;
    par.sigma = 1.0;
    par.theta_star = 1.0;
    par.l_star = 0.5;

    // Sweep a window wide enough to contain every capillary root: the
    // curvature scale sigma*(n-1)/R^2 sets the units.
    const double scale = par.sigma * (geom.dim - 1) / (geom.radius * geom.radius);
    const double lo = -6.0 * scale;
    const double hi = 1.0 * scale;
    const int samples = 360;

    std::printf("l,lambda,b\n");
    for (int l = 1; l <= l_max; ++l) {
        double prev_lambda = 0.0;
        double prev_b = 0.0;
        bool have_prev = false;
        std::vector<double> roots;

        for (int i = 0; i <= samples; ++i) {
            const double lambda = lo + (hi - lo) * i / samples;
            double b;
            try {
                b = reduced_dispersion(lambda, l, geom, par);
            } catch (const Error&) {
                std::printf("%d,%.10g,nan\n", l, lambda);
                have_prev = false;
                continue;
            }
            std::printf("%d,%.10g,%.10g\n", l, lambda, b);

            if (have_prev && prev_b * b < 0.0) {
                // Bisect the bracketed sign change down to 1e-12 absolute.
                double a = prev_lambda, fa = prev_b;
                double c = lambda;
                for (int it = 0; it < 80 && c - a > 1e-12; ++it) {
                    const double mid = 0.5 * (a + c);
                    const double fm = reduced_dispersion(mid, l, geom, par);
                    if (fa * fm <= 0.0) {
                        c = mid;
                    } else {
                        a = mid;
                        fa = fm;
                    }
                }
                roots.push_back(0.5 * (a + c));
            }
            prev_lambda = lambda;
            prev_b = b;
            have_prev = true;
        }

        std::fprintf(stderr, "l = %d:", l);
        if (roots.empty()) std::fprintf(stderr, " no real root in [%.3g, %.3g]", lo, hi);
        for (const double r : roots) std::fprintf(stderr, "  root at lambda = %+.8f", r);
        std::fprintf(stderr, "\n");
    }
    return 0;
}
