// SPDX-License-Identifier: BSD-3-Clause
//
// Sphere-referenced interface geometry. Interfaces near a reference sphere
// of radius R are described as radial graphs r = R + h(omega); this header
// provides the signed distance, the graph normal and normal velocity, the
// nonlinear mean-curvature sum H(h), and the linearized curvature operator
// whose degree-l eigenvalue drives the spectral theory.
//
// Sign conventions: phase 1 is the interior of the sphere, the normal points
// out of phase 1, and H is the sum of principal curvatures, so the round
// sphere has H = -(n-1)/R.

#pragma once

#include <cmath>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "twophase/errors.hpp"
#include "twophase/sphere_basis.hpp"

namespace twophase {

/// Reference sphere with its transform plan. The plan is immutable after
/// construction and may be shared across threads.
struct ReferenceSphere {
    int dim = 3;
    Eigen::VectorXd center;
    double radius = 1.0;
    std::shared_ptr<const SphereBasis> basis;
};

inline ReferenceSphere make_reference_sphere(int n, const Eigen::VectorXd& center,
                                             double radius, int lmax) {
    if (radius <= 0.0) throw DomainError("sphere: radius must be positive");
    if (center.size() != n) throw ShapeError("sphere: center dimension mismatch");
    ReferenceSphere s;
    s.dim = n;
    s.center = center;
    s.radius = radius;
    s.basis = std::make_shared<SphereBasis>(make_sphere_basis(n, lmax));
    return s;
}

/// Signed distance to the sphere: negative inside (phase 1).
inline double sphere_signed_distance(const Eigen::VectorXd& x, const ReferenceSphere& sph) {
    if (x.size() != sph.dim) throw ShapeError("signed distance: point dimension mismatch");
    return (x - sph.center).norm() - sph.radius;
}

/// Height field over the reference sphere together with the derived surface
/// quantities alpha (tilt of the graph normal) and beta (its normalizer).
struct GraphPatch {
    const ReferenceSphere* sphere = nullptr;
    Eigen::VectorXd h;        // nodal heights
    Eigen::VectorXd coeffs;   // harmonic coefficients of h
    Eigen::MatrixXd grad_h;   // nodal frame components of the unit-sphere gradient
    Eigen::MatrixXd alpha;    // nodal frame components of grad h / (R + h)
    Eigen::VectorXd beta;     // (1 + |alpha|^2)^{-1/2}
};

/// Admissibility of a height field: |h| < R/10 and |grad_Sigma h| < 1/10
/// pointwise, which keeps the graph parameterization invertible with margin.
inline bool is_admissible(const ReferenceSphere& sph, const Eigen::VectorXd& h_nodal,
                          const Eigen::MatrixXd& grad_unit_sphere) {
    const double R = sph.radius;
    if (h_nodal.lpNorm<Eigen::Infinity>() >= R / 10.0) return false;
    // grad_Sigma = (1/R) grad_omega on the radius-R sphere.
    const double gmax = grad_unit_sphere.rowwise().norm().maxCoeff() / R;
    return gmax < 0.1;
}

/// Build a patch from nodal heights; throws GeometryError when the
/// admissibility bounds are violated.
inline GraphPatch make_graph_patch(const ReferenceSphere& sph, const Eigen::VectorXd& h) {
    const SphereBasis& b = *sph.basis;
    if (h.size() != b.node_count()) throw ShapeError("patch: height count does not match grid");
    GraphPatch p;
    p.sphere = &sph;
    p.h = h;
    p.coeffs = analyze(b, h);
    p.grad_h = gradient(b, p.coeffs);
    if (!is_admissible(sph, h, p.grad_h))
        throw GeometryError("patch: height field violates |h| < R/10 or |grad h| < 1/10");
    const Eigen::VectorXd rho = (h.array() + sph.radius).matrix();
    p.alpha = p.grad_h.array().colwise() / rho.array();
    p.beta = (1.0 + p.alpha.rowwise().squaredNorm().array()).rsqrt();
    return p;
}

/// Ambient unit vectors of the local frame at a node: radial, colatitude,
/// longitude directions (the last is absent for n = 2).
inline void local_frame(const SphereBasis& b, int node, Eigen::VectorXd& er,
                        Eigen::VectorXd& etheta, Eigen::VectorXd& ephi) {
    const double phi = b.lon[node];
    if (b.dim == 2) {
        er.resize(2);
        etheta.resize(2);
        ephi.resize(0);
        er << std::cos(phi), std::sin(phi);
        etheta << -std::sin(phi), std::cos(phi);  // the single tangent direction
        return;
    }
    const double th = b.colat[node];
    er.resize(3);
    etheta.resize(3);
    ephi.resize(3);
    er << std::sin(th) * std::cos(phi), std::sin(th) * std::sin(phi), std::cos(th);
    etheta << std::cos(th) * std::cos(phi), std::cos(th) * std::sin(phi), -std::sin(th);
    ephi << -std::sin(phi), std::cos(phi), 0.0;
}

/// Outward unit normal of the graph and its normal velocity for a height
/// rate dt_h: nu = beta (nu_Sigma - alpha), V = beta dt_h.
struct NormalAndVelocity {
    Eigen::MatrixXd normal;    // node x n ambient components, unit length
    Eigen::VectorXd velocity;  // nodal normal velocity
};

inline NormalAndVelocity graph_normal_and_velocity(const GraphPatch& p,
                                                   const Eigen::VectorXd& dt_h) {
    const SphereBasis& b = *p.sphere->basis;
    if (dt_h.size() != b.node_count())
        throw ShapeError("normal: height-rate count does not match grid");
    NormalAndVelocity out;
    out.normal.resize(b.node_count(), b.dim);
    out.velocity = p.beta.cwiseProduct(dt_h);
    Eigen::VectorXd er, et, ep;
    for (int i = 0; i < b.node_count(); ++i) {
        local_frame(b, i, er, et, ep);
        // For n = 2 the frame has a single tangent direction; alpha's first
        // frame slot is the colatitude one only when n = 3.
        Eigen::VectorXd tangent;
        if (b.dim == 2) {
            tangent = p.alpha(i, 1) * et;
        } else {
            tangent = p.alpha(i, 0) * et + p.alpha(i, 1) * ep;
        }
        out.normal.row(i) = (p.beta[i] * (er - tangent)).transpose();
    }
    return out;
}

/// The sum of principal curvatures of the graph r = R + h at every node.
///
/// With g = h, rho = R + g, q = |grad_omega g|^2 (all on the unit sphere):
///   H = (beta/rho) [ -(n-1) + Lap_omega g / rho - q / rho^2
///                    - (beta^2/2) ( (grad g . grad q)/rho^3 - 2 q^2/rho^4 ) ]
/// which is the sphere-reference specialization of the general graph
/// curvature with M_0 = R/(R+h) on tangent vectors.
///
/// Pre: h band-limited to degree <= lmax/2 so the quadratic terms stay
/// resolved on the grid; violation raises ResolutionError.
inline Eigen::VectorXd graph_curvature(const GraphPatch& p) {
    const ReferenceSphere& sph = *p.sphere;
    const SphereBasis& b = *sph.basis;
    const int n = b.dim;

    // Resolution check: energy above lmax/2 must be negligible.
    double total = 0.0, high = 0.0;
    for (int k = 0; k < b.mode_count(); ++k) {
        const double e = p.coeffs[k] * p.coeffs[k];
        total += e;
        if (b.modes[k].l > b.lmax / 2) high += e;
    }
    if (total > 0.0 && high > 1e-10 * total)
        throw ResolutionError("curvature: height field is not band-limited to lmax/2");

    const Eigen::VectorXd rho = (p.h.array() + sph.radius).matrix();
    const Eigen::VectorXd lap_g = laplacian(b, p.coeffs);
    const Eigen::VectorXd q = p.grad_h.rowwise().squaredNorm();
    const Eigen::MatrixXd grad_q = gradient(b, analyze(b, q));

    Eigen::VectorXd H(b.node_count());
    for (int i = 0; i < b.node_count(); ++i) {
        const double r = rho[i];
        const double beta2 = p.beta[i] * p.beta[i];
        const double gdq = p.grad_h.row(i).dot(grad_q.row(i));
        const double div_alpha = lap_g[i] / r - q[i] / (r * r);
        const double steep = gdq / (r * r * r) - 2.0 * q[i] * q[i] / (r * r * r * r);
        H[i] = (p.beta[i] / r) * (-(n - 1.0) + div_alpha - 0.5 * beta2 * steep);
    }
    return H;
}

/// Eigenvalue of the linearized curvature operator -H'(0) on degree-l
/// harmonics: a_l = (l(l+n-2) - (n-1)) / R^2. Degree one gives zero (the
/// translation modes); a_0 < 0 reflects the volume mode.
inline double linearized_curvature_mode(int n, int l, double radius) {
    if (l < 0) throw DomainError("curvature mode: degree must be nonnegative");
    if (n < 2) throw DomainError("curvature mode: dimension must be at least 2");
    if (!(radius > 0.0)) throw DomainError("curvature mode: radius must be positive");
    return (static_cast<double>(l) * (l + n - 2) - (n - 1)) / (radius * radius);
}

inline double linearized_curvature_mode(int l, const ReferenceSphere& sph) {
    return linearized_curvature_mode(sph.dim, l, sph.radius);
}

/// CSV export of a nodal height field: index, colatitude, longitude, h.
inline void export_height_csv(const ReferenceSphere& sph, const Eigen::VectorXd& h,
                              std::ostream& os) {
    const SphereBasis& b = *sph.basis;
    if (h.size() != b.node_count()) throw ShapeError("csv export: height count mismatch");
    os << "index,colatitude,longitude,h\n";
    os.precision(17);
    for (int i = 0; i < b.node_count(); ++i)
        os << i << ',' << b.colat[i] << ',' << b.lon[i] << ',' << h[i] << '\n';
}

/// CSV import; node coordinates must match the sphere's own grid.
inline Eigen::VectorXd import_height_csv(const ReferenceSphere& sph, std::istream& is) {
    const SphereBasis& b = *sph.basis;
    std::string line;
    if (!std::getline(is, line) || line.rfind("index,", 0) != 0)
        throw ConfigError("csv import: missing header line");
    Eigen::VectorXd h = Eigen::VectorXd::Zero(b.node_count());
    Eigen::VectorXi seen = Eigen::VectorXi::Zero(b.node_count());
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');
        const int idx = std::stoi(cell);
        if (idx < 0 || idx >= b.node_count())
            throw ShapeError("csv import: node index out of range");
        std::getline(row, cell, ',');  // colatitude, informational
        std::getline(row, cell, ',');  // longitude, informational
        std::getline(row, cell, ',');
        h[idx] = std::stod(cell);
        seen[idx] = 1;
    }
    if (seen.sum() != b.node_count())
        throw ShapeError("csv import: row count does not cover the grid");
    return h;
}

/// JSON export of the harmonic coefficients of a height field.
inline nlohmann::json height_coefficients_json(const ReferenceSphere& sph,
                                               const Eigen::VectorXd& h) {
    const SphereBasis& b = *sph.basis;
    const Eigen::VectorXd c = analyze(b, h);
    nlohmann::json j;
    j["dim"] = b.dim;
    j["lmax"] = b.lmax;
    nlohmann::json arr = nlohmann::json::array();
    for (int k = 0; k < b.mode_count(); ++k) {
        arr.push_back({{"l", b.modes[k].l},
                       {"m", b.modes[k].m},
                       {"kind", b.modes[k].sine ? "sin" : "cos"},
                       {"value", c[k]}});
    }
    j["coefficients"] = arr;
    return j;
}

/// Rebuild nodal heights from a coefficient JSON produced by the exporter.
inline Eigen::VectorXd height_from_coefficients_json(const ReferenceSphere& sph,
                                                     const nlohmann::json& j) {
    const SphereBasis& b = *sph.basis;
    if (j.at("dim").get<int>() != b.dim || j.at("lmax").get<int>() != b.lmax)
        throw ShapeError("coefficient import: basis mismatch");
    Eigen::VectorXd c = Eigen::VectorXd::Zero(b.mode_count());
    int k = 0;
    for (const auto& item : j.at("coefficients")) {
        if (k >= b.mode_count()) throw ShapeError("coefficient import: too many entries");
        const HarmonicMode& mode = b.modes[k];
        if (item.at("l").get<int>() != mode.l || item.at("m").get<int>() != mode.m ||
            (item.at("kind").get<std::string>() == "sin") != mode.sine)
            throw ShapeError("coefficient import: mode ordering mismatch");
        c[k] = item.at("value").get<double>();
        ++k;
    }
    if (k != b.mode_count()) throw ShapeError("coefficient import: too few entries");
    return synthesize(b, c);
}

}  // namespace twophase
