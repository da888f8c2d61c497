// SPDX-License-Identifier: BSD-3-Clause
//
// Run configuration for the command-line driver: a flat, sectioned
// key/value text format with explicit types and strict parsing. Every
// field has a default, so an empty file is a valid configuration; unknown
// sections or keys, duplicate keys, and malformed values are hard errors
// rather than silently ignored typos.
//
//   # example
//   [material]
//   rho2 = 1.8
//   law1 = power
//   p1 = 2.5
//   [geometry]
//   N = 32
//
// Comments start at '#' or ';' and run to the end of the line, values are
// bare tokens without quoting (so they cannot contain '#', ';' or
// whitespace), and keys live in the section most recently opened above
// them. Command-line overrides address the same fields as "section.key"
// pairs and go through the same typed setters, so a flag like
// "--geometry.N 128" is exactly equivalent to editing the file.

#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "twophase/equilibria.hpp"
#include "twophase/errors.hpp"
#include "twophase/radial.hpp"
#include "twophase/symbols.hpp"
#include "twophase/thermo.hpp"

namespace twophase {

/// Selection of one phase's free-energy law plus its scalar parameters.
/// The exponent p only enters the power family and is ignored otherwise.
struct PhaseLawChoice {
    std::string family = "reference";  // "reference" or "power"
    double c = 1.0;                    // heat capacity scale
    double p = 2.0;                    // temperature exponent (power family)
    double mu = 1.0;                   // shear viscosity
    double d = 1.0;                    // heat conductivity

    PhaseLaw build() const {
        if (family == "reference") return PhaseLaw::reference(c, mu, d);
        if (family == "power") return PhaseLaw::power(c, p, mu, d);
        throw ConfigError("unknown phase law family '" + family +
                          "' (expected 'reference' or 'power')");
    }
};

/// [material] densities, surface tension, and the two phase laws. The
/// per-phase law parameters are flattened into suffixed keys (law1, c1,
/// p1, mu1, d1 and likewise with suffix 2).
struct MaterialSection {
    double rho1 = 1.0;
    double rho2 = 2.0;
    double sigma = 1.0;
    PhaseLawChoice law1;
    PhaseLawChoice law2;

    MaterialParams build() const {
        MaterialParams mat;
        mat.rho1 = rho1;
        mat.rho2 = rho2;
        mat.sigma = sigma;
        mat.phase1 = law1.build();
        mat.phase2 = law2.build();
        return mat;
    }
};

/// [geometry] the concentric reference configuration: space dimension,
/// ball radius, ambient radius, ball count for the disconnected family,
/// highest harmonic degree, and radial collocation points per phase.
struct GeometrySection {
    int n = 3;
    double R = 1.0;
    double R_out = 2.0;
    int m = 1;
    int L_max = 4;
    int N = 24;
};

/// [conserved] total mass, total energy, and domain volume. These three
/// numbers determine the equilibrium radius and temperature.
struct ConservedSection {
    double c0 = 0.0;
    double E0 = 0.0;
    double volume = 1.0;

    /// Conserved quantities that reproduce a given geometry at temperature
    /// theta, i.e. for which the equilibrium solve returns that geometry's
    /// ball radius and the temperature theta. The shipped defaults are
    /// matching(default material, default geometry, 1.0).
    static ConservedSection matching(const MaterialSection& ms, const GeometrySection& gs,
                                     double theta) {
        const MaterialParams mat = ms.build();
        const double wn = unit_sphere_area(gs.n);
        const double v1 = gs.m * wn * std::pow(gs.R, gs.n) / gs.n;
        const double volume = wn * std::pow(gs.R_out, gs.n) / gs.n;
        if (v1 >= volume)
            throw ConfigError("conserved: balls exhaust the configured domain");
        const double v2 = volume - v1;
        ConservedSection out;
        out.volume = volume;
        out.c0 = mat.rho1 * v1 + mat.rho2 * v2;
        out.E0 = mat.rho1 * v1 * eval_phase(mat.phase1, theta).epsilon +
                 mat.rho2 * v2 * eval_phase(mat.phase2, theta).epsilon +
                 mat.sigma * gs.m * wn * std::pow(gs.R, gs.n - 1);
        return out;
    }
};

/// [symbol] coefficients of the full boundary symbol: the drift
/// coefficient multiplying the ell term, the tangential drift component
/// along the unit wave vector, the choice of curvature multiplier m(z),
/// and the asserted bound M on |m| over the closed right half-plane that
/// enters the threshold constant.
struct SymbolSection {
    double c0 = 0.0;
    double b0 = 0.0;
    std::string m_fn = "one";  // "one", "zero" or "decay"
    double M = 1.0;

    /// All shipped multiplier choices satisfy |m(z)| <= 1 on Re z >= 0, so
    /// the default bound M = 1 is valid for each of them.
    ModulusFn build_modulus() const {
        if (m_fn == "one") return [](Complex) { return Complex(1.0, 0.0); };
        if (m_fn == "zero") return [](Complex) { return Complex(0.0, 0.0); };
        if (m_fn == "decay") return [](Complex z) { return 1.0 / (1.0 + z); };
        throw ConfigError("unknown curvature multiplier '" + m_fn +
                          "' (expected 'one', 'zero' or 'decay')");
    }
};

/// [run] numerical tolerances, the random seed, and output paths. Empty
/// paths mean "do not write that file"; JSON always also goes to stdout.
struct RunSection {
    double rmax = 1e3;          // truncation radius for winding contours
    double margin = 1e-3;       // clearance kept from the branch cuts
    double winding_tol = 1e-12; // argument resolution of the winding count
    double zero_tol = 1e-8;     // snap radius for spectrum kernel eigenvalues
    double residual_tol = 1e-6; // energy-identity residual gate
    int seed = 2026;
    std::string json;
    std::string csv;
};

/// The full resolved configuration. Default construction materializes
/// every default, including conserved quantities that reproduce the
/// default geometry at unit temperature.
struct RunConfig {
    MaterialSection material;
    GeometrySection geometry;
    ConservedSection conserved;
    SymbolSection symbol;
    RunSection run;

    RunConfig() : conserved(ConservedSection::matching(material, geometry, 1.0)) {}

    MaterialParams build_material() const { return material.build(); }

    ConservedQuantities conserved_quantities() const {
        ConservedQuantities q;
        q.c0 = conserved.c0;
        q.E0 = conserved.E0;
        q.volume = conserved.volume;
        q.n = geometry.n;
        q.m = geometry.m;
        return q;
    }

    RadialGeometry radial_geometry() const {
        return make_radial_geometry(geometry.n, geometry.R, geometry.R_out, geometry.N);
    }

    LinearizationParams linearization(double theta) const {
        return LinearizationParams::from_material(build_material(), theta);
    }

    SymbolParams symbol_params(double theta) const {
        return SymbolParams::from_material(build_material(), theta);
    }

    /// Cross-field consistency checks that the typed setters cannot see.
    /// Throws ConfigError with the offending field in the message.
    void validate() const {
        if (geometry.n != 2 && geometry.n != 3)
            throw ConfigError("geometry.n: space dimension must be 2 or 3");
        if (geometry.m < 1) throw ConfigError("geometry.m: need at least one ball");
        if (!(geometry.R > 0.0)) throw ConfigError("geometry.R: radius must be positive");
        if (!(geometry.R_out > geometry.R))
            throw ConfigError("geometry.R_out: ambient radius must exceed R");
        if (geometry.N < 8)
            throw ConfigError("geometry.N: need at least 8 radial points per phase");
        if (geometry.L_max < 0) throw ConfigError("geometry.L_max: degree must be >= 0");
        if (!(conserved.volume > 0.0))
            throw ConfigError("conserved.volume: domain volume must be positive");
        if (!(symbol.M > 0.0)) throw ConfigError("symbol.M: multiplier bound must be positive");
        if (!(run.rmax > 0.0)) throw ConfigError("run.rmax: radius must be positive");
        if (!(run.margin > 0.0)) throw ConfigError("run.margin: clearance must be positive");
        if (!(run.winding_tol > 0.0 && run.zero_tol > 0.0 && run.residual_tol > 0.0))
            throw ConfigError("run: tolerances must be positive");
        if (run.seed < 0) throw ConfigError("run.seed: seed must be non-negative");
        build_material().validate();
        symbol.build_modulus();
    }
};

/// Enumerate every configurable field as (section, key, reference). The
/// parser, the override mechanism, and the resolved-config dumps all go
/// through this single list, so they cannot drift apart. Visitation order
/// is the documented order of the config file.
template <class Config, class Visitor>
void visit_config_fields(Config& cfg, Visitor&& v) {
    v("material", "rho1", cfg.material.rho1);
    v("material", "rho2", cfg.material.rho2);
    v("material", "sigma", cfg.material.sigma);
    v("material", "law1", cfg.material.law1.family);
    v("material", "c1", cfg.material.law1.c);
    v("material", "p1", cfg.material.law1.p);
    v("material", "mu1", cfg.material.law1.mu);
    v("material", "d1", cfg.material.law1.d);
    v("material", "law2", cfg.material.law2.family);
    v("material", "c2", cfg.material.law2.c);
    v("material", "p2", cfg.material.law2.p);
    v("material", "mu2", cfg.material.law2.mu);
    v("material", "d2", cfg.material.law2.d);
    v("geometry", "n", cfg.geometry.n);
    v("geometry", "R", cfg.geometry.R);
    v("geometry", "R_out", cfg.geometry.R_out);
    v("geometry", "m", cfg.geometry.m);
    v("geometry", "L_max", cfg.geometry.L_max);
    v("geometry", "N", cfg.geometry.N);
    v("conserved", "c0", cfg.conserved.c0);
    v("conserved", "E0", cfg.conserved.E0);
    v("conserved", "volume", cfg.conserved.volume);
    v("symbol", "c0", cfg.symbol.c0);
    v("symbol", "b0", cfg.symbol.b0);
    v("symbol", "m_fn", cfg.symbol.m_fn);
    v("symbol", "M", cfg.symbol.M);
    v("run", "rmax", cfg.run.rmax);
    v("run", "margin", cfg.run.margin);
    v("run", "winding_tol", cfg.run.winding_tol);
    v("run", "zero_tol", cfg.run.zero_tol);
    v("run", "residual_tol", cfg.run.residual_tol);
    v("run", "seed", cfg.run.seed);
    v("run", "json", cfg.run.json);
    v("run", "csv", cfg.run.csv);
}

/// Human-readable type tag of a config field, for help text.
inline const char* config_type_name(const int&) { return "int"; }
inline const char* config_type_name(const double&) { return "real"; }
inline const char* config_type_name(const std::string&) { return "string"; }

namespace detail {

inline std::string field_label(const std::string& section, const std::string& key) {
    return section + "." + key;
}

inline void assign_config(int& slot, const std::string& text, const std::string& label) {
    int value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last)
        throw ConfigError(label + ": expected an integer, got '" + text + "'");
    slot = value;
}

inline void assign_config(double& slot, const std::string& text, const std::string& label) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last)
        throw ConfigError(label + ": expected a real number, got '" + text + "'");
    slot = value;
}

inline void assign_config(std::string& slot, const std::string& text, const std::string&) {
    slot = text;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Set one field by name with strict type checking. Throws ConfigError
/// for unknown sections, unknown keys, or values of the wrong type.
inline void set_config_value(RunConfig& cfg, const std::string& section,
                             const std::string& key, const std::string& value) {
    bool section_known = false;
    bool assigned = false;
    visit_config_fields(cfg, [&](const char* sec, const char* k, auto& slot) {
        if (section != sec) return;
        section_known = true;
        if (assigned || key != k) return;
        detail::assign_config(slot, value, detail::field_label(section, key));
        assigned = true;
    });
    if (!assigned) {
        if (!section_known) throw ConfigError("unknown config section '" + section + "'");
        throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
    }
}

/// Apply a command-line override of the form "section.key". Throws
/// ConfigError when the address is malformed or names no field.
inline void apply_config_override(RunConfig& cfg, const std::string& address,
                                  const std::string& value) {
    const auto dot = address.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == address.size())
        throw ConfigError("override '" + address + "': expected the form section.key");
    set_config_value(cfg, address.substr(0, dot), address.substr(dot + 1), value);
}

/// Parse a complete configuration from text. Starts from the defaults, so
/// the empty string yields the default configuration.
inline RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::unordered_set<std::string> seen;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string label = "config line " + std::to_string(lineno);
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(label + ": unterminated section header '" + line + "'");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError(label + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(label + ": expected 'key = value', got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(label + ": missing key before '='");
        if (value.empty()) throw ConfigError(label + ": missing value after '='");
        if (section.empty())
            throw ConfigError(label + ": key '" + key + "' appears before any [section]");
        const std::string address = detail::field_label(section, key);
        if (!seen.insert(address).second)
            throw ConfigError(label + ": duplicate key '" + address + "'");
        try {
            set_config_value(cfg, section, key, value);
        } catch (const ConfigError& err) {
            throw ConfigError(label + ": " + err.what());
        }
    }
    return cfg;
}

/// Parse a configuration file from disk. A missing file is an error; use
/// the default-constructed RunConfig when no file is wanted.
inline RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace twophase
