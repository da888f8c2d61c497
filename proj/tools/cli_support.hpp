// SPDX-License-Identifier: BSD-3-Clause
//
// Implementation of the command-line driver. It lives in a header next to
// the thin main() so the test suite can run every subcommand in-process
// and assert on the exact bytes it prints and the exit codes it returns.
//
// Output contract: the JSON document goes to stdout (and, when configured,
// to run.json); the one-line summary goes to stderr so stdout stays
// machine-readable. Identical configuration and seed give byte-identical
// JSON except for the timestamp, which is isolated in the "meta" block.
// Exit codes: 0 success (or zero-free certificate), 1 usage or
// configuration error, 2 a certified violation (zeros detected, or
// instability where stability is asserted), 3 numerically inconclusive.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "twophase/config.hpp"
#include "twophase/equilibria.hpp"
#include "twophase/errors.hpp"
#include "twophase/mode_solvers.hpp"
#include "twophase/selftest.hpp"
#include "twophase/spectrum.hpp"
#include "twophase/symbols.hpp"
#include "twophase/zerocert.hpp"

namespace twophase::cli {

using Json = nlohmann::ordered_json;

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_violation = 2;
inline constexpr int exit_inconclusive = 3;

/// What one subcommand produced: the result block of the JSON envelope,
/// an optional CSV payload, the summary line, and the exit code.
struct CommandOutcome {
    int exit_code = exit_ok;
    Json result = Json::object();
    std::string csv;
    std::string summary;
};

/// Full resolved configuration as nested JSON, in the documented field
/// order, for embedding into every output.
inline Json config_json(const RunConfig& cfg) {
    Json out;
    visit_config_fields(cfg, [&](const char* sec, const char* key, const auto& value) {
        out[sec][key] = value;
    });
    return out;
}

inline std::string utc_timestamp() {
    const std::time_t t =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace detail {

inline Json complex_json(const Complex& z) {
    return Json{{"re", z.real()}, {"im", z.imag()}};
}

inline std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
}

/// Equilibrium temperature consistent with the configured geometry and the
/// conserved energy; the linearization of every spectral and symbol
/// subcommand is frozen there.
inline double linearization_temperature(const RunConfig& cfg) {
    return temperature_from_energy(cfg.conserved_quantities(), cfg.geometry.R,
                                   cfg.build_material());
}

}  // namespace detail

/// `equilibrium`: solve radius and temperature from the conserved
/// quantities and report the equilibrium manifold data.
inline CommandOutcome run_equilibrium(const RunConfig& cfg) {
    const MaterialParams mat = cfg.build_material();
    const ConservedQuantities q = cfg.conserved_quantities();
    const EquilibriumConfig eq = solve_equilibrium(q, mat, cfg.geometry.R_out);

    const double wn = unit_sphere_area(q.n);
    CommandOutcome out;
    out.result["R"] = eq.R;
    out.result["theta"] = eq.theta_star;
    out.result["m"] = q.m;
    out.result["phase1_volume"] = q.m * wn * std::pow(eq.R, q.n) / q.n;
    out.result["surface_area"] = q.m * wn * std::pow(eq.R, q.n - 1);
    out.result["latent_heat"] = latent_heat(mat, eq.theta_star);
    out.result["manifold_dimension"] = eq.manifold_dimension();
    out.summary = "equilibrium: R = " + detail::fmt(eq.R) +
                  ", theta = " + detail::fmt(eq.theta_star) + ", manifold dimension " +
                  std::to_string(eq.manifold_dimension());
    return out;
}

/// `symbols scan`: empirical lower bound of the full boundary symbol over
/// a sector of frequencies, plus the threshold constant assembled from the
/// configured multiplier bound and the sampled drift-symbol bound.
inline CommandOutcome run_symbols_scan(const RunConfig& cfg) {
    const double theta = detail::linearization_temperature(cfg);
    const MaterialParams mat = cfg.build_material();

    ScanParams sp;
    sp.material = cfg.symbol_params(theta);
    sp.sigma = mat.sigma;
    sp.c0 = cfg.symbol.c0;
    sp.b0_along_xi = cfg.symbol.b0;
    sp.m_fn = cfg.symbol.build_modulus();
    const ScanGrid grid;
    const Region sector =
        Region::sector(std::numbers::pi / 2.0 - 1e-3, sp.lambda0, grid.lambda_max);
    const ScanResult res = lower_bound_scan(sp, sector, grid);

    // Empirical sup of |ell| over the same frequency range, feeding the
    // threshold constant together with the asserted multiplier bound M.
    double ell_bound = 0.0;
    for (int i = 0; i < 48; ++i) {
        const double mod = std::pow(10.0, -6.0 + 12.0 * i / 47.0);
        for (int a = -8; a <= 8; ++a) {
            const double ang = a * (std::numbers::pi / 2.0 - 1e-3) / 8.0;
            const Complex z = mod * Complex(std::cos(ang), std::sin(ang));
            ell_bound = std::max(ell_bound, std::abs(psi_and_ell(z, sp.material).ell));
        }
    }
    const double threshold = threshold_constant(sp.material, sp.sigma, cfg.symbol.M,
                                                sp.c0, ell_bound, std::abs(sp.b0_along_xi));

    CommandOutcome out;
    out.result["c_hat"] = res.c_hat;
    out.result["argmin_lambda"] = detail::complex_json(res.argmin_lambda);
    out.result["argmin_tau"] = res.argmin_tau;
    out.result["evaluated"] = res.evaluated;
    out.result["skipped"] = res.skipped;
    out.result["ell_bound_sampled"] = ell_bound;
    out.result["threshold_constant"] = threshold;
    if (res.evaluated == 0 || !std::isfinite(res.c_hat)) {
        out.exit_code = exit_inconclusive;
        out.summary = "symbols scan: no admissible grid points";
        return out;
    }
    out.summary = "symbols scan: c_hat = " + detail::fmt(res.c_hat) + " over " +
                  std::to_string(res.evaluated) + " points (" +
                  std::to_string(res.skipped) + " skipped)";
    return out;
}

/// `lopatinskii certify`: winding certificate for the chosen determinant
/// factor on a right-half-plane truncation of radius run.rmax.
inline CommandOutcome run_certify(const RunConfig& cfg, const std::string& variant_name) {
    SymbolVariant variant;
    if (variant_name == "s11")
        variant = SymbolVariant::S11;
    else if (variant_name == "s22")
        variant = SymbolVariant::S22;
    else
        throw ConfigError("certify: unknown variant '" + variant_name +
                          "' (expected 's11' or 's22')");

    const double theta = detail::linearization_temperature(cfg);
    const SymbolParams par = cfg.symbol_params(theta);
    const Region region = Region::half_plane(cfg.run.rmax, cfg.run.margin);
    const Certificate cert = certify_zero_free(variant, region, par, cfg.run.winding_tol);

    CommandOutcome out;
    out.result["variant"] = variant_name;
    out.result["rmax"] = cfg.run.rmax;
    out.result["verdict"] = cert.verdict == CertVerdict::zero_free      ? "zero_free"
                            : cert.verdict == CertVerdict::zeros_detected ? "zeros_detected"
                                                                          : "inconclusive";
    out.result["winding"] = cert.winding;
    out.result["zero_count"] = cert.zero_count;
    out.result["min_modulus"] = cert.min_modulus;
    out.result["refinement_depth"] = cert.refinement_depth;
    out.result["samples"] = static_cast<int>(cert.samples.size());

    switch (cert.verdict) {
        case CertVerdict::zero_free:
            out.exit_code = exit_ok;
            break;
        case CertVerdict::zeros_detected:
            out.exit_code = exit_violation;
            break;
        case CertVerdict::inconclusive:
            out.exit_code = exit_inconclusive;
            break;
    }
    out.summary = "lopatinskii certify: " + variant_name + " " +
                  std::string(out.result["verdict"]) + " on |z| <= " +
                  detail::fmt(cfg.run.rmax) + ", winding " + std::to_string(cert.winding);
    return out;
}

/// `spectrum compute`: per-degree spectra of the spherical linearization,
/// the kernel bookkeeping, the disconnected block-model count, and a CSV
/// of the scalar dispersion curves.
inline CommandOutcome run_spectrum(const RunConfig& cfg) {
    const RadialGeometry geom = cfg.radial_geometry();
    const double theta = detail::linearization_temperature(cfg);
    const LinearizationParams par = cfg.linearization(theta);
    const int m = cfg.geometry.m;

    CommandOutcome out;
    bool conclusive = true;
    bool semisimple = true;
    int unmatched = 0;
    int unstable_modes = 0;
    double residual_max = 0.0;

    Json per_l = Json::array();
    for (int l = 0; l <= cfg.geometry.L_max; ++l) {
        const ModeSpectrum s = full_mode_eigenvalues(l, geom, par);
        conclusive = conclusive && s.rank_conclusive;
        semisimple = semisimple && s.semisimple;
        unmatched += static_cast<int>(s.non_converged.size());

        Json modes = Json::array();
        for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
            const Complex z = s.eigenvalues[i];
            modes.push_back(Json{{"re", z.real()},
                                 {"im", z.imag()},
                                 {"residual", s.residuals[i]}});
            residual_max = std::max(residual_max, s.residuals[i]);
            if (z.real() > cfg.run.zero_tol) ++unstable_modes;
        }
        per_l.push_back(Json{{"l", l},
                             {"kernel_dim", s.kernel_dim},
                             {"semisimple", s.semisimple},
                             {"conclusive", s.rank_conclusive},
                             {"eigenvalues", modes},
                             {"non_converged", s.non_converged.size()}});
    }

    const KernelReport kr = kernel_analysis(geom, par, m);
    conclusive = conclusive && kr.conclusive;
    semisimple = semisimple && kr.semisimple;

    int positive_count = unstable_modes;
    Json block = Json::object();
    if (m > 1) {
        const BlockSpectrumReport rep = multi_ball_block_spectrum(m, geom, par);
        positive_count = rep.positive_eigenvalue_count;
        Json crossings = Json::array();
        for (const double c : rep.crossing_locations) crossings.push_back(c);
        block["mu_at_zero"] = rep.mu_at_zero;
        block["crossings"] = crossings;
    }

    out.result["theta"] = theta;
    out.result["per_l"] = per_l;
    out.result["kernel_dim"] = kr.dim;
    out.result["semisimple"] = semisimple;
    out.result["positive_count"] = positive_count;
    if (m > 1) out.result["block_model"] = block;
    out.result["gates"] =
        Json{{"grid_independent", unmatched == 0}, {"energy_residual_max", residual_max}};

    // Dispersion curves for plotting: the scalar reduced dispersion value
    // whose roots are the height-coupled eigenvalues, per degree.
    std::ostringstream csv;
    csv << "l,lambda,dispersion\n";
    const double scale = par.sigma * (geom.dim - 1) / (geom.radius * geom.radius);
    for (int l = 0; l <= cfg.geometry.L_max; ++l) {
        for (int i = 0; i <= 120; ++i) {
            const double lambda = -2.5 * scale + 3.0 * scale * i / 120.0;
            csv << l << "," << lambda << ",";
            try {
                csv << reduced_dispersion(lambda, l, geom, par);
            } catch (const Error&) {
                csv << "nan";
            }
            csv << "\n";
        }
    }
    out.csv = csv.str();

    if (!conclusive || unmatched > 0)
        out.exit_code = exit_inconclusive;
    else if (m == 1 && (positive_count > 0 || !semisimple))
        out.exit_code = exit_violation;
    out.summary = "spectrum: kernel dim " + std::to_string(kr.dim) + ", positive count " +
                  std::to_string(positive_count) + " (m = " + std::to_string(m) +
                  "), max energy residual " + detail::fmt(residual_max);
    return out;
}

/// `entropy probe`: constrained criticality of the entropy at the
/// equal-radius configuration for the configured ball count.
inline CommandOutcome run_entropy_probe(const RunConfig& cfg) {
    const MaterialParams mat = cfg.build_material();
    const ConservedQuantities q = cfg.conserved_quantities();
    const EquilibriumConfig eq = solve_equilibrium(q, mat, cfg.geometry.R_out);
    const CriticalityReport rep = entropy_criticality_probe(eq, q, mat);

    CommandOutcome out;
    out.result["m"] = q.m;
    out.result["R"] = eq.R;
    out.result["theta"] = eq.theta_star;
    out.result["is_local_max"] = rep.is_local_max;
    out.result["worst_increase"] = rep.worst_increase;
    out.result["step"] = rep.delta;
    Json dir = Json::array();
    for (int i = 0; i < rep.worst_direction.size(); ++i)
        dir.push_back(rep.worst_direction[i]);
    out.result["worst_direction"] = dir;

    if (q.m == 1) {
        out.exit_code = rep.is_local_max ? exit_ok : exit_violation;
    } else {
        // Volume transfer between balls is known to raise the entropy; a
        // probe that cannot find the increase is inconclusive.
        out.exit_code = rep.is_local_max ? exit_inconclusive : exit_ok;
    }
    out.summary = std::string("entropy probe: ") +
                  (rep.is_local_max ? "local maximum" : "not a local maximum") +
                  " at m = " + std::to_string(q.m) +
                  (q.m > 1 ? ", entropy gain " + detail::fmt(rep.worst_increase) : "");
    return out;
}

/// `selftest`: the built-in verification suite, seeded from run.seed.
inline CommandOutcome run_selftest_command(const RunConfig& cfg) {
    const SelftestReport rep = run_selftest(static_cast<unsigned>(cfg.run.seed));

    CommandOutcome out;
    out.result["seed"] = cfg.run.seed;
    Json checks = Json::array();
    for (const CheckResult& c : rep.checks)
        checks.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    out.result["checks"] = checks;
    out.result["passed"] = static_cast<int>(rep.checks.size()) - rep.failed();
    out.result["failed"] = rep.failed();
    out.exit_code = rep.all_pass() ? exit_ok : exit_violation;
    out.summary = "selftest: " +
                  std::to_string(static_cast<int>(rep.checks.size()) - rep.failed()) + "/" +
                  std::to_string(rep.checks.size()) + " checks passed";
    return out;
}

/// Parse "--section.key value" and "--section.key=value" override tokens
/// left over by the option parser, in command-line order.
inline void apply_override_tokens(RunConfig& cfg, const std::vector<std::string>& tokens) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::string tok = tokens[i];
        if (tok.rfind("--", 0) != 0)
            throw ConfigError("unexpected argument '" + tok + "'");
        tok.erase(0, 2);
        std::string value;
        const auto eq = tok.find('=');
        if (eq != std::string::npos) {
            value = tok.substr(eq + 1);
            tok.erase(eq);
        } else {
            if (++i >= tokens.size())
                throw ConfigError("override --" + tok + " expects a value");
            value = tokens[i];
        }
        apply_config_override(cfg, tok, value);
    }
}

/// Run the driver on an argument list (without the program name). Writes
/// the JSON document to `out`, diagnostics and the summary line to `err`,
/// and returns the exit code.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-phase incompressible flow with phase transitions: equilibria, "
                 "flat-interface boundary symbols, zero-freeness certificates, and "
                 "mode-by-mode spectra of spherical equilibria."};
    app.name("twophase");
    app.allow_extras();
    app.footer("Any configuration field can be overridden as --section.key value, "
               "for example --geometry.N 128. JSON goes to stdout (and run.json if "
               "set); the one-line summary goes to stderr.");

    std::string config_path;
    app.add_option("--config", config_path, "configuration file (sectioned key = value text)");

    auto* sub_equilibrium = app.add_subcommand(
        "equilibrium", "solve the equilibrium radius and temperature from the "
                       "conserved quantities");

    auto* sub_symbols = app.add_subcommand("symbols", "flat-interface boundary symbols");
    sub_symbols->require_subcommand(1);
    auto* sub_scan = sub_symbols->add_subcommand(
        "scan", "lower-bound scan of the full boundary symbol over a frequency sector");

    auto* sub_lop =
        app.add_subcommand("lopatinskii", "zero-freeness certificates for the "
                                          "determinant symbols");
    sub_lop->require_subcommand(1);
    auto* sub_certify = sub_lop->add_subcommand(
        "certify", "winding certificate on a right-half-plane truncation");
    std::string variant = "s22";
    sub_certify->add_option("--variant", variant, "determinant variant: s11 or s22")
        ->capture_default_str();
    double rmax_flag = 0.0;
    auto* rmax_opt = sub_certify->add_option(
        "--rmax", rmax_flag, "truncation radius (shorthand for --run.rmax)");

    auto* sub_spectrum = app.add_subcommand(
        "spectrum", "mode-by-mode spectra of the spherical linearization");
    sub_spectrum->require_subcommand(1);
    auto* sub_compute = sub_spectrum->add_subcommand(
        "compute", "assemble and solve the mode pencils up to L_max");
    sub_compute->footer("CSV columns: l, lambda, dispersion (the scalar reduced "
                        "dispersion value whose roots are height-coupled eigenvalues).");
    int m_flag = 0;
    auto* m_opt =
        sub_compute->add_option("--m", m_flag, "ball count (shorthand for --geometry.m)");

    auto* sub_entropy = app.add_subcommand("entropy", "entropy functional probes");
    sub_entropy->require_subcommand(1);
    auto* sub_probe = sub_entropy->add_subcommand(
        "probe", "constrained criticality probe at the equal-radius configuration");
    int probe_m_flag = 0;
    auto* probe_m_opt =
        sub_probe->add_option("--m", probe_m_flag, "ball count (shorthand for --geometry.m)");

    auto* sub_selftest =
        app.add_subcommand("selftest", "run the built-in verification suite");

    for (CLI::App* sub : {sub_equilibrium, sub_symbols, sub_scan, sub_lop, sub_certify,
                          sub_spectrum, sub_compute, sub_entropy, sub_probe, sub_selftest}) {
        sub->allow_extras();
        sub->fallthrough();
    }

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? exit_ok : exit_usage;
    }

    std::string command;
    if (sub_equilibrium->parsed())
        command = "equilibrium";
    else if (sub_scan->parsed())
        command = "symbols scan";
    else if (sub_certify->parsed())
        command = "lopatinskii certify";
    else if (sub_compute->parsed())
        command = "spectrum compute";
    else if (sub_probe->parsed())
        command = "entropy probe";
    else if (sub_selftest->parsed())
        command = "selftest";
    else {
        err << app.help();
        return exit_usage;
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_config_file(config_path);
        apply_override_tokens(cfg, app.remaining(true));
        if (rmax_opt->count() > 0) cfg.run.rmax = rmax_flag;
        if (m_opt->count() > 0) cfg.geometry.m = m_flag;
        if (probe_m_opt->count() > 0) cfg.geometry.m = probe_m_flag;
        cfg.validate();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    CommandOutcome outcome;
    try {
        if (command == "equilibrium")
            outcome = run_equilibrium(cfg);
        else if (command == "symbols scan")
            outcome = run_symbols_scan(cfg);
        else if (command == "lopatinskii certify")
            outcome = run_certify(cfg, variant);
        else if (command == "spectrum compute")
            outcome = run_spectrum(cfg);
        else if (command == "entropy probe")
            outcome = run_entropy_probe(cfg);
        else
            outcome = run_selftest_command(cfg);
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << "\n";
        return exit_inconclusive;
    } catch (const ResolutionError& e) {
        err << "error: " << e.what() << "\n";
        return exit_inconclusive;
    } catch (const ContourError& e) {
        err << "error: " << e.what() << "\n";
        return exit_inconclusive;
    } catch (const BranchError& e) {
        err << "error: " << e.what() << "\n";
        return exit_inconclusive;
    } catch (const Error& e) {
        // Domain, shape, geometry, solvability and no-equilibrium failures
        // all trace back to an inconsistent configuration.
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    Json envelope;
    envelope["schema"] = 1;
    envelope["command"] = command;
    envelope["config"] = config_json(cfg);
    envelope["result"] = outcome.result;
    envelope["meta"] = Json{{"timestamp", utc_timestamp()}};

    const std::string text = envelope.dump(2) + "\n";
    out << text;
    if (!cfg.run.json.empty()) {
        std::ofstream f(cfg.run.json);
        if (!f) {
            err << "error: cannot write JSON file '" << cfg.run.json << "'\n";
            return exit_usage;
        }
        f << text;
    }
    if (!cfg.run.csv.empty() && !outcome.csv.empty()) {
        std::ofstream f(cfg.run.csv);
        if (!f) {
            err << "error: cannot write CSV file '" << cfg.run.csv << "'\n";
            return exit_usage;
        }
        f << outcome.csv;
    }
    err << outcome.summary << "\n";
    return outcome.exit_code;
}

}  // namespace twophase::cli
