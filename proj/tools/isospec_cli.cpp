// Command-line front end: catalog potentials in, deterministic CSV/JSON out.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or configuration
// error, 3 numerical failure.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "isospec/catalog.hpp"
#include "isospec/hierarchy.hpp"
#include "isospec/io.hpp"
#include "isospec/riccati.hpp"
#include "isospec/scattering.hpp"
#include "isospec/schrodinger.hpp"
#include "isospec/susy.hpp"
#include "isospec/verify.hpp"
#include "isospec/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct CliOptions {
    std::string manifest_path;
    std::string potential = "harmonic";
    std::vector<std::string> params; // k=v
    std::string table_path;
    std::string name;
    double x_min = -10.0;
    double x_max = 10.0;
    int n = 2001;
    std::vector<double> lambdas;
    std::vector<double> ks;
    int levels = 5;
    double tol = -1.0; // subcommand-specific default when negative
    double k_override = std::numeric_limits<double>::quiet_NaN();
    std::string out_dir = ".";
    std::string format = "csv";
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--manifest", opt.manifest_path, "JSON manifest; flags override its fields");
    cmd->add_option("--potential", opt.potential,
                    "catalog family: harmonic|poschl_teller|square_well|morse|box|tabulated");
    cmd->add_option("--param", opt.params, "family parameter as key=value (repeatable)");
    cmd->add_option("--table", opt.table_path, "CSV table for --potential tabulated");
    cmd->add_option("--name", opt.name, "identifier used in output file names");
    cmd->add_option("--xmin", opt.x_min, "left grid edge");
    cmd->add_option("--xmax", opt.x_max, "right grid edge");
    cmd->add_option("--n", opt.n, "number of grid nodes");
    cmd->add_option("--lambda", opt.lambdas, "deformation parameter (repeatable)");
    cmd->add_option("--levels", opt.levels, "number of bound levels to compare");
    cmd->add_option("--tol", opt.tol, "primary tolerance of the subcommand");
    cmd->add_option("--out-dir", opt.out_dir, "output directory");
    cmd->add_option("--format", opt.format, "table format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
}

isospec::RunManifest build_manifest(const CLI::App* cmd, const CliOptions& opt) {
    isospec::RunManifest m;
    if (!opt.manifest_path.empty()) m = isospec::read_manifest(opt.manifest_path);

    auto set_if = [&](const char* flag, auto setter) {
        if (cmd->count(flag) > 0) setter();
    };
    set_if("--potential", [&] { m.spec.family = isospec::parse_family(opt.potential); });
    if (cmd->count("--potential") > 0 && cmd->count("--name") == 0 && opt.manifest_path.empty())
        m.spec.name = isospec::family_name(m.spec.family);
    set_if("--name", [&] { m.spec.name = opt.name; });
    set_if("--table", [&] { m.spec.source_path = opt.table_path; });
    set_if("--xmin", [&] { m.x_min = opt.x_min; });
    set_if("--xmax", [&] { m.x_max = opt.x_max; });
    set_if("--n", [&] { m.n = opt.n; });
    set_if("--lambda", [&] { m.lambdas = opt.lambdas; });
    set_if("--levels", [&] { m.levels = opt.levels; });
    set_if("--out-dir", [&] { m.out_dir = opt.out_dir; });
    set_if("--format", [&] { m.format = opt.format; });
    for (const std::string& kv : opt.params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw isospec::PreconditionError("--param expects key=value, got '" + kv + "'");
        try {
            std::size_t used = 0;
            const std::string value = kv.substr(eq + 1);
            m.spec.params[kv.substr(0, eq)] = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw isospec::PreconditionError("--param value is not numeric in '" + kv + "'");
        }
    }
    if (opt.manifest_path.empty() && m.spec.name.empty())
        m.spec.name = isospec::family_name(m.spec.family);
    if (m.tool_version.empty()) m.tool_version = isospec::kVersion;
    return m;
}

// Writes one series as two-column CSV (or a JSON twin with --format json),
// skipping masked nodes. Returns the emitted file name.
std::string emit_series(isospec::RunManifest& m, const std::string& stem,
                        const std::string& x_header, const std::string& v_header,
                        const std::vector<double>& x, const isospec::SampledFunction& f) {
    std::vector<double> xs, vs;
    xs.reserve(x.size());
    vs.reserve(x.size());
    for (int i = 0; i < f.size(); ++i) {
        if (!f.is_valid(i)) continue;
        xs.push_back(x[static_cast<std::size_t>(i)]);
        vs.push_back(f.values[static_cast<std::size_t>(i)]);
    }
    const fs::path dir(m.out_dir);
    if (m.format == "json") {
        const std::string file = stem + ".json";
        json j;
        j[x_header] = xs;
        j[v_header] = vs;
        std::ofstream out(dir / file, std::ios::binary);
        if (!out) throw isospec::IoError("cannot open " + (dir / file).string());
        out << j.dump(2) << '\n';
        m.outputs.push_back(file);
        return file;
    }
    const std::string file = stem + ".csv";
    isospec::write_csv(dir / file, x_header + "," + v_header, {xs, vs});
    m.outputs.push_back(file);
    return file;
}

std::string emit_plain(isospec::RunManifest& m, const std::string& stem,
                       const std::string& x_header, const std::string& v_header,
                       const std::vector<double>& x, const std::vector<double>& v) {
    const fs::path dir(m.out_dir);
    if (m.format == "json") {
        const std::string file = stem + ".json";
        json j;
        j[x_header] = x;
        j[v_header] = v;
        std::ofstream out(dir / file, std::ios::binary);
        if (!out) throw isospec::IoError("cannot open " + (dir / file).string());
        out << j.dump(2) << '\n';
        m.outputs.push_back(file);
        return file;
    }
    const std::string file = stem + ".csv";
    isospec::write_csv(dir / file, x_header + "," + v_header, {x, v});
    m.outputs.push_back(file);
    return file;
}

void emit_report(isospec::RunManifest& m, const std::string& file, const json& j) {
    const fs::path path = fs::path(m.out_dir) / file;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw isospec::IoError("cannot open " + path.string());
    out << j.dump(2) << '\n';
    m.outputs.push_back(file);
}

void finalize_manifest(isospec::RunManifest& m) {
    std::sort(m.outputs.begin(), m.outputs.end());
    json j = isospec::to_json(m);
    const fs::path path = fs::path(m.out_dir) / "run_manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw isospec::IoError("cannot open " + path.string());
    out << j.dump(2) << '\n';
}

struct Problem {
    isospec::Grid grid;
    isospec::ResolvedPotential resolved;
    isospec::WaveFunction u0;          // physical zero mode
    isospec::SampledFunction shifted;  // V - E0
    isospec::WaveFunction u0_shifted;  // same samples, energy 0
};

Problem setup(const isospec::RunManifest& m) {
    Problem p;
    p.grid = m.grid();
    p.resolved = isospec::resolve_potential(m.spec, p.grid);
    p.u0 = isospec::ground_state_of(p.resolved, p.grid);
    p.shifted = isospec::shift_to_zero_ground(p.resolved.V, p.u0.energy);
    p.u0_shifted = p.u0;
    p.u0_shifted.energy = 0.0;
    return p;
}

int run_solve(isospec::RunManifest m) {
    fs::create_directories(m.out_dir);
    Problem p = setup(m);
    m.shift = p.u0.energy;
    const auto xs = p.grid.nodes();
    emit_series(m, m.spec.name + "_potential", "x", "value", xs, p.resolved.V);
    emit_series(m, m.spec.name + "_ground_state", "x", "value", xs, p.u0.samples);

    const int levels = std::max(1, m.levels);
    const isospec::Spectrum spec =
        isospec::compute_spectrum(isospec::discretize(p.resolved.V, p.grid), levels);
    std::vector<double> idx(spec.energies.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<double>(i);
    emit_plain(m, m.spec.name + "_spectrum", "n", "energy", idx, spec.energies);

    json rep;
    rep["version"] = isospec::kVersion;
    rep["potential_id"] = m.spec.name;
    rep["ground_energy"] = p.u0.energy;
    rep["energies"] = spec.energies;
    emit_report(m, m.spec.name + "_solve_report.json", rep);
    finalize_manifest(m);
    return kExitOk;
}

int run_family(isospec::RunManifest m, double tol) {
    fs::create_directories(m.out_dir);
    Problem p = setup(m);
    m.shift = p.u0.energy;
    const auto xs = p.grid.nodes();
    const double gs_tol = tol > 0.0 ? tol : m.tolerances.gs_residual;

    json diag;
    diag["version"] = isospec::kVersion;
    diag["potential_id"] = m.spec.name;
    bool all_ok = true;
    for (double lambda : m.lambdas) {
        const isospec::FamilyMember member =
            isospec::deformed_potential(p.shifted, p.u0_shifted, lambda);
        const isospec::Superpotential wg =
            isospec::general_superpotential(p.u0_shifted, lambda);
        const std::string tag = isospec::format_lambda(lambda);
        emit_series(m, "family_lambda_" + tag, "x", "value", xs, member.potential);
        emit_series(m, "family_gs_lambda_" + tag, "x", "value", xs,
                    member.ground_state.samples);
        emit_series(m, "family_w_lambda_" + tag, "x", "value", xs, wg.samples);

        json d;
        d["lambda"] = lambda;
        d["partner_deviation"] = member.diagnostics.partner_deviation;
        d["gs_residual"] = member.diagnostics.gs_residual;
        d["norm_error"] = member.diagnostics.norm_error;
        const bool ok = member.diagnostics.partner_deviation < m.tolerances.partner &&
                        member.diagnostics.gs_residual < gs_tol &&
                        member.diagnostics.norm_error < m.tolerances.norm;
        d["passed"] = ok;
        all_ok = all_ok && ok;
        diag["members"].push_back(d);
    }
    if (m.lambdas.empty()) {
        emit_series(m, "parent_potential", "x", "value", xs, p.shifted);
        emit_series(m, "parent_ground_state", "x", "value", xs, p.u0.samples);
    }
    diag["shift"] = p.u0.energy;
    diag["passed"] = all_ok;
    emit_report(m, "family_diagnostics.json", diag);
    finalize_manifest(m);
    if (!all_ok) {
        std::cerr << "family: diagnostics exceeded tolerances (see family_diagnostics.json)\n";
        return kExitVerifyFailed;
    }
    return kExitOk;
}

int run_partner(isospec::RunManifest m, double tol) {
    fs::create_directories(m.out_dir);
    Problem p = setup(m);
    m.shift = p.u0.energy;
    const auto xs = p.grid.nodes();
    const double dev_tol = tol > 0.0 ? tol : m.tolerances.partner;

    const isospec::Superpotential wp = isospec::witten_superpotential(p.u0_shifted);
    emit_series(m, "partner_wp", "x", "value", xs, wp.samples);
    emit_series(m, "partner_vplus", "x", "value", xs, isospec::fermionic_partner(wp));

    const std::vector<double> devs =
        isospec::partner_uniqueness(p.u0_shifted, m.lambdas, dev_tol);
    json rep;
    rep["version"] = isospec::kVersion;
    rep["potential_id"] = m.spec.name;
    rep["tolerance"] = dev_tol;
    bool all_ok = true;
    for (std::size_t i = 0; i < devs.size(); ++i) {
        json d;
        d["lambda"] = m.lambdas[i];
        d["deviation"] = devs[i];
        d["passed"] = devs[i] < dev_tol;
        all_ok = all_ok && devs[i] < dev_tol;
        rep["deviations"].push_back(d);
    }
    rep["passed"] = all_ok;
    emit_report(m, "partner_report.json", rep);
    finalize_manifest(m);
    return all_ok ? kExitOk : kExitVerifyFailed;
}

int run_superpose(isospec::RunManifest m, double tol, double k_override) {
    if (m.lambdas.size() != 4)
        throw isospec::PreconditionError(
            "superpose needs exactly four --lambda values: lambda, lambda1, lambda2, lambda3");
    fs::create_directories(m.out_dir);
    Problem p = setup(m);
    const auto xs = p.grid.nodes();
    const double rel_tol = tol > 0.0 ? tol : 1e-9;

    const double lam = m.lambdas[0], l1 = m.lambdas[1], l2 = m.lambdas[2], l3 = m.lambdas[3];
    const double k_closed = isospec::lambda_cross_ratio(lam, l1, l2, l3);
    const isospec::Superpotential target =
        isospec::general_superpotential(p.u0_shifted, lam);
    const isospec::RiccatiTriple triple =
        isospec::make_triple(isospec::general_superpotential(p.u0_shifted, l1),
                             isospec::general_superpotential(p.u0_shifted, l2),
                             isospec::general_superpotential(p.u0_shifted, l3));
    const isospec::CrossRatio measured = isospec::cross_ratio(target, triple, rel_tol);
    const double k_used = std::isnan(k_override) ? measured.k_estimate : k_override;
    const isospec::Superpotential rebuilt = isospec::superpose(triple, k_used);

    double rebuild_dev = 0.0;
    for (int i = 0; i < rebuilt.samples.size(); ++i)
        if (rebuilt.samples.is_valid(i) && target.samples.is_valid(i) &&
            std::isnan(k_override))
            rebuild_dev = std::max(rebuild_dev, std::abs(rebuilt.samples.values[i] -
                                                         target.samples.values[i]));

    emit_series(m, "superpose_w1", "x", "value", xs, triple.w1.samples);
    emit_series(m, "superpose_w2", "x", "value", xs, triple.w2.samples);
    emit_series(m, "superpose_w3", "x", "value", xs, triple.w3.samples);
    emit_series(m, "superpose_target", "x", "value", xs, target.samples);
    emit_series(m, "superpose_rebuilt", "x", "value", xs, rebuilt.samples);

    json rep;
    rep["version"] = isospec::kVersion;
    rep["lambdas"] = m.lambdas;
    rep["k_estimate"] = measured.k_estimate;
    rep["k_mean"] = measured.k_mean;
    rep["k_used"] = k_used;
    rep["constancy"] = measured.constancy;
    rep["valid_fraction"] = measured.valid_fraction;
    rep["lambda_cross_ratio"] = k_closed;
    rep["closed_form_deviation"] = std::abs(measured.k_estimate - k_closed);
    if (std::isnan(k_override)) rep["rebuild_deviation"] = rebuild_dev;
    emit_report(m, "superpose_report.json", rep);
    finalize_manifest(m);
    return kExitOk;
}

int run_iterate(isospec::RunManifest m, double tol) {
    if (m.lambdas.empty())
        throw isospec::PreconditionError(
            "iterate needs at least one --lambda (the last one is the free parameter)");
    fs::create_directories(m.out_dir);
    Problem p = setup(m);
    const auto xs = p.grid.nodes();
    const double partner_tol = tol > 0.0 ? tol : 1e-3;

    isospec::HierarchyState state = isospec::init_hierarchy(p.u0_shifted);
    const isospec::SampledFunction vp0 = isospec::fermionic_partner(state.w_particular);
    emit_series(m, "iterate_wp_order_0", "x", "value", xs, state.w_particular.samples);

    json rep;
    rep["version"] = isospec::kVersion;
    rep["lambdas"] = m.lambdas;
    bool all_ok = true;
    for (std::size_t j = 0; j + 1 < m.lambdas.size(); ++j) {
        state = isospec::extend(state, m.lambdas[j]);
        const isospec::SampledFunction vp = isospec::fermionic_partner(state.w_particular);
        double dev = 0.0;
        for (int i = 1; i < vp.size() - 1; ++i)
            if (vp.is_valid(i) && vp0.is_valid(i))
                dev = std::max(dev, std::abs(vp.values[i] - vp0.values[i]));
        json d;
        d["order"] = state.order;
        d["lambda"] = m.lambdas[j];
        d["partner_deviation"] = dev;
        d["passed"] = dev < partner_tol;
        all_ok = all_ok && dev < partner_tol;
        rep["orders"].push_back(d);
        emit_series(m, "iterate_wp_order_" + std::to_string(state.order), "x", "value", xs,
                    state.w_particular.samples);
    }
    const isospec::Superpotential wg = isospec::general_at_order(state, m.lambdas.back());
    emit_series(m, "iterate_general", "x", "value", xs, wg.samples);
    rep["free_lambda"] = m.lambdas.back();
    rep["passed"] = all_ok;
    emit_report(m, "iterate_report.json", rep);
    finalize_manifest(m);
    return all_ok ? kExitOk : kExitVerifyFailed;
}

int run_verify(isospec::RunManifest m, double tol) {
    fs::create_directories(m.out_dir);
    Problem p = setup(m);
    m.shift = p.u0.energy;
    if (tol > 0.0) m.tolerances.spectrum = tol;

    isospec::VerificationReport report = isospec::isospectrality_report(
        p.shifted, p.grid, p.u0_shifted, m.lambdas, m.levels, m.tolerances.spectrum);
    report.potential_id = m.spec.name;
    report.tolerances = m.tolerances;
    if (tol > 0.0) report.tolerances.spectrum = tol;

    // Scattering invariance applies when the physical potential is
    // short-range on this grid and binds a negative-energy zero mode.
    const bool short_range =
        std::abs(p.resolved.V.values.front()) < m.tolerances.flatness &&
        std::abs(p.resolved.V.values.back()) < m.tolerances.flatness;
    if (short_range && p.u0.energy < 0.0) {
        const std::vector<double> ks = {0.5, 1.0, 2.0};
        for (double lambda : m.lambdas)
            report.scattering_deltas.push_back(isospec::scattering_invariance(
                p.resolved.V, p.u0, lambda, ks, m.tolerances.scattering));
    }
    report.evaluate();
    emit_report(m, "verify_report.json", isospec::to_json(report));
    finalize_manifest(m);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
    return report.passed ? kExitOk : kExitVerifyFailed;
}

int run_scatter(isospec::RunManifest m, std::vector<double> ks, double tol) {
    if (ks.empty()) ks = {0.5, 1.0, 2.0};
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    fs::create_directories(m.out_dir);
    const isospec::Grid grid = m.grid();
    const isospec::ResolvedPotential resolved = isospec::resolve_potential(m.spec, grid);
    const double flat_tol = tol > 0.0 ? tol : m.tolerances.flatness;

    json rep;
    rep["version"] = isospec::kVersion;
    rep["potential_id"] = m.spec.name;

    auto sweep = [&](const isospec::SampledFunction& V, const std::string& suffix) {
        std::vector<double> r_abs, t_abs;
        std::vector<std::complex<double>> r, t;
        for (double k : ks) {
            const isospec::ScatteringData d =
                isospec::scattering_coefficients(V, grid, k, flat_tol);
            r.push_back(d.reflection);
            t.push_back(d.transmission);
            r_abs.push_back(std::abs(d.reflection));
            t_abs.push_back(std::abs(d.transmission));
            json row;
            row["k"] = k;
            row["R_re"] = d.reflection.real();
            row["R_im"] = d.reflection.imag();
            row["T_re"] = d.transmission.real();
            row["T_im"] = d.transmission.imag();
            row["unitarity_defect"] = d.unitarity_defect;
            rep["amplitudes" + suffix].push_back(row);
        }
        emit_plain(m, "scatter_R_abs" + suffix, "k", "value", ks, r_abs);
        emit_plain(m, "scatter_T_abs" + suffix, "k", "value", ks, t_abs);
        if (m.format == "csv") {
            isospec::write_csv_complex(fs::path(m.out_dir) / ("scatter_R" + suffix + ".csv"),
                                       "k,re,im", ks, r);
            isospec::write_csv_complex(fs::path(m.out_dir) / ("scatter_T" + suffix + ".csv"),
                                       "k,re,im", ks, t);
            m.outputs.push_back("scatter_R" + suffix + ".csv");
            m.outputs.push_back("scatter_T" + suffix + ".csv");
        }
    };
    sweep(resolved.V, "");
    if (!m.lambdas.empty()) {
        const isospec::WaveFunction u0 = isospec::ground_state_of(resolved, grid);
        for (double lambda : m.lambdas) {
            const isospec::SampledFunction delta = isospec::deformation_term(u0, lambda);
            isospec::SampledFunction V_lambda = resolved.V;
            for (int i = 0; i < V_lambda.size(); ++i)
                V_lambda.values[i] += delta.values[i];
            sweep(V_lambda, "_lambda_" + isospec::format_lambda(lambda));
        }
    }
    emit_report(m, "scatter_report.json", rep);
    finalize_manifest(m);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"strictly isospectral potential families via the double-Darboux "
                 "general-Riccati construction"};
    app.set_version_flag("--version", isospec::kVersion);
    app.require_subcommand(1);

    std::map<std::string, CliOptions> opts;
    std::map<std::string, CLI::App*> cmds;
    for (const char* name : {"solve", "family", "partner", "superpose", "iterate", "verify",
                             "scatter"}) {
        CLI::App* cmd = app.add_subcommand(name, "");
        add_common_options(cmd, opts[name]);
        cmds[name] = cmd;
    }
    cmds["solve"]->description("potential, ground state and spectrum of one catalog entry");
    cmds["family"]->description("deformed potentials, ground states and superpotentials per lambda");
    cmds["partner"]->description("Witten superpotential, fermionic partner, uniqueness check");
    cmds["superpose"]->description("cross-ratio invariant and three-solution reconstruction");
    cmds["iterate"]->description("multi-parameter hierarchy; last --lambda stays free");
    cmds["verify"]->description("isospectrality, partner uniqueness, residuals, scattering");
    cmds["scatter"]->description("reflection/transmission amplitudes over --k values");
    cmds["scatter"]->add_option("--k", opts["scatter"].ks, "wavenumber (repeatable)");
    cmds["superpose"]->add_option("--k", opts["superpose"].k_override,
                                  "superpose at this k instead of the measured one");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        for (auto& [name, cmd] : cmds) {
            if (!cmd->parsed()) continue;
            CliOptions& o = opts[name];
            isospec::RunManifest m = build_manifest(cmd, o);
            if (name == "solve") return run_solve(std::move(m));
            if (name == "family") return run_family(std::move(m), o.tol);
            if (name == "partner") return run_partner(std::move(m), o.tol);
            if (name == "superpose") return run_superpose(std::move(m), o.tol, o.k_override);
            if (name == "iterate") return run_iterate(std::move(m), o.tol);
            if (name == "verify") return run_verify(std::move(m), o.tol);
            if (name == "scatter") return run_scatter(std::move(m), o.ks, o.tol);
        }
    } catch (const isospec::SingularBandError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const isospec::GridError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const isospec::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const isospec::PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const isospec::Error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}
