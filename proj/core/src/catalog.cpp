#include "isospec/catalog.hpp"

#include <cmath>

#include "isospec/io.hpp"

namespace isospec {

namespace {

double require_param(const PotentialSpec& spec, const std::string& key) {
    auto it = spec.params.find(key);
    if (it == spec.params.end())
        throw PreconditionError("potential '" + spec.name + "' (" + family_name(spec.family) +
                                ") requires parameter '" + key + "'");
    return it->second;
}

double param_or(const PotentialSpec& spec, const std::string& key, double fallback) {
    auto it = spec.params.find(key);
    return it == spec.params.end() ? fallback : it->second;
}

WaveFunction normalized_on_grid(SampledFunction samples, double energy) {
    SampledFunction sq = samples;
    for (double& v : sq.values) v *= v;
    const double norm = std::sqrt(total_integral(sq));
    if (!(norm > 0.0))
        throw NumericalError("analytic ground state has zero norm on this grid");
    for (double& v : samples.values) v /= norm;
    WaveFunction psi;
    psi.samples = std::move(samples);
    psi.energy = energy;
    psi.normalized = true;
    return psi;
}

} // namespace

PotentialFamily parse_family(const std::string& name) {
    if (name == "harmonic") return PotentialFamily::harmonic;
    if (name == "poschl_teller") return PotentialFamily::poschl_teller;
    if (name == "square_well") return PotentialFamily::square_well;
    if (name == "morse") return PotentialFamily::morse;
    if (name == "box") return PotentialFamily::box;
    if (name == "tabulated") return PotentialFamily::tabulated;
    throw PreconditionError("unknown potential family '" + name + "'");
}

std::string family_name(PotentialFamily family) {
    switch (family) {
    case PotentialFamily::harmonic: return "harmonic";
    case PotentialFamily::poschl_teller: return "poschl_teller";
    case PotentialFamily::square_well: return "square_well";
    case PotentialFamily::morse: return "morse";
    case PotentialFamily::box: return "box";
    case PotentialFamily::tabulated: return "tabulated";
    }
    throw PreconditionError("unknown potential family");
}

ResolvedPotential resolve_potential(const PotentialSpec& spec, const Grid& grid) {
    ResolvedPotential out;
    switch (spec.family) {
    case PotentialFamily::harmonic: {
        const double omega = param_or(spec, "omega", 1.0);
        if (!(omega > 0.0)) throw PreconditionError("harmonic: omega must be positive");
        out.V = sample(grid, [omega](double x) { return omega * omega * x * x; });
        out.analytic_ground_state = normalized_on_grid(
            sample(grid, [omega](double x) { return std::exp(-0.5 * omega * x * x); }), omega);
        break;
    }
    case PotentialFamily::poschl_teller: {
        const double depth = require_param(spec, "depth");
        if (!(depth > 0.0)) throw PreconditionError("poschl_teller: depth must be positive");
        out.V = sample(grid, [depth](double x) {
            const double s = 1.0 / std::cosh(x);
            return -depth * s * s;
        });
        // V = -d sech^2 has ground state sech^s with s(s+1) = d, E0 = -s^2
        const double s = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * depth));
        out.analytic_ground_state = normalized_on_grid(
            sample(grid, [s](double x) { return std::pow(1.0 / std::cosh(x), s); }), -s * s);
        break;
    }
    case PotentialFamily::square_well: {
        const double depth = require_param(spec, "depth");
        const double width = require_param(spec, "width");
        const double center = param_or(spec, "center", 0.0);
        if (!(depth > 0.0 && width > 0.0))
            throw PreconditionError("square_well: depth and width must be positive");
        // half-depth at a node landing exactly on the wall keeps the
        // discretization second-order accurate across the jump
        const double edge_snap = 1e-12 * std::max(1.0, std::abs(width));
        out.V = sample(grid, [&](double x) {
            const double d = std::abs(x - center);
            if (std::abs(d - 0.5 * width) <= edge_snap) return -0.5 * depth;
            return d < 0.5 * width ? -depth : 0.0;
        });
        break;
    }
    case PotentialFamily::morse: {
        const double depth = require_param(spec, "depth");
        const double width = require_param(spec, "width");
        const double center = param_or(spec, "center", 0.0);
        if (!(depth > 0.0 && width > 0.0))
            throw PreconditionError("morse: depth and width must be positive");
        out.V = sample(grid, [&](double x) {
            const double e = 1.0 - std::exp(-width * (x - center));
            return depth * (e * e - 1.0);
        });
        break;
    }
    case PotentialFamily::box: {
        out.V = sample(grid, [](double) { return 0.0; });
        const double L = grid.x_max - grid.x_min;
        const double k = M_PI / L;
        out.analytic_ground_state = normalized_on_grid(
            sample(grid, [&](double x) { return std::sin(k * (x - grid.x_min)); }), k * k);
        break;
    }
    case PotentialFamily::tabulated: {
        if (spec.source_path.empty())
            throw PreconditionError("tabulated potential needs a source path");
        out.V = interpolate_table(read_table(spec.source_path), grid);
        break;
    }
    }
    return out;
}

WaveFunction ground_state_of(const ResolvedPotential& resolved, const Grid& grid) {
    if (resolved.analytic_ground_state) return *resolved.analytic_ground_state;
    return compute_zero_mode(resolved.V, grid);
}

} // namespace isospec
