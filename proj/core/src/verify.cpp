#include "isospec/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace isospec {

namespace {

constexpr int kCoarseGridThreshold = 201;

} // namespace

void VerificationReport::evaluate() {
    passed = true;
    for (const auto& per_lambda : spectrum_deltas)
        for (double d : per_lambda)
            if (!(d < tolerances.spectrum)) passed = false;
    for (double d : partner_deviation)
        if (!(d < tolerances.partner)) passed = false;
    for (double d : gs_residual)
        if (!(d < tolerances.gs_residual)) passed = false;
    for (double d : norm_error)
        if (!(d < tolerances.norm)) passed = false;
    for (const auto& per_lambda : scattering_deltas)
        for (const ScatteringDelta& d : per_lambda)
            if (!(d.reflection_delta < tolerances.scattering &&
                  d.transmission_delta < tolerances.scattering))
                passed = false;
}

VerificationReport isospectrality_report(const SampledFunction& V, const Grid& grid,
                                         const WaveFunction& u0,
                                         const std::vector<double>& lambdas, int levels,
                                         double tol) {
    if (levels < 1) throw PreconditionError("isospectrality_report: levels must be >= 1");

    VerificationReport report;
    report.lambdas = lambdas;
    report.tolerances.spectrum = tol;
    if (grid.n < kCoarseGridThreshold) {
        std::ostringstream os;
        os << "coarse grid (n = " << grid.n
           << "): discretization error may dominate the spectrum deltas; rerun with a finer "
              "grid to check convergence";
        report.warnings.push_back(os.str());
    }

    const Spectrum parent = compute_spectrum(discretize(V, grid), levels);
    for (double lambda : lambdas) {
        FamilyMember member;
        try {
            member = deformed_potential(V, u0, lambda);
        } catch (const Error& e) {
            throw EigensolverError("isospectrality_report: lambda = " +
                                   std::to_string(lambda) + ": " + e.what());
        }
        const Spectrum deformed = compute_spectrum(discretize(member.potential, grid), levels);
        std::vector<double> deltas(static_cast<std::size_t>(levels));
        for (int i = 0; i < levels; ++i)
            deltas[i] = std::abs(deformed.energies[i] - parent.energies[i]);
        report.spectrum_deltas.push_back(std::move(deltas));
        report.partner_deviation.push_back(member.diagnostics.partner_deviation);
        report.gs_residual.push_back(member.diagnostics.gs_residual);
        report.norm_error.push_back(member.diagnostics.norm_error);
    }
    report.evaluate();
    return report;
}

std::vector<double> partner_uniqueness(const WaveFunction& u0, const std::vector<double>& lambdas,
                                       double tol) {
    (void)tol; // recorded by callers; the deviation itself is returned
    const Superpotential wp = witten_superpotential(u0);
    const SampledFunction vp_ref = fermionic_partner(wp);

    std::vector<double> deviations;
    deviations.reserve(lambdas.size());
    for (double lambda : lambdas) {
        const Superpotential wg = general_superpotential(u0, lambda);
        const SampledFunction vp = fermionic_partner(wg);
        double dev = 0.0;
        for (int i = 1; i < vp.size() - 1; ++i)
            if (vp.is_valid(i) && vp_ref.is_valid(i))
                dev = std::max(dev, std::abs(vp.values[i] - vp_ref.values[i]));
        deviations.push_back(dev);
    }
    return deviations;
}

double ground_state_residual(const FamilyMember& member) {
    const SampledFunction d2 = second_derivative(member.ground_state.samples);
    double res = 0.0;
    for (int i = 1; i < d2.size() - 1; ++i)
        if (d2.is_valid(i))
            res = std::max(res, std::abs(-d2.values[i] +
                                         member.potential.values[i] *
                                             member.ground_state.samples.values[i]));
    return res;
}

} // namespace isospec
