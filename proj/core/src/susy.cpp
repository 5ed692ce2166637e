#include "isospec/susy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace isospec {

namespace {

void require_normalized(const WaveFunction& u0, const char* who) {
    if (!u0.normalized)
        throw PreconditionError(std::string(who) + ": zero mode must be normalized");
}

// Trapezoid norm check, tighter than the stated 1e-6 in practice.
void check_unit_norm(const WaveFunction& u0, const char* who) {
    SampledFunction sq = u0.samples;
    for (double& v : sq.values) v *= v;
    const double total = total_integral(sq);
    if (std::abs(total - 1.0) > 1e-6) {
        std::ostringstream os;
        os << who << ": zero mode norm deviates from 1 by " << std::abs(total - 1.0);
        throw PreconditionError(os.str());
    }
}

SampledFunction squared(const SampledFunction& f) {
    SampledFunction out = f;
    for (double& v : out.values) v *= v;
    return out;
}

} // namespace

void validate_lambda(const SampledFunction& I0, double lambda) {
    const double total = I0.values.back();
    if (lambda >= -total && lambda <= 0.0) {
        std::ostringstream os;
        os << "lambda = " << lambda << " lies in the singular band [-" << total
           << ", 0]; the endpoints are the Abraham-Moses (lambda = -" << total
           << ") and Pursey (lambda = 0) limits and the interior makes I0 + lambda vanish";
        throw SingularBandError(lambda, os.str());
    }
    double min_abs = std::numeric_limits<double>::infinity();
    for (double v : I0.values) min_abs = std::min(min_abs, std::abs(v + lambda));
    if (min_abs <= kLambdaMargin * total) {
        std::ostringstream os;
        os << "lambda = " << lambda << " is singular on this grid: min |I0 + lambda| = " << min_abs
           << " is within the margin " << kLambdaMargin * total
           << " of the Abraham-Moses/Pursey band";
        throw SingularBandError(lambda, os.str());
    }
}

Superpotential witten_superpotential(const WaveFunction& u0) {
    const SampledFunction& u = u0.samples;
    const int n = u.size();

    double max_abs = 0.0;
    for (int i = 0; i < n; ++i)
        if (u.is_valid(i)) max_abs = std::max(max_abs, std::abs(u.values[i]));
    if (!(max_abs > 0.0))
        throw PreconditionError("witten_superpotential: zero mode is identically zero");

    // Mask the Dirichlet boundary nodes and anything at the roundoff floor
    // of a numerical zero mode; reject true interior sign changes.
    const double floor = 1e-10 * max_abs;
    SampledFunction masked = u;
    for (int i = 0; i < n; ++i) {
        if (!masked.is_valid(i)) continue;
        const double v = masked.values[i];
        if (i == 0 || i == n - 1 || std::abs(v) <= floor) {
            masked.invalidate(i);
            continue;
        }
        if (v < 0.0)
            throw PreconditionError("witten_superpotential: zero mode has a node (negative "
                                    "interior sample); it must be nodeless and positive");
    }

    SampledFunction sigma = log_derivative(masked);
    for (double& v : sigma.values) v = -v;

    Superpotential w;
    w.samples = std::move(sigma);
    w.kind = RiccatiKind::particular;
    w.source_mode = std::make_shared<WaveFunction>(u0);
    return w;
}

SampledFunction fermionic_partner(const Superpotential& w) {
    SampledFunction d = derivative(w.samples);
    SampledFunction out = d;
    for (int i = 0; i < out.size(); ++i)
        out.values[i] = w.samples.values[i] * w.samples.values[i] + d.values[i];
    return out;
}

SampledFunction bosonic_from_superpotential(const Superpotential& w) {
    SampledFunction d = derivative(w.samples);
    SampledFunction out = d;
    for (int i = 0; i < out.size(); ++i)
        out.values[i] = w.samples.values[i] * w.samples.values[i] - d.values[i];
    return out;
}

SampledFunction norm_integral(const WaveFunction& u0) {
    require_normalized(u0, "norm_integral");
    check_unit_norm(u0, "norm_integral");
    return cumulative_integral(squared(u0.samples));
}

SampledFunction bernoulli_solution(const WaveFunction& u0, double lambda) {
    const SampledFunction I0 = norm_integral(u0);
    validate_lambda(I0, lambda);
    SampledFunction v = I0;
    for (int i = 0; i < v.size(); ++i) {
        const double u = u0.samples.values[i];
        if (u == 0.0) {
            v.values[i] = 0.0;
            v.invalidate(i);
            continue;
        }
        v.values[i] = (I0.values[i] + lambda) / (u * u);
    }
    return v;
}

Superpotential general_superpotential(const WaveFunction& u0, double lambda) {
    const SampledFunction I0 = norm_integral(u0);
    validate_lambda(I0, lambda);
    Superpotential wp = witten_superpotential(u0);

    Superpotential wg = wp;
    for (int i = 0; i < wg.samples.size(); ++i) {
        const double u = u0.samples.values[i];
        wg.samples.values[i] += u * u / (I0.values[i] + lambda);
    }
    wg.kind = RiccatiKind::general;
    wg.lambda_chain = {lambda};
    return wg;
}

WaveFunction deformed_ground_state(const WaveFunction& u0, double lambda) {
    const SampledFunction I0 = norm_integral(u0);
    validate_lambda(I0, lambda);
    const double ff = lambda * (lambda + 1.0);
    if (!(ff > 0.0))
        throw SingularBandError(lambda, "deformed_ground_state: lambda(lambda+1) must be "
                                        "positive outside the singular band");
    const double f = std::sqrt(ff);

    WaveFunction out = u0;
    for (int i = 0; i < out.samples.size(); ++i)
        out.samples.values[i] = f * u0.samples.values[i] / (I0.values[i] + lambda);
    // I0 + lambda keeps one sign for valid lambda; fix the overall sign positive
    if (lambda < 0.0)
        for (double& v : out.samples.values) v = -v;
    out.energy = 0.0;
    out.normalized = true;
    return out;
}

SampledFunction deformation_term(const WaveFunction& u0, double lambda) {
    const SampledFunction I0 = norm_integral(u0);
    validate_lambda(I0, lambda);

    const SampledFunction du0 = derivative(u0.samples);
    SampledFunction out = I0;
    for (int i = 0; i < out.size(); ++i) {
        const double u = u0.samples.values[i];
        const double denom = I0.values[i] + lambda;
        out.values[i] = -4.0 * u * du0.values[i] / denom +
                        2.0 * u * u * u * u / (denom * denom);
        if (!std::isfinite(out.values[i]))
            throw NumericalError("deformation_term: non-finite value");
    }
    return out;
}

FamilyMember deformed_potential(const SampledFunction& V_minus, const WaveFunction& u0,
                                double lambda) {
    if (!(V_minus.grid == u0.samples.grid))
        throw GridError("deformed_potential: potential and zero mode grids differ");

    const SampledFunction delta = deformation_term(u0, lambda);
    SampledFunction V = V_minus;
    for (int i = 0; i < V.size(); ++i) V.values[i] += delta.values[i];

    FamilyMember member;
    member.lambda = lambda;
    member.potential = std::move(V);
    member.ground_state = deformed_ground_state(u0, lambda);
    member.shift = u0.energy;

    // diagnostics
    Superpotential wp = witten_superpotential(u0);
    Superpotential wg = general_superpotential(u0, lambda);
    const SampledFunction vp_p = fermionic_partner(wp);
    const SampledFunction vp_g = fermionic_partner(wg);
    double dev = 0.0;
    for (int i = 1; i < vp_p.size() - 1; ++i)
        if (vp_p.is_valid(i) && vp_g.is_valid(i))
            dev = std::max(dev, std::abs(vp_g.values[i] - vp_p.values[i]));
    member.diagnostics.partner_deviation = dev;

    const SampledFunction d2 = second_derivative(member.ground_state.samples);
    double res = 0.0;
    for (int i = 1; i < d2.size() - 1; ++i)
        if (d2.is_valid(i))
            res = std::max(res, std::abs(-d2.values[i] + member.potential.values[i] *
                                                             member.ground_state.samples.values[i]));
    member.diagnostics.gs_residual = res;

    SampledFunction sq = member.ground_state.samples;
    for (double& v : sq.values) v *= v;
    member.diagnostics.norm_error = std::abs(total_integral(sq) - 1.0);
    return member;
}

SampledFunction double_darboux_reconstruct(const SampledFunction& V_plus,
                                           const WaveFunction& u0_lambda) {
    const SampledFunction& u = u0_lambda.samples;
    if (!(V_plus.grid == u.grid))
        throw GridError("double_darboux_reconstruct: grid mismatch");

    double max_abs = 0.0;
    for (int i = 0; i < u.size(); ++i)
        if (u.is_valid(i)) max_abs = std::max(max_abs, std::abs(u.values[i]));
    const double floor = 1e-10 * max_abs;

    SampledFunction ln = u;
    for (int i = 0; i < ln.size(); ++i) {
        if (!ln.is_valid(i)) continue;
        const double v = ln.values[i];
        if (std::abs(v) <= floor) {
            ln.invalidate(i);
            continue;
        }
        if (v < 0.0)
            throw PreconditionError("double_darboux_reconstruct: deformed ground state must be "
                                    "strictly positive");
        ln.values[i] = std::log(v);
    }

    SampledFunction d2 = second_derivative(ln);
    SampledFunction out = d2;
    for (int i = 0; i < out.size(); ++i)
        out.values[i] = V_plus.values[i] + 2.0 * d2.values[i];
    // keep V_plus's own mask where it has one
    if (!V_plus.valid.empty())
        for (int i = 0; i < out.size(); ++i)
            if (!V_plus.is_valid(i)) out.invalidate(i);
    return out;
}

} // namespace isospec
