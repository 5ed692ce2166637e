#include "isospec/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace isospec {

namespace {

// Contiguous valid run containing the midpoint; hierarchy integrals live
// on this window (the Witten superpotential is masked at the Dirichlet
// boundary nodes and below the roundoff floor of numerical zero modes).
struct Run {
    int begin = 0; // first valid node
    int end = 0;   // one past the last valid node
};

Run valid_run(const SampledFunction& f) {
    const int mid = f.grid.n / 2;
    if (!f.is_valid(mid))
        throw PreconditionError("hierarchy: superpotential invalid at the grid midpoint");
    Run r{mid, mid + 1};
    while (r.begin > 0 && f.is_valid(r.begin - 1)) --r.begin;
    while (r.end < f.grid.n && f.is_valid(r.end)) ++r.end;
    return r;
}

// Trapezoid cumulative integral over [run.begin, run.end), anchored at the
// run start; zero (and masked by the caller) outside.
std::vector<double> cumulative_on_run(const SampledFunction& f, Run run) {
    std::vector<double> out(static_cast<std::size_t>(f.grid.n), 0.0);
    const double h = f.grid.h;
    for (int i = run.begin + 1; i < run.end; ++i)
        out[i] = out[i - 1] + 0.5 * h * (f.values[i - 1] + f.values[i]);
    return out;
}

SampledFunction masked_outside(const Grid& grid, std::vector<double> values, Run run) {
    std::vector<std::uint8_t> mask(values.size(), 0);
    for (int i = run.begin; i < run.end; ++i) mask[i] = 1;
    return SampledFunction(grid, std::move(values), std::move(mask));
}

// Integration factor F = exp(-int 2 w) on the run, rescaled in log space
// before exponentiation. `match` (when finite) pins F at the midpoint;
// otherwise F is scaled to unit total integral, folding the scale into an
// effective shift of the next lambda.
SampledFunction integration_factor(const Superpotential& w, Run run, double match_mid) {
    const Grid& grid = w.samples.grid;
    std::vector<double> G = cumulative_on_run(w.samples, run);
    const int mid = grid.n / 2;

    double g_min = std::numeric_limits<double>::infinity();
    for (int i = run.begin; i < run.end; ++i) g_min = std::min(g_min, 2.0 * G[i]);

    std::vector<double> F(static_cast<std::size_t>(grid.n), 0.0);
    for (int i = run.begin; i < run.end; ++i) F[i] = std::exp(-(2.0 * G[i] - g_min));

    double scale;
    if (std::isfinite(match_mid)) {
        scale = match_mid / F[mid];
    } else {
        double total = 0.0;
        for (int i = run.begin + 1; i < run.end; ++i)
            total += 0.5 * grid.h * (F[i - 1] + F[i]);
        scale = 1.0 / total;
    }
    for (int i = run.begin; i < run.end; ++i) F[i] *= scale;
    return masked_outside(grid, std::move(F), run);
}

// lambda + int^x F, validated against zero crossings and the margin.
std::vector<double> log_argument(const SampledFunction& F, Run run, double lambda,
                                 const char* who) {
    std::vector<double> J = cumulative_on_run(F, run);
    const double total = J[run.end - 1];
    double min_abs = std::numeric_limits<double>::infinity();
    bool crosses = false;
    double prev = 0.0;
    for (int i = run.begin; i < run.end; ++i) {
        const double arg = lambda + J[i];
        min_abs = std::min(min_abs, std::abs(arg));
        if (i > run.begin && (arg > 0.0) != (prev > 0.0)) crosses = true;
        prev = arg;
    }
    if (crosses || min_abs <= kLambdaMargin * total) {
        std::ostringstream os;
        os << who << ": lambda = " << lambda << " makes lambda + int F "
           << (crosses ? "cross zero" : "approach zero") << " on the grid (min |arg| = "
           << min_abs << ", band [-" << total << ", 0])";
        throw SingularBandError(lambda, os.str());
    }
    for (int i = run.begin; i < run.end; ++i) J[i] += lambda;
    return J;
}

} // namespace

HierarchyState init_hierarchy(const WaveFunction& u0) {
    Superpotential wp = witten_superpotential(u0);
    const Run run = valid_run(wp.samples);
    const int mid = wp.samples.grid.n / 2;
    const double u_mid = u0.samples.values[mid];

    HierarchyState state;
    state.order = 0;
    state.w_particular = std::move(wp);
    state.integration_factor =
        integration_factor(state.w_particular, run, u_mid * u_mid);
    state.source_mode = state.w_particular.source_mode;
    return state;
}

HierarchyState extend(const HierarchyState& state, double lambda_j) {
    const Run run = valid_run(state.integration_factor);
    const std::vector<double> arg =
        log_argument(state.integration_factor, run, lambda_j, "extend");

    // w_lambda = D ln(lambda + int F) = F / (lambda + int F); the rational
    // form pairs exactly with the trapezoid integral.
    Superpotential wp = state.w_particular;
    for (int i = run.begin; i < run.end; ++i)
        wp.samples.values[i] += state.integration_factor.values[i] / arg[i];
    for (int i = 0; i < wp.samples.size(); ++i)
        if (!(i >= run.begin && i < run.end)) wp.samples.invalidate(i);
    wp.kind = RiccatiKind::particular;
    wp.lambda_chain = state.fixed_lambdas;
    wp.lambda_chain.push_back(lambda_j);

    HierarchyState next;
    next.order = state.order + 1;
    next.fixed_lambdas = wp.lambda_chain;
    next.integration_factor =
        integration_factor(wp, run, std::numeric_limits<double>::quiet_NaN());
    next.w_particular = std::move(wp);
    next.source_mode = state.source_mode;
    return next;
}

Superpotential general_at_order(const HierarchyState& state, double lambda) {
    const Run run = valid_run(state.integration_factor);
    const std::vector<double> arg =
        log_argument(state.integration_factor, run, lambda, "general_at_order");

    Superpotential wg = state.w_particular;
    for (int i = run.begin; i < run.end; ++i)
        wg.samples.values[i] += state.integration_factor.values[i] / arg[i];
    for (int i = 0; i < wg.samples.size(); ++i)
        if (!(i >= run.begin && i < run.end)) wg.samples.invalidate(i);
    wg.kind = RiccatiKind::general;
    wg.lambda_chain = state.fixed_lambdas;
    wg.lambda_chain.push_back(lambda);
    return wg;
}

CrossRatio cross_order_invariant(const Superpotential& w_i, const Superpotential& t1,
                                 const Superpotential& t2, const Superpotential& t3,
                                 double rel_tol, double partner_tol) {
    const SampledFunction vp_ref = fermionic_partner(w_i);
    const Superpotential* others[3] = {&t1, &t2, &t3};
    for (int which = 0; which < 3; ++which) {
        const SampledFunction vp = fermionic_partner(*others[which]);
        double dev = 0.0;
        for (int i = 1; i < vp.size() - 1; ++i)
            if (vp.is_valid(i) && vp_ref.is_valid(i))
                dev = std::max(dev, std::abs(vp.values[i] - vp_ref.values[i]));
        if (dev > partner_tol) {
            std::ostringstream os;
            os << "cross_order_invariant: triple member " << which + 1
               << " does not share the fermionic partner (deviation " << dev << " > "
               << partner_tol << ")";
            throw PreconditionError(os.str());
        }
    }
    const RiccatiTriple triple = make_triple(t1, t2, t3);
    return cross_ratio(w_i, triple, rel_tol);
}

} // namespace isospec
