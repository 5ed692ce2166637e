#pragma once

#include <memory>
#include <vector>

#include "isospec/grid.hpp"
#include "isospec/schrodinger.hpp"

namespace isospec {

// Double-Darboux construction of strictly isospectral potential families.
//
// Conventions: the parent potential is shifted so its ground energy is
// zero, V- = w^2 - w', V+ = w^2 + w', and the Witten superpotential is
// w_p = -(ln u0)'. The general Riccati solution for the same V+ is
// w_g(x; lambda) = w_p(x) + u0(x)^2 / (I0(x) + lambda) with
// I0(x) = integral of u0^2 from x_min. The deformation parameter must stay
// outside the closed band [-I_total, 0] (singular band; its endpoints are
// the Abraham-Moses and Pursey limits).

enum class RiccatiKind { particular, general };

/// Samples of a Riccati solution w(x) with provenance.
struct Superpotential {
    SampledFunction samples;
    RiccatiKind kind = RiccatiKind::particular;
    /// Fixed-parameter chain; empty for w_p, [lambda] for first order,
    /// [lambda_1..lambda_{i-1}, lambda] for an order-i general solution.
    std::vector<double> lambda_chain;
    /// Zero mode the construction started from.
    std::shared_ptr<const WaveFunction> source_mode;
};

struct FamilyDiagnostics {
    double partner_deviation = 0.0; // max interior |V+(w_g) - V+(w_p)|
    double gs_residual = 0.0;       // max interior |(-D^2 + V(lambda)) u0(lambda)|
    double norm_error = 0.0;        // |norm(u0(lambda)) - 1|
};

/// One member of the isospectral family: deformed potential, its ground
/// state, and the construction diagnostics.
struct FamilyMember {
    double lambda = 0.0;
    SampledFunction potential;
    WaveFunction ground_state;
    double shift = 0.0; // parent E0 removed before deforming
    FamilyDiagnostics diagnostics;
};

/// Margin for the singular-band check: lambda is rejected when
/// min_x |I0(x) + lambda| <= kLambdaMargin * I_total.
inline constexpr double kLambdaMargin = 1e-3;

/// Throws SingularBandError when lambda lies in [-I_total, 0] or brings
/// I0 + lambda within the margin of zero anywhere on the grid.
void validate_lambda(const SampledFunction& norm_integral, double lambda);

/// w_p = -D ln u0. Boundary nodes are masked (u0 vanishes there under
/// Dirichlet conditions); nodes below the roundoff floor of a numerical
/// zero mode are masked as well. Throws on an interior sign change.
Superpotential witten_superpotential(const WaveFunction& u0);

/// V+ = w^2 + w'.
SampledFunction fermionic_partner(const Superpotential& w);

/// V- = w^2 - w'.
SampledFunction bosonic_from_superpotential(const Superpotential& w);

/// I0(x) = cumulative integral of u0^2; requires a normalized input, so
/// I0(x_max) = 1.
SampledFunction norm_integral(const WaveFunction& u0);

/// Bernoulli solution v = (I0 + lambda)/u0^2, the reciprocal of the
/// deformation term of w_g.
SampledFunction bernoulli_solution(const WaveFunction& u0, double lambda);

/// General Riccati solution w_g = w_p + u0^2/(I0 + lambda). The rational
/// form is the derivative identity D ln(I0 + lambda) = u0^2/(I0 + lambda)
/// evaluated exactly against the trapezoid I0, which keeps superpotential
/// differences free of differencing noise.
Superpotential general_superpotential(const WaveFunction& u0, double lambda);

/// The deformation increment
///   -4 u0 u0' / (I0 + lambda) + 2 u0^4 / (I0 + lambda)^2,
/// i.e. V(x; lambda) - V(x). Convention-free: applies to the shifted
/// parent (isospectrality) and to the physical one (scattering) alike.
SampledFunction deformation_term(const WaveFunction& u0, double lambda);

/// Deformed potential (explicit rational form)
///   V(x; lambda) = V - 4 u0 u0' / (I0 + lambda) + 2 u0^4 / (I0 + lambda)^2
/// bundled with its ground state and diagnostics. V_minus must be the
/// parent shifted to zero ground energy.
FamilyMember deformed_potential(const SampledFunction& V_minus, const WaveFunction& u0,
                                double lambda);

/// Deformed ground state u0(x; lambda) = f(lambda) u0/(I0 + lambda) with
/// f = sqrt(lambda(lambda+1)); sign fixed positive.
WaveFunction deformed_ground_state(const WaveFunction& u0, double lambda);

/// Inverse-Darboux reconstruction V(x; lambda) = V+ + 2 D^2 ln u0(x; lambda).
/// Cross-checks deformed_potential through the fermionic partner.
SampledFunction double_darboux_reconstruct(const SampledFunction& V_plus,
                                           const WaveFunction& u0_lambda);

} // namespace isospec
