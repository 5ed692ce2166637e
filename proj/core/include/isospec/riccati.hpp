#pragma once

#include "isospec/susy.hpp"

namespace isospec {

// Nonlinear superposition principle for Riccati equations: four solutions
// of the same equation have an x-independent cross ratio
//
//   k = [(w - w1)/(w - w2)] * [(w3 - w2)/(w3 - w1)],
//
// oriented so that k(w1) = 0, k(w3) = 1 and w2 is the pole. For DDGR
// members this collapses to the closed form
// (l1 - l)(l2 - l3) / ((l2 - l)(l1 - l3)) in the deformation parameters.
// superpose() is the exact Moebius inverse of the same orientation, so
// cross_ratio(superpose(triple, k), triple) returns k.

/// Pointwise cross ratio with a robust aggregate. Nodes where a ratio
/// denominator falls below rel_tol times the median |w| scale are masked.
struct CrossRatio {
    SampledFunction pointwise;
    double k_estimate = 0.0;   // median over unmasked nodes
    double k_mean = 0.0;       // diagnostic
    double constancy = 0.0;    // max |k(x) - k_estimate| over unmasked nodes
    double valid_fraction = 0.0;
};

/// Three particular solutions sharing one grid and one fermionic partner.
struct RiccatiTriple {
    Superpotential w1, w2, w3;
};

/// Validates shared grid and pairwise-distinct lambda chains.
RiccatiTriple make_triple(Superpotential w1, Superpotential w2, Superpotential w3);

CrossRatio cross_ratio(const Superpotential& w, const RiccatiTriple& triple, double rel_tol);

/// General solution from three particular ones at cross-ratio value k:
///   w = [k w2 (w3 - w1) - w1 (w3 - w2)] / [k (w3 - w1) - (w3 - w2)].
/// Identities: k = 0 -> w1, k = 1 -> w3, k -> inf -> w2. Nodes with a
/// near-zero denominator are masked.
Superpotential superpose(const RiccatiTriple& triple, double k);

/// Closed form of the invariant for four DDGR members:
///   (l1 - l)(l2 - l3) / ((l2 - l)(l1 - l3)).
/// Throws on coincident parameters.
double lambda_cross_ratio(double lambda, double lambda1, double lambda2, double lambda3);

/// Evaluates the invariant through the lambda-dependent logarithmic
/// derivatives sigma0(lambda_i) = u0^2/(I0 + lambda_i) directly, and again
/// through cumulative integrals of sigma0_x re-anchored at the grid
/// midpoint. Both paths must agree; the sigma path is returned and the
/// integral path's aggregate is exposed for comparison.
struct LambdaFormInvariant {
    CrossRatio sigma_path;
    CrossRatio integral_path;
};
LambdaFormInvariant lambda_form_invariant(const WaveFunction& u0, double lambda, double lambda1,
                                          double lambda2, double lambda3);

} // namespace isospec
