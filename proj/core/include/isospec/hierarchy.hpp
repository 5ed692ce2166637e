#pragma once

#include "isospec/riccati.hpp"
#include "isospec/susy.hpp"

namespace isospec {

// Multiple-parameter iterative generalization: at order j the particular
// solution is w_p^(j) = w_p^(j-1) + w_{lambda_j} with
// w_{lambda_j} = D ln(lambda_j + int^x F_{j-1}) and integration factor
// F_j = exp(-int^x 2 w_p^(j)). Both integrals are anchored at x_min; the
// anchor choice only shifts each lambda_j by a constant.

/// State of the hierarchy after fixing `order` parameters.
struct HierarchyState {
    int order = 0;
    std::vector<double> fixed_lambdas;
    Superpotential w_particular;       // w_p^(order)
    SampledFunction integration_factor; // F_order, strictly positive
    std::shared_ptr<const WaveFunction> source_mode;
};

/// Order 0: w_p^(0) = Witten superpotential, F_0 = u0^2 (recovered from
/// exp(-int 2 w_p) and rescaled at the grid midpoint).
HierarchyState init_hierarchy(const WaveFunction& u0);

/// Fixes the next parameter. Throws SingularBandError when
/// lambda_j + int^x F_{j-1} crosses (or comes within the margin of) zero.
HierarchyState extend(const HierarchyState& state, double lambda_j);

/// General solution at order state.order + 1 with free parameter lambda:
/// w_g = w_p^(order) + F/(lambda + int^x F).
Superpotential general_at_order(const HierarchyState& state, double lambda);

/// Cross ratio of four solutions of possibly different hierarchical
/// orders. Verifies first (within partner_tol) that all four share the
/// fermionic partner, then delegates to cross_ratio.
CrossRatio cross_order_invariant(const Superpotential& w_i, const Superpotential& t1,
                                 const Superpotential& t2, const Superpotential& t3,
                                 double rel_tol, double partner_tol = 1e-3);

} // namespace isospec
