#pragma once

#include <vector>

#include "isospec/grid.hpp"

namespace isospec {

// Units: hbar = 2m = 1, i.e. H = -d^2/dx^2 + V(x). Dirichlet boundaries
// (psi = 0 at the first and last node); the eigenproblem lives on the
// interior nodes 1..n-2.

/// Symmetric tridiagonal discretization of H = -D^2 + V.
struct Hamiltonian {
    Grid grid;
    std::vector<double> diag; // 2/h^2 + V(x_i), all n nodes
    double offdiag = 0.0;     // -1/h^2
};

/// Sorted bound-state energies of a Hamiltonian.
struct Spectrum {
    std::vector<double> energies; // strictly increasing
    Grid grid;

    int count() const { return static_cast<int>(energies.size()); }
};

/// Eigenfunction samples with their energy. Ground states are stored with
/// the positive-interior sign convention.
struct WaveFunction {
    SampledFunction samples;
    double energy = 0.0;
    bool normalized = false;
};

Hamiltonian discretize(const SampledFunction& V, const Grid& grid);

/// Lowest `count` eigenvalues by Sturm-sequence bisection (absolute
/// tolerance 1e-10), sorted ascending.
Spectrum compute_spectrum(const Hamiltonian& H, int count);

/// Ground-state eigenpair: Sturm bisection for the energy, inverse
/// iteration for the vector. Normalized with the trapezoid rule, sign
/// fixed positive, verified nodeless above the roundoff floor.
WaveFunction compute_zero_mode(const SampledFunction& V, const Grid& grid);

/// V - E0 pointwise, so the factorization convention V = w^2 - w' holds
/// with ground energy zero.
SampledFunction shift_to_zero_ground(const SampledFunction& V, double E0);

/// Raw Numerov shot at energy eps from the left edge with decaying-start
/// data. No precondition on eps; used by solve_at_energy and by node-count
/// diagnostics. The solution is unnormalized and rescaled on overflow.
struct ShootResult {
    SampledFunction u;
    int node_count = 0; // strict interior sign changes
};
ShootResult integrate_at_energy(const SampledFunction& V, const Grid& grid, double eps);

/// Solution of H u = eps u for a factorization energy eps below the ground
/// energy, with a nodelessness report. Throws PreconditionError when
/// eps >= E0 (E0 computed internally unless supplied).
struct FactorizationSolution {
    SampledFunction u;
    bool nodeless = false;
    double ground_energy = 0.0;
};
FactorizationSolution solve_at_energy(const SampledFunction& V, const Grid& grid, double eps);
FactorizationSolution solve_at_energy(const SampledFunction& V, const Grid& grid, double eps,
                                      double ground_energy);

} // namespace isospec
