#pragma once

#include <complex>
#include <vector>

#include "isospec/grid.hpp"
#include "isospec/schrodinger.hpp"

namespace isospec {

/// Reflection/transmission amplitudes at one wavenumber.
struct ScatteringData {
    double k_wavenumber = 0.0;
    std::complex<double> reflection;
    std::complex<double> transmission;
    double unitarity_defect = 0.0; // | |R|^2 + |T|^2 - 1 |
};

/// R and T for a short-range potential: complex Numerov integration from
/// the right edge with transmitted-wave data e^{ikx}, matched to
/// A e^{ikx} + B e^{-ikx} at the left edge (T = 1/A, R = B/A).
///
/// Preconditions: k > 0 and |V| < tol at both edges. Throws
/// NumericalError when the unitarity defect exceeds 10*tol.
ScatteringData scattering_coefficients(const SampledFunction& V, const Grid& grid,
                                       double k_wavenumber, double tol);

/// Per-k differences | |R_lambda| - |R| | and | |T_lambda| - |T| | between
/// a short-range potential and its DDGR deformation. The deformation is
/// built from the physical (unshifted) potential's bound-state zero mode.
struct ScatteringDelta {
    double k_wavenumber = 0.0;
    double reflection_delta = 0.0;
    double transmission_delta = 0.0;
};
std::vector<ScatteringDelta> scattering_invariance(const SampledFunction& V,
                                                   const WaveFunction& u0, double lambda,
                                                   const std::vector<double>& ks, double tol);

} // namespace isospec
