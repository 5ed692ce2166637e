#pragma once

// Shared fixtures for the test suites: analytic reference modes sampled on
// a grid and mask-aware comparison helpers.

#include <algorithm>
#include <cmath>
#include <vector>

#include "isospec/catalog.hpp"
#include "isospec/grid.hpp"
#include "isospec/schrodinger.hpp"

namespace testsupport {

// Normalized oscillator ground state exp(-x^2/2) with energy recorded in
// the shifted convention (0).
inline isospec::WaveFunction oscillator_mode(const isospec::Grid& grid) {
    isospec::PotentialSpec spec;
    spec.family = isospec::PotentialFamily::harmonic;
    auto resolved = isospec::resolve_potential(spec, grid);
    isospec::WaveFunction u0 = *resolved.analytic_ground_state;
    u0.energy = 0.0;
    return u0;
}

// Shifted oscillator parent V- = x^2 - 1.
inline isospec::SampledFunction oscillator_shifted(const isospec::Grid& grid) {
    return isospec::sample(grid, [](double x) { return x * x - 1.0; });
}

// Normalized Poschl-Teller ground state sech(x), shifted convention.
inline isospec::WaveFunction poschl_teller_mode(const isospec::Grid& grid) {
    isospec::PotentialSpec spec;
    spec.family = isospec::PotentialFamily::poschl_teller;
    spec.params["depth"] = 2.0;
    auto resolved = isospec::resolve_potential(spec, grid);
    isospec::WaveFunction u0 = *resolved.analytic_ground_state;
    u0.energy = 0.0;
    return u0;
}

// Shifted Poschl-Teller parent V- = 1 - 2 sech^2 x.
inline isospec::SampledFunction poschl_teller_shifted(const isospec::Grid& grid) {
    return isospec::sample(grid, [](double x) {
        const double s = 1.0 / std::cosh(x);
        return 1.0 - 2.0 * s * s;
    });
}

// max |a - b| over nodes valid in both (optionally excluding the two
// boundary nodes).
inline double max_abs_diff(const isospec::SampledFunction& a, const isospec::SampledFunction& b,
                           bool interior_only = false) {
    double dev = 0.0;
    const int lo = interior_only ? 1 : 0;
    const int hi = interior_only ? a.size() - 1 : a.size();
    for (int i = lo; i < hi; ++i)
        if (a.is_valid(i) && b.is_valid(i))
            dev = std::max(dev, std::abs(a.values[i] - b.values[i]));
    return dev;
}

// max |f - ref(x)| over valid nodes against a closed form.
template <typename F>
double max_abs_error(const isospec::SampledFunction& f, F&& ref, bool interior_only = false) {
    double dev = 0.0;
    const int lo = interior_only ? 1 : 0;
    const int hi = interior_only ? f.size() - 1 : f.size();
    for (int i = lo; i < hi; ++i)
        if (f.is_valid(i))
            dev = std::max(dev, std::abs(f.values[i] - ref(f.grid.node(i))));
    return dev;
}

} // namespace testsupport
