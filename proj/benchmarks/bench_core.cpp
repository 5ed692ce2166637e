#include <benchmark/benchmark.h>

#include <cmath>

#include "isospec/riccati.hpp"
#include "isospec/scattering.hpp"
#include "isospec/schrodinger.hpp"
#include "isospec/susy.hpp"

using namespace isospec;

namespace {

WaveFunction oscillator_mode(const Grid& grid) {
    SampledFunction u = sample(grid, [](double x) { return std::exp(-0.5 * x * x); });
    SampledFunction sq = u;
    for (double& v : sq.values) v *= v;
    const double norm = std::sqrt(total_integral(sq));
    for (double& v : u.values) v /= norm;
    WaveFunction psi;
    psi.samples = std::move(u);
    psi.energy = 0.0;
    psi.normalized = true;
    return psi;
}

void BM_ComputeSpectrum(benchmark::State& state) {
    const Grid g = build_grid(-10.0, 10.0, static_cast<int>(state.range(0)));
    const SampledFunction V = sample(g, [](double x) { return x * x; });
    const Hamiltonian H = discretize(V, g);
    for (auto _ : state) {
        Spectrum s = compute_spectrum(H, 5);
        benchmark::DoNotOptimize(s.energies.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ComputeSpectrum)->RangeMultiplier(2)->Range(1024, 8192)->Complexity();

void BM_ZeroMode(benchmark::State& state) {
    const Grid g = build_grid(-10.0, 10.0, static_cast<int>(state.range(0)));
    const SampledFunction V = sample(g, [](double x) { return x * x; });
    for (auto _ : state) {
        WaveFunction u = compute_zero_mode(V, g);
        benchmark::DoNotOptimize(u.samples.values.data());
    }
}
BENCHMARK(BM_ZeroMode)->Arg(2001)->Arg(4001);

void BM_DeformedMember(benchmark::State& state) {
    const Grid g = build_grid(-10.0, 10.0, 2001);
    const WaveFunction u0 = oscillator_mode(g);
    const SampledFunction V = sample(g, [](double x) { return x * x - 1.0; });
    for (auto _ : state) {
        FamilyMember m = deformed_potential(V, u0, 1.0);
        benchmark::DoNotOptimize(m.potential.values.data());
    }
}
BENCHMARK(BM_DeformedMember);

void BM_CrossRatio(benchmark::State& state) {
    const Grid g = build_grid(-4.0, 4.0, 2001);
    const WaveFunction u0 = oscillator_mode(g);
    const RiccatiTriple triple =
        make_triple(general_superpotential(u0, 1.0), general_superpotential(u0, 3.0),
                    general_superpotential(u0, 4.0));
    const Superpotential w = general_superpotential(u0, 2.0);
    for (auto _ : state) {
        CrossRatio k = cross_ratio(w, triple, 1e-9);
        benchmark::DoNotOptimize(k.k_estimate);
    }
}
BENCHMARK(BM_CrossRatio);

void BM_ScatteringSweep(benchmark::State& state) {
    const Grid g = build_grid(-15.0, 15.0, 3001);
    const SampledFunction V = sample(g, [](double x) {
        const double s = 1.0 / std::cosh(x);
        return -2.0 * s * s;
    });
    for (auto _ : state) {
        for (double k : {0.5, 1.0, 2.0}) {
            ScatteringData d = scattering_coefficients(V, g, k, 1e-4);
            benchmark::DoNotOptimize(d.transmission);
        }
    }
}
BENCHMARK(BM_ScatteringSweep);

} // namespace

BENCHMARK_MAIN();
