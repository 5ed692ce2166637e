#include <cmath>

#include <doctest.h>

#include "isospec/scattering.hpp"
#include "isospec/susy.hpp"
#include "support.hpp"

using namespace isospec;

namespace {

constexpr double kTol = 1e-6;

SampledFunction pt_potential(const Grid& g) {
    return sample(g, [](double x) {
        const double s = 1.0 / std::cosh(x);
        return -2.0 * s * s;
    });
}

// closed-form transmission probability for a square barrier of height V0
// and width a in units hbar = 2m = 1
double barrier_T2(double k, double V0, double a) {
    const double E = k * k;
    if (std::abs(E - V0) < 1e-12) return 1.0 / (1.0 + E * a * a / 4.0);
    if (E > V0) {
        const double kp = std::sqrt(E - V0);
        const double s = std::sin(kp * a);
        return 1.0 / (1.0 + (V0 * V0 * s * s) / (4.0 * E * (E - V0)));
    }
    const double kp = std::sqrt(V0 - E);
    const double s = std::sinh(kp * a);
    return 1.0 / (1.0 + (V0 * V0 * s * s) / (4.0 * E * (V0 - E)));
}

} // namespace

TEST_CASE("free propagation: R = 0, T = 1") {
    const Grid g = build_grid(-15.0, 15.0, 3001);
    const SampledFunction V = sample(g, [](double) { return 0.0; });
    const ScatteringData d = scattering_coefficients(V, g, 1.0, kTol);
    CHECK(std::abs(d.reflection) < 1e-10);
    CHECK(std::abs(d.transmission - 1.0) < 1e-10);
}

TEST_CASE("Poschl-Teller is reflectionless") {
    const Grid g = build_grid(-15.0, 15.0, 3001);
    const SampledFunction V = pt_potential(g);
    for (double k : {0.5, 1.0, 2.0}) {
        const ScatteringData d = scattering_coefficients(V, g, k, 1e-4);
        CHECK(std::abs(d.reflection) < 1e-4);
        CHECK(std::abs(std::abs(d.transmission) - 1.0) < 1e-4);
        CHECK(d.unitarity_defect < 1e-4);
    }
}

TEST_CASE("square barrier transmission matches the closed form") {
    const Grid g = build_grid(-8.0, 8.0, 1601);
    // height 1, width 1; half-height samples at the walls
    const SampledFunction V = sample(g, [](double x) {
        const double d = std::abs(x);
        if (std::abs(d - 0.5) < 1e-12) return 0.5;
        return d < 0.5 ? 1.0 : 0.0;
    });
    for (double k : {0.8, 1.0, 1.2}) {
        const ScatteringData d = scattering_coefficients(V, g, k, 1e-4);
        CHECK(std::abs(std::norm(d.transmission) - barrier_T2(k, 1.0, 1.0)) < 1e-3);
        CHECK(d.unitarity_defect < 1e-4);
    }
}

TEST_CASE("scattering_coefficients validates its inputs") {
    const Grid g = build_grid(-10.0, 10.0, 2001);
    CHECK_THROWS_AS(
        scattering_coefficients(sample(g, [](double x) { return x * x; }), g, 1.0, kTol),
        PreconditionError); // not short-range
    const SampledFunction zero = sample(g, [](double) { return 0.0; });
    CHECK_THROWS_AS(scattering_coefficients(zero, g, -1.0, kTol), PreconditionError);
    CHECK_THROWS_AS(scattering_coefficients(zero, g, 0.0, kTol), PreconditionError);
}

TEST_CASE("DDGR deformation preserves |R| and |T| for Poschl-Teller") {
    const Grid g = build_grid(-15.0, 15.0, 3001);
    const SampledFunction V = pt_potential(g);
    const WaveFunction u0 = testsupport::poschl_teller_mode(g); // physical zero mode
    WaveFunction physical = u0;
    physical.energy = -1.0;

    const auto deltas = scattering_invariance(V, physical, 1.0, {0.5, 1.0, 2.0}, 1e-4);
    REQUIRE(deltas.size() == 3);
    for (const auto& d : deltas) {
        CHECK(d.reflection_delta < 5e-4);
        CHECK(d.transmission_delta < 5e-4);
    }

    const auto far = scattering_invariance(V, physical, 1e8, {0.5, 1.0, 2.0}, 1e-4);
    for (const auto& d : far) {
        CHECK(d.reflection_delta < 1e-8);
        CHECK(d.transmission_delta < 1e-8);
    }
}

TEST_CASE("square-well deformation keeps the scattering moduli") {
    const Grid g = build_grid(-12.0, 12.0, 2401);
    const SampledFunction V = sample(g, [](double x) {
        const double d = std::abs(x);
        if (std::abs(d - 1.0) < 1e-12) return -1.0;
        return d < 1.0 ? -2.0 : 0.0;
    });
    const WaveFunction u0 = compute_zero_mode(V, g); // numerical bound state
    CHECK(u0.energy < 0.0);

    const auto deltas = scattering_invariance(V, u0, 0.5, {0.5, 1.0, 2.0}, 1e-4);
    for (const auto& d : deltas) {
        CHECK(d.reflection_delta < 1e-3);
        CHECK(d.transmission_delta < 1e-3);
    }
}

TEST_CASE("scattering deltas shrink like 1/lambda") {
    const Grid g = build_grid(-15.0, 15.0, 3001);
    const SampledFunction V = pt_potential(g);
    WaveFunction u0 = testsupport::poschl_teller_mode(g);
    u0.energy = -1.0;

    auto worst = [&](double lambda) {
        double w = 0.0;
        for (const auto& d : scattering_invariance(V, u0, lambda, {0.5, 1.0}, 1e-4))
            w = std::max({w, d.reflection_delta, d.transmission_delta});
        return w;
    };
    const double d10 = worst(10.0);
    const double d1000 = worst(1000.0);
    CHECK(d1000 < d10);
    CHECK(d10 / d1000 > 20.0); // ~100 for a clean 1/lambda law
    CHECK(d10 / d1000 < 500.0);
}
