#include <cmath>
#include <random>

#include <doctest.h>

#include "isospec/riccati.hpp"
#include "support.hpp"

using namespace isospec;
using testsupport::max_abs_diff;

namespace {

constexpr double kRelTol = 1e-9;

struct Family {
    Grid grid;
    WaveFunction u0;
    Family() : grid(build_grid(-4.0, 4.0, 2001)), u0(testsupport::oscillator_mode(grid)) {}
    Superpotential w(double lambda) const { return general_superpotential(u0, lambda); }
    RiccatiTriple triple(double l1, double l2, double l3) const {
        return make_triple(w(l1), w(l2), w(l3));
    }
};

} // namespace

TEST_CASE("cross_ratio hits the projective anchor points") {
    const Family fam;
    const RiccatiTriple triple = fam.triple(1.0, 3.0, 4.0);

    // k(w1) = 0 and k(w3) = 1; w2 is the pole of this orientation, so
    // probing with w2 masks every node (the reciprocal convention k -> 1/k
    // would put the zero at w2 instead)
    const CrossRatio at_w1 = cross_ratio(fam.w(1.0), triple, kRelTol);
    CHECK(std::abs(at_w1.k_estimate) < 1e-10);
    const CrossRatio at_w3 = cross_ratio(fam.w(4.0), triple, kRelTol);
    CHECK(std::abs(at_w3.k_estimate - 1.0) < 1e-10);
    CHECK_THROWS_AS(cross_ratio(fam.w(3.0), triple, kRelTol), PreconditionError);
}

TEST_CASE("cross_ratio of the (2,1,3,4) DDGR quadruple is -1/3 and constant") {
    const Family fam;
    const CrossRatio k = cross_ratio(fam.w(2.0), fam.triple(1.0, 3.0, 4.0), kRelTol);
    CHECK(std::abs(k.k_estimate - (-1.0 / 3.0)) < 1e-6);
    CHECK(k.constancy < 1e-6);
    CHECK(k.valid_fraction > 0.9);
}

TEST_CASE("cross_ratio rejects nonpositive rel_tol") {
    const Family fam;
    CHECK_THROWS_AS(cross_ratio(fam.w(2.0), fam.triple(1.0, 3.0, 4.0), 0.0),
                    PreconditionError);
}

TEST_CASE("make_triple rejects duplicate parameter chains") {
    const Family fam;
    CHECK_THROWS_AS(make_triple(fam.w(1.0), fam.w(1.0), fam.w(3.0)), PreconditionError);
}

TEST_CASE("superpose anchors: k = 0 -> w1, k = 1 -> w3, inverse at -1/3") {
    const Family fam;
    const RiccatiTriple triple = fam.triple(1.0, 3.0, 4.0);

    CHECK(max_abs_diff(superpose(triple, 0.0).samples, triple.w1.samples) < 1e-12);
    CHECK(max_abs_diff(superpose(triple, 1.0).samples, triple.w3.samples) < 1e-12);

    const Superpotential rebuilt = superpose(triple, -1.0 / 3.0);
    CHECK(rebuilt.kind == RiccatiKind::general);
    CHECK(max_abs_diff(rebuilt.samples, fam.w(2.0).samples) < 1e-6);
}

TEST_CASE("cross_ratio(superpose(k)) round-trips k") {
    const Family fam;
    const RiccatiTriple triple = fam.triple(1.0, 3.0, 4.0);
    for (double k : {-2.0, -1.0 / 3.0, 0.5, 3.0}) {
        const CrossRatio measured = cross_ratio(superpose(triple, k), triple, kRelTol);
        CHECK(std::abs(measured.k_estimate - k) < 1e-8);
    }
}

TEST_CASE("every superposition solves the same Riccati equation") {
    const Family fam;
    const RiccatiTriple triple = fam.triple(1.0, 3.0, 4.0);
    const SampledFunction partner = fermionic_partner(witten_superpotential(fam.u0));
    for (double k : {-2.0, -1.0 / 3.0, 0.5, 3.0}) {
        const SampledFunction vp = fermionic_partner(superpose(triple, k));
        CHECK(max_abs_diff(vp, partner, true) < 1e-4);
    }
}

TEST_CASE("lambda_cross_ratio closed form") {
    CHECK(lambda_cross_ratio(2.0, 1.0, 3.0, 4.0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(lambda_cross_ratio(1.0, 1.0, 3.0, 4.0), PreconditionError);
    CHECK_THROWS_AS(lambda_cross_ratio(2.0, 1.0, 4.0, 4.0), PreconditionError);
    // lambda -> inf limit: (l2 - l3)/(l1 - l3) sign structure gives 1/3
    CHECK(std::abs(lambda_cross_ratio(1e8, 1.0, 3.0, 4.0) - 1.0 / 3.0) < 1e-6);
}

TEST_CASE("lambda_form_invariant matches the closed form on both paths") {
    const Grid grid = build_grid(-4.0, 4.0, 4001);
    const WaveFunction u0 = testsupport::oscillator_mode(grid);
    const LambdaFormInvariant inv = lambda_form_invariant(u0, 2.0, 1.0, 3.0, 4.0);

    const double closed = lambda_cross_ratio(2.0, 1.0, 3.0, 4.0);
    CHECK(std::abs(inv.sigma_path.k_estimate - closed) < 1e-6);
    CHECK(std::abs(inv.integral_path.k_estimate - inv.sigma_path.k_estimate) < 1e-6);
    CHECK(inv.sigma_path.constancy < 1e-6);

    CHECK_THROWS_AS(lambda_form_invariant(u0, 2.0, 1.0, 3.0, 1.0), PreconditionError);
    CHECK_THROWS_AS(lambda_form_invariant(u0, -0.5, 1.0, 3.0, 4.0), SingularBandError);
}

TEST_CASE("measured cross ratios match the closed form on random quadruples") {
    const Family fam;
    std::mt19937 rng(7041963);
    std::uniform_real_distribution<double> pos(0.1, 5.0);
    std::uniform_real_distribution<double> neg(-6.0, -1.15);
    std::bernoulli_distribution branch(0.25);

    int tested = 0;
    while (tested < 50) {
        double ls[4];
        bool ok = true;
        for (double& l : ls) l = branch(rng) ? neg(rng) : pos(rng);
        for (int i = 0; i < 4 && ok; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (std::abs(ls[i] - ls[j]) < 0.25) ok = false;
        if (!ok) continue;
        ++tested;

        const double closed = lambda_cross_ratio(ls[0], ls[1], ls[2], ls[3]);
        const CrossRatio measured =
            cross_ratio(fam.w(ls[0]), fam.triple(ls[1], ls[2], ls[3]), kRelTol);
        CHECK(std::abs(measured.k_estimate - closed) < 1e-6);
    }
}

TEST_CASE("cross-ratio constancy holds for the sech-based family too") {
    const Grid grid = build_grid(-5.0, 5.0, 2001);
    const WaveFunction u0 = testsupport::poschl_teller_mode(grid);
    auto w = [&](double l) { return general_superpotential(u0, l); };
    const CrossRatio k = cross_ratio(w(2.0), make_triple(w(1.0), w(3.0), w(4.0)), kRelTol);
    CHECK(std::abs(k.k_estimate - (-1.0 / 3.0)) < 1e-6);
    CHECK(k.constancy < 1e-6);
    CHECK(k.valid_fraction > 0.9);
}
