#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "isospec/catalog.hpp"
#include "isospec/io.hpp"
#include "support.hpp"

using namespace isospec;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("isospec_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

PotentialSpec spec_of(PotentialFamily family, std::map<std::string, double> params = {}) {
    PotentialSpec s;
    s.family = family;
    s.name = family_name(family);
    s.params = std::move(params);
    return s;
}

} // namespace

TEST_CASE("catalog: harmonic and Poschl-Teller sample their closed forms") {
    const Grid g = build_grid(-10.0, 10.0, 2001);
    const auto harm = resolve_potential(spec_of(PotentialFamily::harmonic), g);
    const int i2 = 1200; // node closest to x = 2
    CHECK(harm.V.values[i2] == doctest::Approx(4.0).epsilon(1e-12));
    REQUIRE(harm.analytic_ground_state.has_value());
    CHECK(harm.analytic_ground_state->energy == 1.0);

    const auto pt = resolve_potential(spec_of(PotentialFamily::poschl_teller, {{"depth", 2.0}}), g);
    CHECK(pt.V.values[g.n / 2] == doctest::Approx(-2.0));
    REQUIRE(pt.analytic_ground_state.has_value());
    CHECK(pt.analytic_ground_state->energy == doctest::Approx(-1.0));

    CHECK_THROWS_AS(resolve_potential(spec_of(PotentialFamily::poschl_teller), g),
                    PreconditionError); // depth missing
}

TEST_CASE("catalog: square well uses half-depth wall samples") {
    const Grid g = build_grid(-8.0, 8.0, 1601);
    const auto well =
        resolve_potential(spec_of(PotentialFamily::square_well, {{"depth", 2.0}, {"width", 2.0}}), g);
    const int wall = 700; // x = -1
    CHECK(g.node(wall) == doctest::Approx(-1.0));
    CHECK(well.V.values[wall] == doctest::Approx(-1.0));
    CHECK(well.V.values[g.n / 2] == doctest::Approx(-2.0));
    CHECK(well.V.values.front() == 0.0);
}

TEST_CASE("catalog: morse minimum and required parameters") {
    const Grid g = build_grid(-3.0, 10.0, 1301);
    CHECK_THROWS_AS(resolve_potential(spec_of(PotentialFamily::morse), g), PreconditionError);
    const auto morse =
        resolve_potential(spec_of(PotentialFamily::morse, {{"depth", 3.0}, {"width", 1.0}}), g);
    const auto min_it = std::min_element(morse.V.values.begin(), morse.V.values.end());
    CHECK(*min_it == doctest::Approx(-3.0).epsilon(1e-6));
    CHECK(g.node(static_cast<int>(min_it - morse.V.values.begin())) ==
          doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("catalog: box ground state") {
    const Grid g = build_grid(0.0, 1.0, 2001);
    const auto box = resolve_potential(spec_of(PotentialFamily::box), g);
    REQUIRE(box.analytic_ground_state.has_value());
    CHECK(box.analytic_ground_state->energy == doctest::Approx(M_PI * M_PI));
    CHECK(testsupport::max_abs_error(
              box.analytic_ground_state->samples,
              [](double x) { return std::sqrt(2.0) * std::sin(M_PI * x); }) < 1e-6);
}

TEST_CASE("ground_state_of falls back to the eigensolver") {
    const Grid g = build_grid(-12.0, 12.0, 2401);
    const auto well =
        resolve_potential(spec_of(PotentialFamily::square_well, {{"depth", 2.0}, {"width", 2.0}}), g);
    CHECK_FALSE(well.analytic_ground_state.has_value());
    const WaveFunction u0 = ground_state_of(well, g);

    // oracle: even bound state of the finite well solves k tan(k a) = kappa
    // with k^2 + kappa^2 = depth, a = width/2; E0 = k^2 - depth
    double lo = 1e-6, hi = std::sqrt(2.0) - 1e-6;
    for (int it = 0; it < 200; ++it) {
        const double k = 0.5 * (lo + hi);
        const double f = k * std::tan(k * 1.0) - std::sqrt(2.0 - k * k);
        (f < 0.0 ? lo : hi) = k;
    }
    const double k_root = 0.5 * (lo + hi);
    const double E0_exact = k_root * k_root - 2.0;
    CHECK(std::abs(u0.energy - E0_exact) < 1e-3);
    CHECK(u0.normalized);
}

TEST_CASE("format_double round-trips binary64 exactly") {
    std::mt19937_64 rng(118999);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-300, 300);
    for (int i = 0; i < 200; ++i) {
        const double x = std::ldexp(mant(rng), expo(rng));
        const std::string s = format_double(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
    CHECK(format_double(0.0) == "0");
}

TEST_CASE("format_lambda renders integers without a decimal point") {
    CHECK(format_lambda(1.0) == "1");
    CHECK(format_lambda(-2.0) == "-2");
    CHECK(format_lambda(0.5) == "0.5");
    CHECK(format_lambda(1e8) == "100000000");
}

TEST_CASE("emitted CSV round-trips through the table ingester unchanged") {
    TempDir tmp;
    const Grid g = build_grid(-5.0, 5.0, 501);
    const SampledFunction V = sample(g, [](double x) {
        return std::sin(3.0 * x) * std::exp(0.3 * x);
    });
    const fs::path file = tmp.path / "potential.csv";
    write_csv(file, "x,value", {g.nodes(), V.values});

    const Table table = read_table(file);
    const SampledFunction back = interpolate_table(table, g);
    for (int i = 0; i < g.n; ++i) CHECK(back.values[i] == V.values[i]);
}

TEST_CASE("read_table rejects malformed input") {
    TempDir tmp;
    const fs::path bad = tmp.path / "bad.csv";
    {
        std::ofstream out(bad);
        out << "x,value\n0,1\n2,3\n1,4\n"; // non-monotone x
    }
    CHECK_THROWS_AS(read_table(bad), IoError);
    {
        std::ofstream out(bad);
        out << "x,value\n0,1\nfoo,bar\n";
    }
    CHECK_THROWS_AS(read_table(bad), IoError);
    CHECK_THROWS_AS(read_table(tmp.path / "missing.csv"), IoError);
}

TEST_CASE("tabulated potentials reject grids outside the table range") {
    TempDir tmp;
    const fs::path file = tmp.path / "t.csv";
    {
        std::ofstream out(file);
        out << "x,value\n-1,0\n0,1\n1,0\n";
    }
    PotentialSpec spec = spec_of(PotentialFamily::tabulated);
    spec.source_path = file.string();
    const Grid inside = build_grid(-1.0, 1.0, 21);
    CHECK_NOTHROW(resolve_potential(spec, inside));
    const Grid outside = build_grid(-2.0, 2.0, 21);
    CHECK_THROWS_AS(resolve_potential(spec, outside), IoError);
}

TEST_CASE("manifest JSON round trip") {
    RunManifest m;
    m.spec = spec_of(PotentialFamily::poschl_teller, {{"depth", 2.0}});
    m.x_min = -15.0;
    m.x_max = 15.0;
    m.n = 3001;
    m.lambdas = {0.5, 1.0, -2.0};
    m.levels = 3;
    m.tolerances.spectrum = 1e-3;
    m.out_dir = "out";
    m.format = "json";

    const RunManifest back = manifest_from_json(to_json(m));
    CHECK(back.spec.family == m.spec.family);
    CHECK(back.spec.params.at("depth") == 2.0);
    CHECK(back.x_min == m.x_min);
    CHECK(back.x_max == m.x_max);
    CHECK(back.n == m.n);
    CHECK(back.lambdas == m.lambdas);
    CHECK(back.levels == m.levels);
    CHECK(back.tolerances.spectrum == 1e-3);
    CHECK(back.format == "json");
}

TEST_CASE("verification report serializes with sorted keys and a version") {
    VerificationReport r;
    r.potential_id = "harmonic";
    r.lambdas = {1.0};
    r.spectrum_deltas = {{1e-5}};
    r.partner_deviation = {1e-6};
    r.gs_residual = {1e-5};
    r.norm_error = {1e-8};
    r.evaluate();
    const auto j = to_json(r);
    CHECK(j.contains("version"));
    CHECK(j.at("passed").get<bool>());
    const std::string dumped = j.dump();
    CHECK(dumped.find("\"passed\"") != std::string::npos);
}

TEST_CASE("complex dumps round-trip their first two columns") {
    TempDir tmp;
    const fs::path file = tmp.path / "amps.csv";
    const std::vector<double> k = {0.5, 1.0, 2.0};
    const std::vector<std::complex<double>> z = {{0.1, -0.2}, {0.3, 0.4}, {-0.5, 0.6}};
    write_csv_complex(file, "k,re,im", k, z);
    const Table t = read_table(file);
    REQUIRE(t.x.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(t.x[i] == k[i]);
        CHECK(t.value[i] == z[i].real());
    }
}

TEST_CASE("poschl_teller at general depth: sech^s ground state") {
    // s(s+1) = depth, E0 = -s^2; depth 6 gives s = 2, E0 = -4
    const Grid g = build_grid(-15.0, 15.0, 3001);
    const auto pt = resolve_potential(spec_of(PotentialFamily::poschl_teller, {{"depth", 6.0}}), g);
    REQUIRE(pt.analytic_ground_state.has_value());
    CHECK(pt.analytic_ground_state->energy == doctest::Approx(-4.0));
    const Spectrum s = compute_spectrum(discretize(pt.V, g), 1);
    CHECK(std::abs(s.energies[0] + 4.0) < 1e-3);
}
