#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "muskat/config.hpp"
#include "muskat/errors.hpp"
#include "muskat/io.hpp"
#include "muskat/norms.hpp"
#include "muskat/presets.hpp"
#include "helpers.hpp"

using namespace muskat;

namespace {

std::string tmp_dir() {
    auto d = std::filesystem::temp_directory_path() / "muskat_test_io";
    std::filesystem::create_directories(d);
    return d.string();
}

bool contains(const std::vector<std::string>& v, const std::string& needle) {
    for (const auto& s : v)
        if (s.find(needle) != std::string::npos) return true;
    return false;
}

} // namespace

TEST_SUITE("config_io") {

TEST_CASE("empty config parses to the documented defaults") {
    auto cfg = parse_config_text("{}");
    CHECK(cfg.grid.dim == 1);
    CHECK(cfg.grid.n == 256);
    CHECK(cfg.grid.period == doctest::Approx(2.0 * M_PI));
    CHECK(cfg.stepper.scheme == "ETD_exponential");
    CHECK(cfg.stepper.dt == 1e-3);
    CHECK(cfg.dn.backend == "fixed_point");
    CHECK(cfg.dn.levels == 200);
    CHECK(cfg.init.preset == "single_mode");
    CHECK(cfg.output.dir == "out");
}

TEST_CASE("violations are collected with field paths") {
    const char* text = R"({
        "grid": {"n": 100},
        "stepper": {"dt": -1, "scheme": "leapfrog"},
        "init": {"preset": "wut"},
        "dn": {"levels": 1}
    })";
    try {
        parse_config_text(text);
        CHECK(false);
    } catch (const ValidationError& e) {
        const auto& v = e.violations();
        CHECK(v.size() >= 5);
        CHECK(contains(v, "grid.n"));
        CHECK(contains(v, "stepper.dt"));
        CHECK(contains(v, "stepper.scheme"));
        CHECK(contains(v, "init.preset"));
        CHECK(contains(v, "dn.levels"));
    }
}

TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_AS(parse_config_text(R"({"stepperr": {}})"), ValidationError);
    try {
        parse_config_text(R"({"stepper": {"dtt": 0.1}})");
        CHECK(false);
    } catch (const ValidationError& e) {
        CHECK(contains(e.violations(), "unknown key"));
        CHECK(contains(e.violations(), "dtt"));
    }
}

TEST_CASE("malformed json is a validation error, not a crash") {
    CHECK_THROWS_AS(parse_config_text("{"), ValidationError);
    CHECK_THROWS_AS(parse_config_text("[]"), ValidationError);
}

TEST_CASE("config echo round trips") {
    auto cfg = parse_config_text(R"({
        "grid": {"n": 64},
        "stepper": {"dt": 0.002, "t_final": 0.5, "scheme": "RK4_explicit"},
        "params": {"surface_tension": 0.0},
        "init": {"preset": "random_band", "seed": 99, "band_lo": 2, "band_hi": 5}
    })");
    auto echo = config_to_json(cfg);
    auto cfg2 = parse_config(echo);
    CHECK(cfg2.grid.n == 64);
    CHECK(cfg2.stepper.dt == 0.002);
    CHECK(cfg2.stepper.scheme == "RK4_explicit");
    CHECK(cfg2.params.surface_tension == 0.0);
    CHECK(cfg2.init.seed == 99u);
    CHECK(config_to_json(cfg2) == echo);
}

TEST_CASE("builders map strings onto the solver enums") {
    auto cfg = parse_config_text(
        R"({"stepper": {"scheme": "IMEX_linear_implicit", "nonlinearity": "linear_only"},
            "dn": {"backend": "elliptic", "levels": 50, "z_max": 25}})");
    auto spec = build_stepper(cfg.stepper);
    CHECK(spec.scheme == Scheme::ImexLinearImplicit);
    CHECK(spec.nonlinearity == Nonlinearity::LinearOnly);
    auto dn = build_dn(cfg.dn);
    CHECK(dn.backend == DnBackend::Elliptic);
    CHECK(dn.vertical.levels() == 50);
    CHECK(dn.vertical.z_max() == doctest::Approx(25.0));
}

TEST_CASE("single and two mode presets place their coefficients") {
    auto g = testutil::grid1(32);
    InitConfig ic;
    ic.preset = "single_mode";
    ic.amplitude = 0.25;
    ic.mode = {3};
    ic.phase = 0.4;
    auto f = make_initial(g, ic);
    auto expect = testutil::cosine(g, 3, 0.25, 0.4);
    CHECK(testutil::max_coeff_diff(f, expect) < 1e-15);

    ic.preset = "two_mode";
    ic.mode2 = {5};
    ic.amplitude2 = 0.1;
    auto f2 = make_initial(g, ic);
    CHECK(std::abs(coeff_at(f2, {5}) - Complex(0.05, 0.0)) < 1e-15);
}

TEST_CASE("random band preset is deterministic and band-limited") {
    auto g = testutil::grid1(64);
    InitConfig ic;
    ic.preset = "random_band";
    ic.amplitude = 0.2;
    ic.mode = {1};
    ic.seed = 7;
    ic.band_lo = 2;
    ic.band_hi = 6;
    ic.normalize = "l2";
    auto a = make_initial(g, ic);
    auto b = make_initial(g, ic);
    CHECK(testutil::max_coeff_diff(a, b) == 0.0);
    CHECK(norm_l2(a) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(mean_value(a) == 0.0);
    CHECK(hermitian_defect(a) < 1e-15);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
        const double k = a.grid->xi_abs(i);
        if ((k < 2.0 || k > 6.0) && std::abs(a.coeffs[i]) > 0.0) CHECK(false);
    }
    ic.seed = 8;
    auto c = make_initial(g, ic);
    CHECK(testutil::max_coeff_diff(a, c) > 1e-4);

    ic.normalize = "h2";
    auto d = make_initial(g, ic);
    CHECK(sobolev_norm(d, 2.0) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("gaussian bump preset is mean-free and localized") {
    auto g = testutil::grid1(128);
    InitConfig ic;
    ic.preset = "gaussian_bump";
    ic.amplitude = 0.3;
    ic.mode = {1};
    ic.width = 0.5;
    auto f = make_initial(g, ic);
    CHECK(mean_value(f) == 0.0);
    auto s = samples(f);
    // peak near x = pi, small (and negative, after recentering) at x = 0
    std::size_t peak = 64; // x = pi
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] <= s[peak] + 1e-12);
    CHECK(s[peak] > 0.2);
    CHECK(s[0] < 0.0);
}

TEST_CASE("snapshot round trip is bit exact") {
    auto g = testutil::grid1(32);
    InitConfig ic;
    ic.preset = "random_band";
    ic.amplitude = 1.0;
    ic.mode = {1};
    ic.seed = 12345;
    ic.band_lo = 1;
    ic.band_hi = 10;
    auto f = make_initial(g, ic);
    MuskatParams p;
    p.surface_tension = 0.5;
    const std::string path = tmp_dir() + "/snap.json";
    write_snapshot(path, f, 0.375, p);
    auto snap = read_snapshot(path);
    CHECK(snap.t == 0.375);
    CHECK(snap.params.surface_tension == 0.5);
    CHECK(snap.f.grid->n() == 32);
    REQUIRE(snap.f.coeffs.size() == f.coeffs.size());
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        CHECK(snap.f.coeffs[i].real() == f.coeffs[i].real());
        CHECK(snap.f.coeffs[i].imag() == f.coeffs[i].imag());
    }
}

TEST_CASE("2d snapshot round trip") {
    auto g = testutil::grid2(16);
    SpectralField f(g);
    add_cosine(f, {2, 3}, 0.125);
    add_cosine(f, {-1, 4}, 0.0625);
    const std::string path = tmp_dir() + "/snap2d.json";
    write_snapshot(path, f, 0.0, MuskatParams{});
    auto snap = read_snapshot(path);
    CHECK(testutil::max_coeff_diff(snap.f, f) == 0.0);
}

TEST_CASE("diagnostics csv has the fixed header and full precision") {
    std::vector<DiagnosticsRow> rows(2);
    rows[0].t = 0.0;
    rows[0].l2 = 1.0 / 3.0;
    rows[1].t = 0.1;
    rows[1].l2 = 0.3333333333333333;
    const std::string path = tmp_dir() + "/diag.csv";
    write_diagnostics_csv(path, rows);
    std::ifstream in(path);
    std::string header, line1;
    std::getline(in, header);
    std::getline(in, line1);
    CHECK(header == "t,L2,Hhalf,H3half,Hs,Lip,J,a_min,mean,energy_residual");
    // %.17g preserves the double exactly
    CHECK(line1.find("0.33333333333333331") != std::string::npos);
    int lines = 2;
    std::string rest;
    while (std::getline(in, rest)) ++lines;
    CHECK(lines == 3); // header + 2 rows
}

TEST_CASE("manifest lists files sorted with the config echo") {
    const std::string dir = tmp_dir();
    auto cfg = parse_config_text("{}");
    write_manifest(dir, config_to_json(cfg), {"b.json", "a.csv"});
    auto doc = read_json_file(dir + "/manifest.json");
    REQUIRE(doc.contains("files"));
    CHECK(doc["files"][0] == "a.csv");
    CHECK(doc["files"][1] == "b.json");
    CHECK(doc["config"]["grid"]["n"] == 256);
}

TEST_CASE("io failures throw IoError with the path") {
    CHECK_THROWS_AS(read_snapshot("/nonexistent/deeply/nested.json"), IoError);
    CHECK_THROWS_AS(write_diagnostics_csv("/nonexistent/deeply/diag.csv", {}), IoError);
    try {
        read_json_file("/nonexistent/x.json");
        CHECK(false);
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/x.json") != std::string::npos);
    }
}

TEST_CASE("corrupt snapshots are rejected") {
    const std::string path = tmp_dir() + "/bad.json";
    {
        std::ofstream out(path);
        out << R"({"meta": {"t": 0}, "coeffs": []})";
    }
    CHECK_THROWS_AS(read_snapshot(path), IoError);
    {
        std::ofstream out(path);
        out << "not json";
    }
    CHECK_THROWS_AS(read_snapshot(path), IoError);
}

} // TEST_SUITE
