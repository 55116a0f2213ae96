#include <doctest.h>

#include <cmath>

#include "muskat/diagnostics.hpp"
#include "muskat/errors.hpp"
#include "helpers.hpp"

using namespace muskat;

TEST_SUITE("diagnostics") {

TEST_CASE("record of the flat state is the rest point") {
    auto g = testutil::grid1(32);
    SpectralField f(g);
    DnEvaluator dn(testutil::fast_dn());
    auto rhs = compute_rhs(f, MuskatParams{}, dn, Nonlinearity::Full);
    auto row = record(EvolutionState{0.0, f, true}, rhs, MuskatParams{}, dn, 4.0);
    CHECK(row.l2 == 0.0);
    CHECK(row.j == 0.0);
    CHECK(row.a_min == 1.0);
    CHECK(row.mean == 0.0);
    CHECK(row.dissipation == doctest::Approx(0.0));
}

TEST_CASE("record of a small cosine carries consistent observables") {
    auto g = testutil::grid1(32);
    auto f = testutil::cosine(g, 1, 0.05);
    DnEvaluator dn(testutil::fast_dn());
    MuskatParams p;
    auto rhs = compute_rhs(f, p, dn, Nonlinearity::Full);
    auto row = record(EvolutionState{0.1, f, true}, rhs, p, dn, 4.0);
    CHECK(row.t == 0.1);
    CHECK(row.l2 == doctest::Approx(norm_l2(f)).epsilon(1e-13));
    CHECK(row.h2_sq == doctest::Approx(std::pow(sobolev_norm(f, 2.0), 2)).epsilon(1e-12));
    CHECK(row.j > 0.0);
    CHECK(row.a_min > 0.9);
    CHECK(row.a_min < 1.0);
    CHECK(row.max_dn_ff < 1.0);
    CHECK(row.dissipation == doctest::Approx(-inner_l2(f, rhs.total)).epsilon(1e-12));
    CHECK(row.dissipation > 0.0); // the flow dissipates energy
    // leading order J ~ eps^2 <cos, cos> = eps^2 pi
    CHECK(row.j == doctest::Approx(0.0025 * M_PI).epsilon(0.02));
}

TEST_CASE("energy residual stencils are exact on polynomial data") {
    // E(t) = t^2 + 1 with D(t) = -2t balances dE/dt + D = 0 exactly; every
    // stencil (centered+simpson interior, one-sided trapezoid ends and at
    // nonuniform joints) integrates this pair exactly.
    auto make_row = [](double t) {
        DiagnosticsRow r;
        r.t = t;
        r.l2 = std::sqrt(2.0 * (t * t + 1.0));
        r.dissipation = -2.0 * t;
        return r;
    };
    std::vector<DiagnosticsRow> rows;
    for (double t : {0.0, 0.1, 0.2, 0.3, 0.45, 0.6, 0.75}) rows.push_back(make_row(t));
    fill_energy_residuals(rows);
    for (const auto& r : rows) CHECK(std::abs(r.energy_residual) < 1e-12);
}

TEST_CASE("energy residual flags an inconsistent pair") {
    std::vector<DiagnosticsRow> rows;
    for (double t : {0.0, 0.1, 0.2}) {
        DiagnosticsRow r;
        r.t = t;
        r.l2 = std::exp(-t);
        r.dissipation = 0.0; // claims no dissipation while E decays
        rows.push_back(r);
    }
    fill_energy_residuals(rows);
    CHECK(std::abs(rows[1].energy_residual) > 0.5);
}

TEST_CASE("simulate produces rows matching the trajectory") {
    auto g = testutil::grid1(32);
    auto f0 = testutil::cosine(g, 1, 0.02);
    StepperSpec sp;
    sp.dt = 1e-3;
    auto res = simulate(f0, 0.02, sp, MuskatParams{}, testutil::fast_dn(), 5, 4.0);
    REQUIRE(res.completed);
    REQUIRE(res.rows.size() == 5);
    REQUIRE(res.traj.states.size() == 5);
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        CHECK(res.rows[i].t == doctest::Approx(res.traj.times[i]).epsilon(1e-14));
        CHECK(res.rows[i].l2 ==
              doctest::Approx(norm_l2(res.traj.states[i])).epsilon(1e-13));
    }
    // interior residuals reflect a consistent energy balance
    for (std::size_t i = 1; i + 1 < res.rows.size(); ++i)
        CHECK(std::abs(res.rows[i].energy_residual) <
              1e-5 * std::max(1.0, res.rows[i].h2_sq));
}

TEST_CASE("decay fit recovers a synthetic rate") {
    std::vector<double> t, v;
    for (int i = 0; i <= 100; ++i) {
        t.push_back(0.025 * i);
        v.push_back(3.0 * std::exp(-2.0 * 0.025 * i));
    }
    auto fit = fit_decay_rate(t, v, 0.4, 2.0);
    CHECK(fit.rate == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-10));

    // values outside the window must not matter
    auto t2 = t;
    auto v2 = v;
    v2.front() = 1e6;
    v2.back() = 1e6; // t = 2.5 > window end
    auto fit2 = fit_decay_rate(t2, v2, 0.4, 2.0);
    CHECK(fit2.rate == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("decay fit validates its input") {
    std::vector<double> t{0.5, 0.6, 0.7}, v{1.0, -1.0, 0.5};
    CHECK_THROWS_AS(fit_decay_rate(t, v, 0.4, 2.0), ValidationError);
    std::vector<double> t1{0.5}, v1{1.0};
    CHECK_THROWS_AS(fit_decay_rate(t1, v1, 0.4, 2.0), ValidationError);
}

TEST_CASE("bootstrap monitor is the sup relative to the initial norm") {
    auto g = testutil::grid1(32);
    Trajectory traj;
    traj.times = {0.0, 1.0, 2.0};
    traj.states.push_back(testutil::cosine(g, 2, 1.0));
    traj.states.push_back(testutil::cosine(g, 2, 0.5));
    traj.states.push_back(testutil::cosine(g, 2, 0.25));
    CHECK(bootstrap_monitor(traj, 4.0) == doctest::Approx(1.0).epsilon(1e-13));
    traj.states[1] = testutil::cosine(g, 2, 1.5);
    CHECK(bootstrap_monitor(traj, 4.0) == doctest::Approx(1.5).epsilon(1e-13));
}

TEST_CASE("contraction experiment tracks two nearby runs") {
    auto g = testutil::grid1(32);
    auto f1 = testutil::cosine(g, 1, 0.02);
    auto f2 = f1;
    add_cosine(f2, {2}, 1e-4);
    StepperSpec sp;
    sp.dt = 1e-3;
    auto res = contraction_experiment(f1, f2, 0.01, sp, MuskatParams{},
                                      testutil::fast_dn(), 2.0, 5);
    REQUIRE(res.completed);
    CHECK(!res.degenerate);
    CHECK(res.max_ratio > 0.0);
    CHECK(res.max_ratio < 3.0);
    CHECK(res.ratio_at_t < 1.0); // mode-2 perturbations decay fast
    CHECK(res.terminal_distance > 0.0);

    auto same = contraction_experiment(f1, f1, 0.01, sp, MuskatParams{},
                                       testutil::fast_dn(), 2.0, 5);
    CHECK(same.degenerate);
}

} // TEST_SUITE
