#include <doctest.h>

#include <cmath>

#include "muskat/errors.hpp"
#include "muskat/multipliers.hpp"
#include "muskat/norms.hpp"
#include "helpers.hpp"

using namespace muskat;

TEST_SUITE("multipliers") {

TEST_CASE("abs_nabla on a single mode multiplies by |k|") {
    auto g = testutil::grid1();
    auto f = testutil::cosine(g, 3, 1.0);
    auto out = abs_nabla(f);
    CHECK(testutil::max_coeff_diff(out, scaled(f, 3.0)) < 1e-14);

    auto half = abs_nabla_pow(f, 0.5);
    CHECK(testutil::max_coeff_diff(half, scaled(f, std::sqrt(3.0))) < 1e-14);

    // homogeneous powers annihilate the mean even for negative exponents
    SpectralField c(g);
    c.coeffs[0] = 1.0;
    CHECK(norm_l2(abs_nabla_pow(c, -1.0)) == 0.0);
}

TEST_CASE("derivative matches the analytic derivative") {
    auto g = testutil::grid1();
    auto f = testutil::cosine(g, 4, 0.3, 0.7);
    auto d = derivative(f, 0);
    auto s = samples(d);
    double m = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        m = std::max(m, std::abs(s[i] + 1.2 * std::sin(4.0 * g->coord(i, 0) + 0.7)));
    CHECK(m < 1e-13);
}

TEST_CASE("gradient and divergence are adjoint up to sign") {
    auto g = testutil::grid2();
    SpectralField f(g), h(g);
    add_cosine(f, {2, 1}, 1.0);
    add_cosine(h, {1, 3}, 0.5);
    auto gf = gradient(f);
    auto gh = gradient(h);
    // <grad f, grad h> = <f, -Laplacian h> = -<f, div grad h>
    double lhs = 0.0;
    for (int a = 0; a < 2; ++a) lhs += inner_l2(gf[a], gh[a]);
    auto lap = divergence(gh);
    CHECK(lhs == doctest::Approx(-inner_l2(f, lap)).epsilon(1e-12));
}

TEST_CASE("sharp cutoff truncates strictly outside the radius") {
    auto g = testutil::grid1();
    SpectralField f(g);
    add_cosine(f, {2}, 1.0);
    add_cosine(f, {5}, 1.0);
    auto t = fourier_truncate(f, 3.5);
    CHECK(std::abs(coeff_at(t, {2}) - Complex(0.5, 0)) < 1e-15);
    CHECK(std::abs(coeff_at(t, {5})) == 0.0);
    // boundary mode |k| = radius is kept
    auto t2 = fourier_truncate(f, 5.0);
    CHECK(std::abs(coeff_at(t2, {5}) - Complex(0.5, 0)) < 1e-15);
}

TEST_CASE("linear rate symbol") {
    LinearRate r{2.0, 0.5, 1.0, 3.0, 0.25};
    // (kappa/mu) xi (rho g + st xi^2) at xi = 2
    const double expected = 4.0 * 2.0 * (3.0 + 0.25 * 4.0);
    CHECK(symbol_value(r, 2.0) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(symbol_value(r, 0.0) == 0.0);

    // defaults: k = 1 -> 2, k = 2 -> 10
    LinearRate unit{1.0, 1.0, 1.0, 1.0, 1.0};
    CHECK(symbol_value(unit, 1.0) == doctest::Approx(2.0));
    CHECK(symbol_value(unit, 2.0) == doctest::Approx(10.0));
}

TEST_CASE("linear semigroup decays each mode at its rate") {
    auto g = testutil::grid1();
    SpectralField f(g);
    add_cosine(f, {1}, 1.0);
    add_cosine(f, {2}, 1.0);
    LinearSemigroup sg{0.3, LinearRate{}};
    auto out = apply_multiplier(f, sg);
    CHECK(std::abs(coeff_at(out, {1}).real() - 0.5 * std::exp(-0.6)) < 1e-15);
    CHECK(std::abs(coeff_at(out, {2}).real() - 0.5 * std::exp(-3.0)) < 1e-15);
}

TEST_CASE("littlewood-paley symbols form an exact partition of unity") {
    // chi(xi) + sum_{j>=0} psi(xi/2^j) = 1 wherever the grid has modes
    for (double xi : {1.0, 2.0, 3.0, 5.0, 9.0, 17.0, 50.0, 120.0}) {
        double acc = lp_chi(xi);
        for (int j = 0; j <= 12; ++j) acc += lp_psi(std::ldexp(xi, -j));
        CHECK(std::abs(acc - 1.0) < 1e-12);
    }
    CHECK(lp_chi(0.0) == doctest::Approx(1.0));
}

TEST_CASE("littlewood-paley symbol supports") {
    // psi lives in [5/8, 8/5] x 2^j scaling; outside it must vanish
    CHECK(lp_psi(0.5) == 0.0);
    CHECK(lp_psi(1.7) == 0.0);
    CHECK(lp_psi(1.0) > 0.0);
    CHECK(lp_chi(0.6) == doctest::Approx(1.0));
    CHECK(lp_chi(0.85) == 0.0);
}

TEST_CASE("lp_project annihilates far modes and partitions near ones") {
    auto g = testutil::grid1(128);
    auto f = testutil::cosine(g, 12, 1.0);
    // block j = 3 covers [5, 12.8]: mode 12 intersects; j = 0 does not
    CHECK(norm_l2(lp_project(f, 0)) == 0.0);
    double total = norm_l2(lp_project(f, -1));
    SpectralField sum = lp_project(f, -1);
    for (int j = 0; j <= lp_block_ceiling(*g); ++j) axpy(sum, 1.0, lp_project(f, j));
    CHECK(testutil::max_coeff_diff(sum, f) < 1e-12);
    CHECK(total == 0.0); // mode 12 is far above the low-pass
}

TEST_CASE("poisson_extend is the per-mode exponential") {
    auto g = testutil::grid1();
    SpectralField f(g);
    add_cosine(f, {1}, 1.0);
    add_cosine(f, {3}, 2.0);
    auto ext = poisson_extend(f, {-2.0, -0.7, 0.0});
    CHECK(std::abs(ext.levels[1][1].real() - 0.5 * std::exp(-0.7)) < 1e-15);
    CHECK(std::abs(ext.levels[1][3].real() - 1.0 * std::exp(-2.1)) < 1e-15);
    CHECK(std::abs(ext.levels[2][3].real() - 1.0) < 1e-15); // z = 0 is the trace
    CHECK_THROWS_AS(poisson_extend(f, {0.5}), ValidationError);
}

} // TEST_SUITE
