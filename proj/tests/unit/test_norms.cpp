#include <doctest.h>

#include <cmath>

#include "muskat/errors.hpp"
#include "muskat/multipliers.hpp"
#include "muskat/norms.hpp"
#include "helpers.hpp"

using namespace muskat;

TEST_SUITE("norms") {

TEST_CASE("L2 and Sobolev of a single mode are closed-form") {
    auto g = testutil::grid1();
    auto f = testutil::cosine(g, 3, 2.0); // ||f||_2^2 = 4 pi
    CHECK(lebesgue_norm(f, 2.0) == doctest::Approx(2.0 * std::sqrt(M_PI)).epsilon(1e-14));
    CHECK(sobolev_norm(f, 1.0) ==
          doctest::Approx(2.0 * std::sqrt(M_PI) * std::sqrt(10.0)).epsilon(1e-14));
    CHECK(hom_sobolev_norm(f, 0.5) ==
          doctest::Approx(2.0 * std::sqrt(M_PI) * std::pow(3.0, 0.5)).epsilon(1e-14));
}

TEST_CASE("homogeneous families ignore the mean and flag it") {
    auto g = testutil::grid1();
    auto f = testutil::cosine(g, 2, 1.0);
    f.coeffs[0] = 0.5;
    auto r = evaluate_norm(f, {NormFamily::HomSobolev, 1.0, 2.0, 2.0});
    CHECK(r.mean_ignored);
    auto f0 = testutil::cosine(g, 2, 1.0);
    CHECK(r.value == doctest::Approx(hom_sobolev_norm(f0, 1.0)).epsilon(1e-14));
}

TEST_CASE("lebesgue p=inf and p=4 against closed forms") {
    auto g = testutil::grid1();
    auto f = testutil::cosine(g, 1, 1.5);
    CHECK(lebesgue_norm(f, kInf) == doctest::Approx(1.5).epsilon(1e-12));
    // int cos^4 = 3 pi / 4
    const double l4 = 1.5 * std::pow(3.0 * M_PI / 4.0, 0.25);
    CHECK(lebesgue_norm(f, 4.0) == doctest::Approx(l4).epsilon(1e-10));
    CHECK_THROWS_AS(lebesgue_norm(f, 0.5), ValidationError);
}

TEST_CASE("lipschitz seminorm is the sup of the gradient") {
    auto g = testutil::grid1();
    auto f = testutil::cosine(g, 4, 0.3);
    CHECK(lipschitz_seminorm(f) == doctest::Approx(1.2).epsilon(1e-10));

    auto g2 = testutil::grid2();
    SpectralField h(g2);
    add_cosine(h, {3, 4}, 1.0); // |grad| peaks at |k| = 5
    CHECK(lipschitz_seminorm(h) == doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("besov B^0_{2,1} of a single mode is exactly its L2 norm") {
    // the partition of unity sums the block weights to one
    auto g = testutil::grid1(128);
    for (int k : {1, 2, 3, 7, 12, 33}) {
        auto f = testutil::cosine(g, k, 1.0);
        CHECK(besov_norm(f, 0.0, 1.0) == doctest::Approx(norm_l2(f)).epsilon(1e-12));
    }
}

TEST_CASE("besov with q=2 is comparable to Sobolev") {
    auto g = testutil::grid1();
    SpectralField f(g);
    add_cosine(f, {1}, 1.0);
    add_cosine(f, {5}, 0.4);
    add_cosine(f, {11}, 0.2);
    const double b = besov_norm(f, 0.5, 2.0);
    const double s = sobolev_norm(f, 0.5);
    CHECK(b / s > 0.3);
    CHECK(b / s < 3.0);
}

TEST_CASE("besov q=inf takes the largest block") {
    auto g = testutil::grid1();
    auto f = testutil::cosine(g, 9, 1.0); // deep inside block j = 3 (covers 5..12.8)
    const double bi = besov_norm(f, 0.0, kInf);
    const double b1 = besov_norm(f, 0.0, 1.0);
    CHECK(bi <= b1 + 1e-14);
    CHECK(bi == doctest::Approx(norm_l2(f)).epsilon(1e-12)); // single block holds it all
}

TEST_CASE("norm_value dispatches all families") {
    auto g = testutil::grid1();
    auto f = testutil::cosine(g, 2, 1.0);
    CHECK(norm_value(f, {NormFamily::Lebesgue, 0, 2, 2}) ==
          doctest::Approx(norm_l2(f)).epsilon(1e-14));
    CHECK(norm_value(f, {NormFamily::Sobolev, 2.0, 2.0, 2.0}) ==
          doctest::Approx(sobolev_norm(f, 2.0)).epsilon(1e-14));
    CHECK(norm_value(f, {NormFamily::Lipschitz, 0, 0, 0}) ==
          doctest::Approx(lipschitz_seminorm(f)).epsilon(1e-12));
    CHECK(norm_value(f, {NormFamily::Besov, 1.0, 2.0, 1.0}) ==
          doctest::Approx(besov_norm(f, 1.0, 1.0)).epsilon(1e-14));
}

TEST_CASE("chemin-lerner dominates the instantaneous besov sup") {
    auto g = testutil::grid1();
    Trajectory traj;
    // two states concentrating in different blocks: the time sup inside each
    // block picks up both peaks, the instantaneous norm only one at a time
    traj.times = {0.0, 1.0};
    traj.states.push_back(testutil::cosine(g, 2, 1.0));
    traj.states.push_back(testutil::cosine(g, 11, 1.0));
    const double cl = chemin_lerner_norm(traj, 0.0, 1.0);
    double sup_inst = 0.0;
    for (const auto& s : traj.states)
        sup_inst = std::max(sup_inst, besov_norm(s, 0.0, 1.0));
    CHECK(cl >= sup_inst - 1e-14);
    CHECK(cl > 1.3 * sup_inst); // genuinely larger for separated spectra
}

TEST_CASE("2d norms reduce to the radial wavenumber") {
    auto g = testutil::grid2();
    SpectralField f(g);
    add_cosine(f, {3, 4}, 1.0); // |k| = 5
    const double l2 = norm_l2(f);
    CHECK(hom_sobolev_norm(f, 1.0) == doctest::Approx(5.0 * l2).epsilon(1e-13));
    CHECK(sobolev_norm(f, 1.0) == doctest::Approx(std::sqrt(26.0) * l2).epsilon(1e-13));
}

} // TEST_SUITE
