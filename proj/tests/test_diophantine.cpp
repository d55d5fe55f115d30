#include <doctest.h>

#include "bpl/diophantine.hpp"

using namespace bpl;

TEST_CASE("first-order condition on hand-picked frequencies") {
    Eigen::Vector2d golden(1.0, 0.6180339887498949);
    CHECK(check_dc(golden, 0.05, 2.0, 30));

    Eigen::Vector2d rational(1.0, 1.0);  // l = (1,-1) is an exact resonance
    CHECK(!check_dc(rational, 1e-8, 2.0, 2));

    Eigen::Vector2d planted(1.5, 0.75);  // l = (1,-2) kills it
    CHECK(!check_dc(planted, 1e-8, 6.0, 2));

    // vacuous at gamma = 0
    CHECK(check_dc(rational, 0.0, 2.0, 10));

    // monotone in gamma
    Eigen::Vector2d om(1.31, 0.57);
    for (double g = 1e-4; g < 1.0; g *= 10)
        if (check_dc(om, g * 10, 4.0, 16)) CHECK(check_dc(om, g, 4.0, 16));
}

TEST_CASE("lattice-shifted first-order condition") {
    ProblemConfig cfg;
    cfg.K_trunc = 4;
    Eigen::Vector2d om(1.5, 0.75);
    // lambda om.l vanishes at l = (1,-2) and the dispersion shift is only -0.2
    CHECK(!check_omega_gamma(om, cfg, 4));
    Eigen::Vector2d good(1.7183, 0.8415);
    CHECK(check_omega_gamma(good, cfg, 4));
    // tighter gamma still passes, looser gamma need not
    CHECK(check_omega_gamma(good, cfg, 4, 1e-6));
}

TEST_CASE("second-order condition detects a planted collision") {
    ProblemConfig cfg;
    cfg.K_trunc = 2;
    auto lat = cfg.make_lat();
    Eigen::Vector2d om(1.7183, 0.8415);

    MuTable mu = Eigen::VectorXcd::Zero(lat->size());
    for (int i = 0; i < lat->size(); ++i)
        if (lat->active(i)) mu[i] = cplx(0.0, cfg.beta_rot * multiplier_tL(lat->j(i)));
    CHECK(check_melnikov2(om, lat, mu, cfg, 2, 1e-10));
    CHECK(check_melnikov1(om, lat, mu, cfg, 2, 1e-10));

    // force mu(r) - mu(c) to cancel i lambda om.(l_r - l_c) exactly
    std::vector<int> lr{1, 0}, lc{0, 1};
    int r = lat->index_of(lr), c = lat->index_of(lc);
    MuTable bad = mu;
    bad[r] = mu[c] - cplx(0.0, cfg.lambda * (om[0] - om[1]));
    CHECK(!check_melnikov2(om, lat, bad, cfg, 2, 1e-10));

    // first-order collision: mu(r) = -i lambda om.l_r
    MuTable bad1 = mu;
    bad1[r] = cplx(0.0, -cfg.lambda * om[0]);
    CHECK(!check_melnikov1(om, lat, bad1, cfg, 2, 1e-10));
}

TEST_CASE("monte carlo measure estimation") {
    auto yes = [](const Eigen::VectorXd&) { return true; };
    auto no = [](const Eigen::VectorXd&) { return false; };
    MeasureEstimate all = measure_fraction(yes, 2, 2000, 1);
    CHECK(all.excluded_fraction == 0.0);
    CHECK(all.ci_lo <= 1e-12);
    MeasureEstimate none = measure_fraction(no, 2, 2000, 1);
    CHECK(none.excluded_fraction == 1.0);

    CHECK_THROWS_AS(measure_fraction(yes, 2, 10, 1), std::invalid_argument);

    // determinism and CI ordering
    auto pred = [](const Eigen::VectorXd& om) { return check_dc(om, 1e-2, 6.0, 8); };
    MeasureEstimate a = measure_fraction(pred, 2, 3000, 42);
    MeasureEstimate b = measure_fraction(pred, 2, 3000, 42);
    CHECK(a.excluded_fraction == b.excluded_fraction);
    CHECK(a.ci_lo <= a.excluded_fraction);
    CHECK(a.excluded_fraction <= a.ci_hi);

    // excluded mass grows with gamma
    auto frac = [&](double g) {
        return measure_fraction([&](const Eigen::VectorXd& om) { return check_dc(om, g, 6.0, 8); },
                                2, 5000, 7)
            .excluded_fraction;
    };
    CHECK(frac(1e-3) <= frac(1e-2));
    CHECK(frac(1e-2) <= frac(1e-1));
}

TEST_CASE("annulus sampler stays in the annulus and is deterministic") {
    Rng r1(5), r2(5);
    for (int t = 0; t < 200; ++t) {
        Eigen::VectorXd a = sample_annulus(2, r1);
        Eigen::VectorXd b = sample_annulus(2, r2);
        CHECK(a == b);
        double n = a.norm();
        CHECK(n >= 1.0);
        CHECK(n <= 2.0);
    }
}
