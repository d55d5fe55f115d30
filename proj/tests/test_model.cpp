#include <doctest.h>

#include "bpl/model.hpp"

using namespace bpl;

namespace {
ProblemConfig small_cfg() {
    ProblemConfig cfg;
    cfg.K_trunc = 4;
    return cfg;
}
Eigen::Vector2d good_omega() { return Eigen::Vector2d(1.7183, 0.8415); }
}  // namespace

TEST_CASE("config validation names the violated constraint") {
    ProblemConfig cfg = small_cfg();
    CHECK_NOTHROW(cfg.validate());
    cfg.alpha = 2.5;
    CHECK_THROWS_WITH_AS(cfg.validate(), "config: alpha must lie in (1,2)", std::invalid_argument);
    cfg = small_cfg();
    cfg.c_small = 0.4;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_cfg();
    cfg.beta_rot = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_cfg();
    cfg.momentum = MomentumMap{{{1, 0}, {2, 0}}};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_cfg();
    nlohmann::json j = cfg.to_json();
    CHECK_THROWS_AS(ProblemConfig::from_json(j), std::invalid_argument);  // derived echoed back
    j.erase("derived");
    CHECK_NOTHROW(ProblemConfig::from_json(j));
}

TEST_CASE("dispersion multiplier hand values") {
    CHECK(multiplier_tL({1, 0}) == 1.0);
    CHECK(multiplier_tL({0, 5}) == 0.0);
    CHECK(multiplier_tL({1, 2}) == doctest::Approx(0.2));
    CHECK(multiplier_tL({-1, 0}) == -1.0);
    CHECK_THROWS_AS(multiplier_tL({0, 0}), std::invalid_argument);
}

TEST_CASE("velocity recovery is divergence free with the right multipliers") {
    auto lat = small_cfg().make_lat();
    Rng rng(4);
    TravelingField v = random_field(lat, rng);
    auto u = biot_savart(v);
    for (int i = 0; i < lat->size(); ++i) {
        auto j = lat->j(i);
        // div u = 0 mode by mode
        cplx div = cplx(0.0, double(j[0])) * u[0].a[i] + cplx(0.0, double(j[1])) * u[1].a[i];
        CHECK(std::abs(div) <= 1e-15);
    }
    // hand value at j = (2,1)
    TravelingField e(lat);
    std::vector<int> l{-2, -1};
    int i = lat->index_of(l);
    REQUIRE(lat->j(i)[0] == 2);
    e.a[i] = 1.0;
    e.a[lat->neg(i)] = 1.0;
    auto ue = biot_savart(e);
    CHECK(ue[0].a[i] == cplx(0.0, -0.2));
    CHECK(ue[1].a[i] == cplx(0.0, 0.4));
    CHECK_NOTHROW(ue[0].check("u1"));
    CHECK_NOTHROW(ue[1].check("u2"));
}

TEST_CASE("transport nonlinearity vanishes on a single carrier") {
    auto lat = small_cfg().make_lat();
    TravelingField v(lat);
    std::vector<int> l{2, 1};
    int i = lat->index_of(l);
    v.a[i] = cplx(0.3, 0.1);
    v.a[lat->neg(i)] = std::conj(v.a[i]);
    // B[v] is orthogonal to grad v for a single mode pair
    TravelingField n = nonlinearity(v, v);
    CHECK(n.a.cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("product and operator forms of multiplication and advection agree") {
    auto lat = small_cfg().make_lat();
    Rng rng(8);
    TravelingField g = random_field(lat, rng);
    TravelingField f = random_field(lat, rng);
    auto M = multiplication_operator(g);
    TravelingField lhs = M.apply(f);
    TravelingField rhs = multiply(g, f);
    CHECK((lhs.a - rhs.a).cwiseAbs().maxCoeff() <= 1e-13 * std::max(1.0, rhs.a.cwiseAbs().maxCoeff()));

    TravelingField v1 = random_field(lat, rng);
    auto adv = advection_operator(biot_savart(v1));
    TravelingField av = adv.apply(f);
    TravelingField nv = nonlinearity(v1, f);
    for (int i = 0; i < lat->size(); ++i) {
        if (!lat->active(i)) continue;  // nonlinearity() zeroes the average modes
        CHECK(std::abs(av.a[i] - nv.a[i]) <= 1e-13 * std::max(1.0, std::abs(nv.a[i])));
    }
}

TEST_CASE("the quadratic expansion of F is exact on the truncation") {
    ProblemConfig cfg = small_cfg();
    auto lat = cfg.make_lat();
    TravelingField f = cfg.make_forcing(lat);
    Rng rng(11);
    TravelingField w = random_field(lat, rng, 0.9);
    TravelingField h = random_field(lat, rng, 0.9);
    w.a *= 1e-3;
    h.a *= 1e-3;
    Eigen::VectorXd omega = good_omega();

    LatticeOperator L = linearized_L(w, cfg, omega);
    TravelingField lhs = functional_F(w + h, cfg, omega, f) - functional_F(w, cfg, omega, f) -
                         L.apply(h);
    TravelingField rhs(lat);
    rhs.a = std::pow(cfg.lambda, cfg.theta()) * nonlinearity(h, h).a;
    // the difference cancels terms of size ||F||, so round-off scales with F
    double scale = std::max(functional_F(w, cfg, omega, f).a.cwiseAbs().maxCoeff(), 1.0);
    CHECK((lhs.a - rhs.a).cwiseAbs().maxCoeff() <= 1e-12 * scale);
}

TEST_CASE("finite differences confirm the linearization") {
    ProblemConfig cfg = small_cfg();
    auto lat = cfg.make_lat();
    TravelingField f = cfg.make_forcing(lat);
    Rng rng(12);
    TravelingField w = random_field(lat, rng, 0.9);
    TravelingField h = random_field(lat, rng, 0.9);
    w.a *= 1e-2;
    h.a *= 1e-2;
    Eigen::VectorXd omega = good_omega();
    LatticeOperator L = linearized_L(w, cfg, omega);

    const double t = 1e-6;
    TravelingField hp = h, hm = h;
    hp.a *= t;
    hm.a *= -t;
    TravelingField fd = functional_F(w + hp, cfg, omega, f) - functional_F(w + hm, cfg, omega, f);
    fd.a /= 2.0 * t;
    TravelingField Lh = L.apply(h);
    double scale = std::max(Lh.a.cwiseAbs().maxCoeff(), 1e-300);
    CHECK((fd.a - Lh.a).cwiseAbs().maxCoeff() <= 1e-7 * scale);
}

TEST_CASE("linearization at an odd state is real and reversible") {
    ProblemConfig cfg = small_cfg();
    auto lat = cfg.make_lat();
    Rng rng(15);
    TravelingField w = random_field(lat, rng, 0.9, Parity::Odd);
    LatticeOperator L = linearized_L(w, cfg, good_omega());
    auto flags = structure_check(L, 1e-10);
    CHECK(flags.real);
    CHECK(flags.reversible);
}

TEST_CASE("forcing construction symmetrizes and rejects bad modes") {
    auto lat = small_cfg().make_lat();
    TravelingField f = build_forcing(lat, {{{1, 0}, 2.0}}, true);
    std::vector<int> l{1, 0};
    int i = lat->index_of(l);
    CHECK(f.a[i] == cplx(1.0, 0.0));
    CHECK(f.a[lat->neg(i)] == cplx(1.0, 0.0));
    CHECK(parity(f) == Parity::Even);

    TravelingField fo = build_forcing(lat, {{{0, 1}, 1.0}}, false);
    CHECK(parity(fo) == Parity::Odd);

    CHECK_THROWS_AS(build_forcing(lat, {{{0, 0}, 1.0}}, true), std::invalid_argument);
    CHECK_THROWS_AS(build_forcing(lat, {{{9, 0}, 1.0}}, true), std::invalid_argument);
}

TEST_CASE("divisor table matches a hand evaluation") {
    ProblemConfig cfg = small_cfg();
    cfg.lambda = 100.0;
    auto lat = cfg.make_lat();
    Eigen::Vector2d omega(1.3, 0.4142);
    Eigen::VectorXd d = linear_divisors(lat, cfg, omega);
    std::vector<int> l{1, 0};
    int i = lat->index_of(l);
    // j = (-1, 0), tL = -1: d = 100*1.3 - 1
    CHECK(d[i] == doctest::Approx(129.0).epsilon(1e-14));
    std::vector<int> l2{0, 0};
    CHECK(d[lat->index_of(l2)] == 0.0);
}
