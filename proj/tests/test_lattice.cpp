#include <doctest.h>

#include "bpl/lattice.hpp"

using namespace bpl;

namespace {
LatPtr small_lat(int K = 4) { return make_lattice(MomentumMap::standard(), K); }
}

TEST_CASE("momentum map locks spatial modes and rejects rank deficiency") {
    auto lat = small_lat();
    for (int i = 0; i < lat->size(); ++i) {
        auto pt = lat->mom().pi_t(lat->ell(i));
        CHECK(lat->j(i)[0] == -pt[0]);
        CHECK(lat->j(i)[1] == -pt[1]);
    }
    MomentumMap bad{{{1, 0}, {2, 0}}};
    CHECK_THROWS(make_lattice(bad, 2));
}

TEST_CASE("sobolev norm on hand-evaluated fields") {
    auto lat = small_lat();
    TravelingField f(lat);
    CHECK(sobolev_norm(f, 3.0) == 0.0);  // zero field, empty sum

    // unit mode pair at l = (1,0), j = (-1,0): <l,j> = 1, norm sqrt(2) at any s
    std::vector<int> l{1, 0};
    int i = lat->index_of(l);
    f.a[i] = 1.0;
    f.a[lat->neg(i)] = 1.0;
    CHECK(sobolev_norm(f, 0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(sobolev_norm(f, 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

    // mode with <l,j> = 3 picks up the weight 3^s
    TravelingField g(lat);
    std::vector<int> l3{3, 0};
    int i3 = lat->index_of(l3);
    g.a[i3] = 1.0;
    g.a[lat->neg(i3)] = 1.0;
    CHECK(sobolev_norm(g, 2.0) == doctest::Approx(std::sqrt(2.0) * 9.0).epsilon(1e-14));
}

TEST_CASE("projectors split exactly and obey the smoothing bounds") {
    auto lat = small_lat();
    Rng rng(11);
    TravelingField f = random_field(lat, rng);

    auto lo = project_low(f, 3.0);
    auto hi = project_high(f, 3.0);
    CHECK((lo.a + hi.a - f.a).cwiseAbs().maxCoeff() == 0.0);
    CHECK(project_low(f, double(lat->K())).a.isApprox(f.a));

    TravelingField single(lat);
    std::vector<int> l{4, 1};
    int i = lat->index_of(l);
    single.a[i] = 1.0;
    single.a[lat->neg(i)] = 1.0;
    CHECK(sobolev_norm(project_low(single, 3.0), 0.0) == 0.0);

    const double s = 7.0;
    for (double K : {2.0, 3.0, 4.0}) {
        for (double a : {1.0, 2.0}) {
            CHECK(sobolev_norm(project_high(f, K), s) <=
                  std::pow(K, -a) * sobolev_norm(f, s + a) * (1.0 + 1e-12));
            CHECK(sobolev_norm(project_low(f, K), s + a) <=
                  std::pow(K, a) * sobolev_norm(f, s) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("parity classification") {
    auto lat = small_lat();
    std::vector<int> l{1, 2};
    int i = lat->index_of(l);
    int ni = lat->neg(i);

    TravelingField even(lat);
    even.a[i] = even.a[ni] = 1.0;
    CHECK(parity(even) == Parity::Even);

    TravelingField odd(lat);
    odd.a[i] = cplx(0.0, 1.0);
    odd.a[ni] = cplx(0.0, -1.0);
    CHECK(parity(odd) == Parity::Odd);

    TravelingField mixed = even;
    std::vector<int> l2{2, 1};
    int k = lat->index_of(l2);
    mixed.a[k] = cplx(0.0, 0.5);
    mixed.a[lat->neg(k)] = cplx(0.0, -0.5);
    CHECK(parity(mixed) == Parity::Neither);
}

TEST_CASE("evaluate: cosine mode and the traveling translation identity") {
    auto lat = small_lat();
    TravelingField zero(lat);
    CHECK(evaluate(zero, {0.3, -0.7}, {1.0, 2.0}) == 0.0);

    TravelingField f(lat);
    std::vector<int> l{2, -1};
    int i = lat->index_of(l);
    f.a[i] = 0.5;
    f.a[lat->neg(i)] = 0.5;
    auto j = lat->j(i);
    std::vector<double> phi{0.4, 1.1};
    std::array<double, 2> x{0.2, -0.6};
    double expect = std::cos(2 * phi[0] - 1 * phi[1] + j[0] * x[0] + j[1] * x[1]);
    CHECK(evaluate(f, phi, x) == doctest::Approx(expect).epsilon(1e-14));

    // v(phi - pi(s), x) = v(phi, x + s) on random points
    Rng rng(5);
    TravelingField g = random_field(lat, rng);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> p{rng.uniform(0, 6.28), rng.uniform(0, 6.28)};
        std::array<double, 2> xx{rng.uniform(0, 6.28), rng.uniform(0, 6.28)};
        std::array<double, 2> sft{rng.uniform(0, 6.28), rng.uniform(0, 6.28)};
        std::vector<double> pshift = p;
        for (int k = 0; k < lat->nu(); ++k)
            pshift[k] -= lat->mom().jbar[k][0] * sft[0] + lat->mom().jbar[k][1] * sft[1];
        std::array<double, 2> xshift{xx[0] + sft[0], xx[1] + sft[1]};
        CHECK(evaluate(g, pshift, xx) == doctest::Approx(evaluate(g, p, xshift)).epsilon(1e-10));
    }
}

TEST_CASE("lipschitz weighted norm on the finite grid") {
    auto lat = small_lat();
    Rng rng(3);
    TravelingField f = random_field(lat, rng);

    std::vector<Eigen::VectorXd> base{Eigen::Vector2d(1.3, 0.6)};
    ParamGrid grid = ParamGrid::axis_pairs(base, 1e-3, 0.5);
    std::vector<TravelingField> fields(grid.samples.size(), f);
    // omega-independent field: lip part vanishes
    CHECK(lip_gamma_norm(fields, grid, 7.0) == doctest::Approx(sobolev_norm(f, 7.0)));

    // u(omega) = omega_1 * e with unit s-1 norm single mode: quotient exactly 1
    TravelingField e(lat);
    std::vector<int> l{1, 0};
    int i = lat->index_of(l);
    e.a[i] = e.a[lat->neg(i)] = 1.0 / std::sqrt(2.0);
    std::vector<TravelingField> lin;
    for (const auto& w : grid.samples) lin.push_back(TravelingField(lat, w[0] * e.a));
    double expect_sup = 0.0;
    for (const auto& w : grid.samples) expect_sup = std::max(expect_sup, std::abs(w[0]));
    double got = lip_gamma_norm(lin, grid, 7.0);
    CHECK(got == doctest::Approx(expect_sup + grid.gamma * 1.0).epsilon(1e-10));

    // gamma = 0 reduces to the sup norm
    ParamGrid g0 = grid;
    g0.gamma = 0.0;
    CHECK(lip_gamma_norm(lin, g0, 7.0) == doctest::Approx(expect_sup).epsilon(1e-12));

    // degenerate pair rejected
    ParamGrid badgrid = grid;
    badgrid.samples[1] = badgrid.samples[0];
    CHECK_THROWS_WITH_AS(lip_gamma_norm(lin, badgrid, 7.0), "degenerate Lipschitz pair",
                         std::runtime_error);
}

TEST_CASE("json round trip and invariant rejection") {
    auto lat = small_lat();
    Rng rng(9);
    TravelingField f = random_field(lat, rng);
    auto j = field_to_json(f);
    TravelingField g = field_from_json(j);
    CHECK((f.a - g.a).cwiseAbs().maxCoeff() == 0.0);

    // reality violation rejected by the loader
    nlohmann::json bad = j;
    bad["coeffs"] = nlohmann::json::array();
    bad["coeffs"].push_back({{1, 0}, 1.0, 0.5});  // no conjugate partner
    CHECK_THROWS(field_from_json(bad));

    // zero-average violation rejected
    nlohmann::json bad2 = j;
    bad2["coeffs"] = nlohmann::json::array();
    bad2["coeffs"].push_back({{0, 0}, 1.0, 0.0});
    CHECK_THROWS(field_from_json(bad2));
}

TEST_CASE("random fields satisfy the standing invariants") {
    auto lat = small_lat();
    Rng rng(21);
    for (int t = 0; t < 10; ++t) {
        TravelingField f = random_field(lat, rng);
        CHECK_NOTHROW(f.check("random_field"));
        TravelingField fe = random_field(lat, rng, 0.6, Parity::Even);
        CHECK(parity(fe) == Parity::Even);
        CHECK_NOTHROW(fe.check("random_field even"));
        TravelingField fo = random_field(lat, rng, 0.6, Parity::Odd);
        CHECK(parity(fo) == Parity::Odd);
        CHECK_NOTHROW(fo.check("random_field odd"));
    }
}
