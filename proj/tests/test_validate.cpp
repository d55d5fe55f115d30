#include <doctest.h>

#include "bpl/nashmoser.hpp"
#include "bpl/validate.hpp"

using namespace bpl;

namespace {
ProblemConfig small_cfg() {
    ProblemConfig cfg;
    cfg.K_trunc = 4;
    return cfg;
}
Eigen::Vector2d good_omega() { return Eigen::Vector2d(1.7183, 0.8415); }

NewtonRun solved(const ProblemConfig& cfg, const Eigen::VectorXd& omega,
                 const TravelingField& f) {
    NewtonRun run = nash_moser_solve(cfg, omega, f);
    REQUIRE(run.outcome == NewtonOutcome::converged);
    return run;
}
}  // namespace

TEST_CASE("time stepping shows fourth order convergence in the step size") {
    ProblemConfig cfg = small_cfg();
    Eigen::VectorXd omega = good_omega();
    auto lat = cfg.make_lat();
    TravelingField f = cfg.make_forcing(lat);
    NewtonRun run = solved(cfg, omega, f);

    // coarse steps where the integrator error dominates the model error
    EvolutionResult coarse = evolve_and_compare(run.w, cfg, omega, f, 0.0, 4, 0.4);
    EvolutionResult fine = evolve_and_compare(run.w, cfg, omega, f, 0.0, 4, 0.2);
    CHECK(fine.max_defect > 0.0);
    CHECK(coarse.max_defect / fine.max_defect >= 8.0);
}

TEST_CASE("the converged wave tracks the pseudo-spectral evolution") {
    ProblemConfig cfg = small_cfg();
    Eigen::VectorXd omega = good_omega();
    auto lat = cfg.make_lat();
    TravelingField f = cfg.make_forcing(lat);
    NewtonRun run = solved(cfg, omega, f);

    EvolutionResult ev = evolve_and_compare(run.w, cfg, omega, f);
    CHECK(ev.steps > 0);
    CHECK(ev.dt > 0.0);
    REQUIRE(!ev.defect_rel.empty());
    CHECK(ev.times.size() == ev.defect_rel.size());
    CHECK(ev.max_defect <= 1e-6);
}

TEST_CASE("an unconverged state leaves a visible defect") {
    ProblemConfig cfg = small_cfg();
    Eigen::VectorXd omega = good_omega();
    auto lat = cfg.make_lat();
    TravelingField f = cfg.make_forcing(lat);
    NewtonRun run = solved(cfg, omega, f);

    TravelingField spoiled = run.w;
    spoiled.a *= 1.02;  // 2 percent amplitude error
    EvolutionResult ev = evolve_and_compare(spoiled, cfg, omega, f);
    CHECK(ev.max_defect >= 1e-3);
}

TEST_CASE("linearized flow around the solution stays bounded") {
    ProblemConfig cfg = small_cfg();
    Eigen::VectorXd omega = good_omega();
    auto lat = cfg.make_lat();
    TravelingField f = cfg.make_forcing(lat);
    NewtonRun run = solved(cfg, omega, f);

    Straightening st = straighten_transport(run.w, cfg, omega);
    ReductionState rs = conjugate_to_L1(st, run.w, cfg, omega);
    lower_order(rs, cfg);
    kam_reduce(rs, cfg);

    StabilityResult sr = stability_probe(run.w, cfg, omega, rs.mu, 11);
    CHECK(sr.steps > 0);
    CHECK(sr.horizon > 0.0);
    // spectral margin: the diagonalized eigenvalues sit on the imaginary axis
    CHECK(sr.max_re_mu <= 1e-8 * std::pow(cfg.lambda, cfg.theta()));
    // no exponential blow-up over the probe horizon
    CHECK(sr.growth >= 1.0 - 1e-9);
    CHECK(sr.growth <= 10.0);
}
