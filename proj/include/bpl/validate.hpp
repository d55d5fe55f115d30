#pragma once

// Independent pseudo-spectral check: march the unrescaled vorticity equation
//   dv/dt + beta tL v + B[v].grad v = lambda^alpha f(lambda omega t, x)
// on a 2/3-dealiased grid with an integrating-factor RK4 (the dispersion is
// propagated exactly) and compare against t -> lambda^theta w(lambda omega t, x).

#include "bpl/model.hpp"

namespace bpl {

struct EvolutionResult {
    std::vector<double> times;
    std::vector<double> defect_rel;  // grid-spectral relative error per snapshot
    double max_defect = 0.0;
    int steps = 0;
    double dt = 0.0;
};

// t_final <= 0 selects one 2pi/lambda horizon; phase_step bounds dt by
// phase_step / (2 lambda |omega|_1) to keep the fastest resolved carrier
// below round-off-dominated RK4 error
EvolutionResult evolve_and_compare(const TravelingField& w, const ProblemConfig& cfg,
                                   const Eigen::VectorXd& omega, const TravelingField& forcing,
                                   double t_final = 0.0, int n_snapshots = 8,
                                   double phase_step = 0.002);

struct StabilityResult {
    double max_re_mu = 0.0;     // largest real part over the diagonalized spectrum
    double growth = 0.0;        // sup_t ||h(t)||_2 / ||h(0)||_2
    double horizon = 0.0;
    int steps = 0;
};

// linearized flow around the traveling solution with a random zero-average
// real initial perturbation; mu_inf supplies the spectral margin
StabilityResult stability_probe(const TravelingField& w, const ProblemConfig& cfg,
                                const Eigen::VectorXd& omega, const Eigen::VectorXcd& mu_inf,
                                std::uint64_t seed, double t_final = 0.0,
                                double phase_step = 0.05);

}  // namespace bpl
