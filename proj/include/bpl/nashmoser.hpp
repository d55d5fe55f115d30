#pragma once

// Newton iteration on the truncated functional, with the optional frequency
// cutoff schedule and the runtime non-resonance gates.  The quadratic defect
// identity F(w+h) - F(w) - Lh = lambda^theta N(h,h) holds exactly on the
// truncation, so plain Newton and the cutoff schedule can be compared
// against each other.

#include "bpl/reduce.hpp"

namespace bpl {

enum class NewtonOutcome { converged, stalled, resonance_exit, max_iter };
const char* to_string(NewtonOutcome o);

struct NewtonOptions {
    InverseMethod method = InverseMethod::dense_lu;
    bool use_projectors = false;  // frequency cutoff N_n = max(2, N0^{(3/2)^n}), N0 = 1/gamma
    int max_iter = 12;
    double tol_factor = 1e-9;     // stop when ||F(w)||_{s0} < tol_factor * lambda^{1-c}
    int kam_steps = 8;
};

struct NewtonRun {
    TravelingField w;
    std::vector<double> residuals;   // ||F(w_n)||_{s0}, includes the final state
    std::vector<double> step_norms;  // ||h_n||_{s0}
    std::vector<double> rconds;      // dense_lu reciprocal condition numbers
    NewtonOutcome outcome = NewtonOutcome::max_iter;
    std::string message;
    int iterations = 0;
    double threshold = 0.0;
};

NewtonRun nash_moser_solve(const ProblemConfig& cfg, const Eigen::VectorXd& omega,
                           const TravelingField& forcing, const NewtonOptions& opt = {});

// advisory analytic smallness thresholds; returns human-readable warnings
// (the desk-scale runs violate them while the iterations still contract)
std::vector<std::string> smallness_report(const ProblemConfig& cfg);

struct SweepResult {
    std::vector<double> lambdas;      // one entry per converged run
    std::vector<double> amplitudes;   // lambda^theta ||w||_{s0}
    std::vector<double> residuals;
    std::vector<double> gammas;
    std::vector<double> attrition;    // per lambda: rejected fraction while sampling omega
    std::vector<int> failures;        // per lambda: non-converged runs
    LineFit amp_fit;                  // log amplitude vs log lambda
};

SweepResult theorem_sweep(const ProblemConfig& cfg_template, const std::vector<double>& lambdas,
                          int n_omega, std::uint64_t seed, const NewtonOptions& opt = {});

}  // namespace bpl
