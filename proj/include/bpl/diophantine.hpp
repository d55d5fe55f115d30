#pragma once

// Non-resonance predicates on truncated mode ranges and Monte-Carlo
// estimation of excluded frequency measure.

#include <functional>
#include <map>

#include "bpl/model.hpp"

namespace bpl {

// |om.l| >= gamma <l>^{-tau} for all 0 < |l|_inf <= Lmax.
// gamma = 0 passes vacuously (degenerate, flagged by the caller).
bool check_dc(const Eigen::VectorXd& omega, double gamma, double tau, int Lmax);

// |lambda om.l + beta tL(j)| >= lambda gamma <l>^{-tau} on the traveling
// lattice modes (j = -pi^T(l)), all 0 < |l|_inf <= Lmax with pi^T(l) != 0
bool check_omega_gamma(const Eigen::VectorXd& omega, const ProblemConfig& cfg, int Lmax,
                       double gamma_override = -1.0);

// mu maps lattice mode index -> complex eigenvalue (indexed over the active
// traveling lattice; with the default momentum map this is a j-table)
using MuTable = Eigen::VectorXcd;

// |i lambda om.(l_r-l_c) + mu(r) - mu(c)| >= lambda gamma' / (<l_r-l_c>^tau <j_c>^tau)
// over all pairs with 0 < |l_r-l_c|_inf <= Lmax
bool check_melnikov2(const Eigen::VectorXd& omega, const LatPtr& lat, const MuTable& mu,
                     const ProblemConfig& cfg, int Lmax, double gamma_prime);

// |i lambda om.l + mu(l)| >= 2 lambda gamma' <l>^{-tau} over active modes with |l|_inf <= Lmax
bool check_melnikov1(const Eigen::VectorXd& omega, const LatPtr& lat, const MuTable& mu,
                     const ProblemConfig& cfg, int Lmax, double gamma_prime);

struct MeasureEstimate {
    double excluded_fraction = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;
    std::size_t n_samples = 0;
    std::size_t n_excluded = 0;
};

// uniform rejection sampling of the annulus 1 <= |omega| <= 2 in R^nu;
// predicate returns true when omega is admissible
MeasureEstimate measure_fraction(const std::function<bool(const Eigen::VectorXd&)>& admissible,
                                 int nu, std::size_t n_samples, std::uint64_t seed);

// a uniformly distributed point of the annulus (shared by samplers elsewhere)
Eigen::VectorXd sample_annulus(int nu, Rng& rng);

}  // namespace bpl
