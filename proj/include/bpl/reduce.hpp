#pragma once

// Three-stage reduction of the linearized operator L at a state w:
//   1. straighten the transport part by torus diffeomorphisms,
//   2. lower the order of the remainder by M-1 conjugations,
//   3. KAM-diagonalize what is left.
// Every conjugation is carried out exactly on the truncated lattice, so the
// bookkeeping identities hold to round-off and the smallness claims are
// measured rather than assumed.

#include <limits>
#include <optional>

#include "bpl/approx.hpp"

namespace bpl {

// thrown when a runtime small-divisor gate fails; callers translate this
// into the dedicated process exit code
struct ResonanceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// matrix of the composition operator u(theta) -> u(theta - pi(beta(theta)))
// on the traveling box, assembled column-by-column via FFT on an oversampled
// grid; throws when the aliasing guard trips
LatticeOperator composition_operator(const std::array<TravelingField, 2>& beta, int oversample = 4);

struct Straightening {
    LatPtr lat;
    // total displacement of the composed diffeomorphism x -> x + beta(phi,x)
    std::array<TravelingField, 2> beta_total;
    LatticeOperator B, B_inv;          // full matrices (identity on constants)
    Eigen::Vector2d m_final = Eigen::Vector2d::Zero();
    std::vector<double> m_history;     // |m_n| after each update
    std::vector<double> b_norms;       // max component s0-norm of b_n
    double residual_rel = 0.0;         // ||Bp^-1 T Bp - lambda om.dphi||_2 / lambda
    int iterations = 0;

    // the zero-average restrictions used by the later stages
    LatticeOperator B_perp, B_perp_inv;
};

// Iteratively remove the variable coefficient of eps*a0.grad, a0 = B[w].
// Divisors om.l + m.j are floor-checked at gamma/2 <l>^-tau.
Straightening straighten_transport(const TravelingField& w, const ProblemConfig& cfg,
                                   const Eigen::VectorXd& omega, int max_iters = 12,
                                   double btol = 1e-13);

struct ReductionState {
    LatPtr lat;
    Eigen::VectorXd omega;
    Eigen::VectorXcd d_phi;        // i lambda om.l per mode (zero on inactive)
    MuTable mu;                    // diagonal part: i beta tL(j) + corrections
    LatticeOperator E;             // current remainder, L ~ W (diag(d_phi+mu) + E) W^-1
    Eigen::MatrixXcd W, W_inv;     // accumulated conjugator (zero-average restricted)
    std::vector<double> lowering_norms;   // Frobenius norm of E after each lowering step
    std::vector<double> kam_norms;        // decay_norm(E, (-M, s0)) per KAM step
    std::vector<double> kam_ratios;       // kam_norms[n+1] / kam_norms[n]^{3/2 - 0.1}
    double min_divisor_ratio = std::numeric_limits<double>::infinity();
    int kam_steps = 0;
};

// Stage one: L1 = Bp^-1 L Bp with E = L1 - diag(d_phi) - diag(i beta tL)
ReductionState conjugate_to_L1(const Straightening& st, const TravelingField& w,
                               const ProblemConfig& cfg, const Eigen::VectorXd& omega);

// Independent assembly of the conjugated dispersion and shear blocks from
// their smoothing-operator decomposition; returns the relative Frobenius gap
// against the raw matrix conjugation.
double stage_one_explicit_gap(const Straightening& st, const TravelingField& w,
                              const ProblemConfig& cfg);

// Stage two: M-1 conjugations, each trading one power of the small parameter
// for one order of decay; divisors lambda om.(l_r - l_c), DC-floor checked.
void lower_order(ReductionState& st, const ProblemConfig& cfg);

// Stage three: quadratic iteration with block width N_n = N0^{(3/2)^n} and
// second-order divisor floors lambda gamma_n g / (<dl>^tau <j_c>^tau) where
// g is the operational gate factor.  Stops when decay_norm(E, (-M, s0)) < tol.
void kam_reduce(ReductionState& st, const ProblemConfig& cfg, int n_steps = 8, double tol = 1e-12);

enum class InverseMethod { dense_lu, reduction_chain };
const char* to_string(InverseMethod m);
InverseMethod inverse_method_from_string(const std::string& s);

struct LinearInverse {
    InverseMethod method = InverseMethod::dense_lu;
    LatPtr lat;
    double rcond = 0.0;                 // dense_lu only
    double min_divisor_ratio = 0.0;     // reduction_chain only

    TravelingField solve(const TravelingField& g) const;

    // internals
    std::vector<int> act;                            // active mode indices
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu;        // dense_lu on the active block
    Eigen::MatrixXcd W, W_inv;                       // reduction_chain conjugator
    Eigen::VectorXcd eta;                            // final diagonal, full-size
    ProblemConfig cfg;
    std::optional<ReductionState> state;             // kept for diagnostics
};

LinearInverse invert_linearized(const TravelingField& w, const ProblemConfig& cfg,
                                const Eigen::VectorXd& omega, InverseMethod method,
                                int kam_steps = 8);

// || . ||_2 (largest singular value)
double spectral_norm(const Eigen::MatrixXcd& A);

// inverse of a zero-average-restricted operator via LU on the active block
Eigen::MatrixXcd inverse_on_active(const LatticeOperator& A);

}  // namespace bpl
