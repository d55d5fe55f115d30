#pragma once

// Concrete objects of the forced beta-plane problem: dispersion multiplier,
// Biot-Savart law, transport nonlinearity, the rescaled functional F and its
// linearization at a state w.

#include <optional>

#include "bpl/lattice.hpp"
#include "bpl/opalg.hpp"

namespace bpl {

struct ForcingMode {
    std::vector<int> ell;
    double amplitude = 1.0;
};

struct ProblemConfig {
    // primary scalars
    double lambda = 1e3;
    double beta_rot = 1.0;
    double alpha = 1.5;
    double c_small = 0.05;
    double tau = 6.0;  // nu + 4 at the default nu = 2
    int nu = 2;
    int K_trunc = 8;
    double s0 = 7.0;
    int N_approx = 2;
    MomentumMap momentum = MomentumMap::standard();

    // reduction / iteration knobs
    int M_cap = 6;
    double sigma_bar = 10.0;      // proxy for the non-explicit regularity shift
    double N0_transport = 2.0;    // N_n = N0^{(3/2)^n} schedules
    double N0_kam = 2.0;
    double melnikov_gate_factor = 1e-3;  // operational gamma scaling for runtime gates
    double delta_smallness = 1.0;        // analytic smallness thresholds are advisory
    double cond_ceiling = 1e12;          // dense_lu gate
    bool reversible = false;             // even forcing / odd solution mode

    std::vector<ForcingMode> forcing_modes;  // empty => default forcing
    bool forcing_even = true;

    // derived quantities (never user-supplied)
    double theta() const { return alpha - 1.0 + c_small; }
    double gamma() const { return std::pow(lambda, -c_small); }
    double eps() const { return std::pow(lambda, theta() - 1.0); }
    int M() const;  // order-lowering depth: max{2tau, (1-c)/(2(1-c)-alpha)}+1, capped at M_cap
    double eps_M() const { return std::pow(lambda, double(M()) * (theta() - 1.0) + 1.0); }

    void validate() const;  // throws std::invalid_argument naming field + constraint

    LatPtr make_lat() const { return make_lattice(momentum, K_trunc); }
    TravelingField make_forcing(const LatPtr& lat) const;

    nlohmann::json to_json() const;           // config echo incl. derived values
    static ProblemConfig from_json(const nlohmann::json& j);
};

// dispersion multiplier symbol j1/|j|^2 (the operator acts as i*tL(j))
double multiplier_tL(const std::array<int, 2>& j);

// velocity from vorticity: u = grad^perp (-Delta)^{-1} v, componentwise
// multiplier i(-j2, j1)/|j|^2
std::array<TravelingField, 2> biot_savart(const TravelingField& v);

// x-derivative d/dx_axis (multiplier i*j_axis) and phi-derivative (i*l_k)
TravelingField x_deriv(const TravelingField& f, int axis);
TravelingField phi_deriv(const TravelingField& f, int k);

// exact lattice product (convolution truncated back to the box)
TravelingField multiply(const TravelingField& f, const TravelingField& g);

// N(v1, v2) = B[v1] . grad v2
TravelingField nonlinearity(const TravelingField& v1, const TravelingField& v2);

// F(w) = lambda om.dphi w + beta tL w + lambda^theta N(w,w) - lambda^{alpha-theta} f
TravelingField functional_F(const TravelingField& w, const ProblemConfig& cfg,
                            const Eigen::VectorXd& omega, const TravelingField& f);

// per-mode divisor d(l) = lambda om.l + beta tL(j(l)) (zero on inactive modes)
Eigen::VectorXd linear_divisors(const LatPtr& lat, const ProblemConfig& cfg, const Eigen::VectorXd& omega);

// multiplication operator by a traveling field (convolution matrix)
LatticeOperator multiplication_operator(const TravelingField& g);

// transport-style operator sum_k coeff_k(phi,x) d/dx_k as a matrix
LatticeOperator advection_operator(const std::array<TravelingField, 2>& coeff);

// L = lambda om.dphi + beta tL + lambda^theta (a0.grad + E0),
// a0 = B[w], E0[h] = grad w . B[h]
LatticeOperator linearized_L(const TravelingField& w, const ProblemConfig& cfg,
                             const Eigen::VectorXd& omega);

// forcing construction: prescribed modes, symmetrized for reality and
// (optionally) evenness; rejects modes with pi^T(l) = 0
TravelingField build_forcing(const LatPtr& lat, const std::vector<ForcingMode>& spec, bool even);

}  // namespace bpl
