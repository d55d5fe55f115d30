#pragma once

// Algebra of phi-dependent linear operators restricted to the zero-average
// traveling-wave subspace.  The dense matrix entry A(r,c) is the ambient
// coefficient R(l_r - l_c)_{j(l_r)}^{j(l_c)}; rows/columns with pi^T(l)=0
// are identically zero.

#include <Eigen/Dense>
#include <json.hpp>

#include "bpl/lattice.hpp"

namespace bpl {

struct LatticeOperator {
    LatPtr lat;
    Eigen::MatrixXcd m;
    // whether the ambient operator this restriction came from is known to be
    // momentum preserving (true for everything the pipeline builds itself)
    bool is_restriction_of_mp = true;

    LatticeOperator() = default;
    explicit LatticeOperator(LatPtr l)
        : lat(std::move(l)), m(Eigen::MatrixXcd::Zero(lat->size(), lat->size())) {}
    LatticeOperator(LatPtr l, Eigen::MatrixXcd mat) : lat(std::move(l)), m(std::move(mat)) {}

    static LatticeOperator identity(const LatPtr& lat);
    // diagonal operator from a per-mode multiplier table (zero on inactive modes)
    static LatticeOperator diagonal(const LatPtr& lat, const Eigen::VectorXcd& d);

    // zero out rows/cols of inactive modes (the Pi_0^perp sandwich)
    void restrict_zero_average();
    bool zero_rows_ok(double tol = 0.0) const;
    void check(const char* who) const;

    TravelingField apply(const TravelingField& f) const;

    friend LatticeOperator operator+(LatticeOperator a, const LatticeOperator& b) { a.m += b.m; return a; }
    friend LatticeOperator operator-(LatticeOperator a, const LatticeOperator& b) { a.m -= b.m; return a; }
    friend LatticeOperator operator*(cplx s, LatticeOperator a) { a.m *= s; return a; }
};

struct DecayIndex {
    double m = 0.0;  // order
    double s = 0.0;  // regularity
};

// |R|_{m,s} = sup_{c} ( sum_r <l_r-l_c, j_r-j_c>^{2s} |A(r,c)|^2 )^{1/2} <j_c>^{-m}
double decay_norm(const LatticeOperator& A, DecayIndex idx);

LatticeOperator compose(const LatticeOperator& A, const LatticeOperator& B);

// truncated exponential series with certified tail; throws "smallness violated"
// when the bound cannot certify convergence within 60 terms
LatticeOperator exp_op(const LatticeOperator& X, double tol = 1e-14);

LatticeOperator diag_part(const LatticeOperator& A);
bool phi_average_is_diagonal(const LatticeOperator& A, double tol = 1e-12);

struct StructureFlags {
    bool real = false;
    bool reversible = false;
    bool reversibility_preserving = false;
};

// Matrix identities under (l,l') -> (-l,-l') (which forces j -> -j):
//   real:            A(r,c) =  conj(A(-r,-c))
//   reversible:      A(r,c) = -A(-r,-c)
//   rev. preserving: A(r,c) =  A(-r,-c)
StructureFlags structure_check(const LatticeOperator& A, double tol = 1e-10);

// operator smoothing projector: keep entries with |l_r-l_c|<=N and |j_r-j_c|<=N
std::pair<LatticeOperator, LatticeOperator> op_project(const LatticeOperator& A, double N);

nlohmann::json op_to_json(const LatticeOperator& A);
LatticeOperator op_from_json(const nlohmann::json& j);

// test helper: random operator with entry decay e^{-decay*<l_r-l_c,...>},
// supported on active modes, momentum-preserving by construction
LatticeOperator random_operator(const LatPtr& lat, Rng& rng, double decay = 0.8, bool make_real = true);

}  // namespace bpl
