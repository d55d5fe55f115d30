#pragma once

// Truncated Fourier representation of quasi-periodic traveling waves on
// T^nu x T^2.  A field is indexed by l in Z^nu with |l|_inf <= K; the
// spatial mode is locked to j(l) = -pi^T(l) by the traveling constraint,
// so the whole object lives on a (2K+1)^nu lattice.

#include <array>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "bpl/util.hpp"

namespace bpl {

using cplx = std::complex<double>;

struct MomentumMap {
    // nu integer wave vectors jbar_1..jbar_nu in Z^2
    std::vector<std::array<int, 2>> jbar;

    int nu() const { return int(jbar.size()); }

    // pi^T : Z^nu -> Z^2, l -> sum_k l_k jbar_k  (exact integer arithmetic)
    std::array<int, 2> pi_t(const int* ell) const {
        std::array<int, 2> out{0, 0};
        for (int k = 0; k < nu(); ++k) {
            out[0] += ell[k] * jbar[k][0];
            out[1] += ell[k] * jbar[k][1];
        }
        return out;
    }

    // pi(x) has k-th component jbar_k . x
    // (used by evaluate() and by the composition operators)
    bool rank_two() const {
        for (std::size_t a = 0; a + 1 < jbar.size(); ++a)
            for (std::size_t b = a + 1; b < jbar.size(); ++b)
                if (jbar[a][0] * jbar[b][1] - jbar[a][1] * jbar[b][0] != 0) return true;
        return false;
    }

    static MomentumMap standard() { return MomentumMap{{{1, 0}, {0, 1}}}; }
};

// Shared immutable lattice geometry.
class Lattice {
public:
    Lattice(MomentumMap mom, int K);

    const MomentumMap& mom() const { return mom_; }
    int K() const { return K_; }
    int nu() const { return mom_.nu(); }
    int size() const { return n_; }  // (2K+1)^nu

    const int* ell(int idx) const { return ells_.data() + std::size_t(idx) * nu(); }
    std::array<int, 2> j(int idx) const { return jtab_[idx]; }
    int neg(int idx) const { return neg_[idx]; }
    bool active(int idx) const { return active_[idx] != 0; }  // pi^T(l) != 0
    int n_active() const { return n_active_; }

    // flat index of l, or -1 when outside the box
    int index_of(const int* ell) const;
    int index_of(const std::vector<int>& ell) const { return index_of(ell.data()); }

    static int linf(const int* v, int n) {
        int m = 0;
        for (int k = 0; k < n; ++k) m = std::max(m, std::abs(v[k]));
        return m;
    }

    int ell_inf(int idx) const { return ell_inf_[idx]; }

    // <l, j> = max{1, |l|_inf, |j|_inf} for the mode itself
    double bracket_mode(int idx) const { return bracket_[idx]; }

    // <l_r - l_c, j_r - j_c> used by decay norms
    double bracket_diff(int r, int c) const {
        int m = 0;
        const int* lr = ell(r);
        const int* lc = ell(c);
        for (int k = 0; k < nu(); ++k) m = std::max(m, std::abs(lr[k] - lc[k]));
        m = std::max(m, std::abs(jtab_[r][0] - jtab_[c][0]));
        m = std::max(m, std::abs(jtab_[r][1] - jtab_[c][1]));
        return double(std::max(1, m));
    }

    // index of l_r - l_c + l_base style arithmetic: returns -1 if out of box
    int sum_index(int a, int b) const;   // l_a + l_b
    int diff_index(int a, int b) const;  // l_a - l_b

private:
    MomentumMap mom_;
    int K_;
    int n_;
    int n_active_ = 0;
    std::vector<int> ells_;    // n * nu, row major
    std::vector<std::array<int, 2>> jtab_;
    std::vector<int> neg_;
    std::vector<char> active_;
    std::vector<int> ell_inf_;
    std::vector<double> bracket_;
};

using LatPtr = std::shared_ptr<const Lattice>;

LatPtr make_lattice(const MomentumMap& mom, int K);

// A quasi-periodic traveling wave, coefficients over the lattice.
// Invariants (enforced by check()): coefficients vanish on inactive modes
// (zero spatial average) and satisfy reality u(-l) = conj(u(l)).
struct TravelingField {
    LatPtr lat;
    Eigen::VectorXcd a;

    TravelingField() = default;
    explicit TravelingField(LatPtr l) : lat(std::move(l)), a(Eigen::VectorXcd::Zero(lat->size())) {}
    TravelingField(LatPtr l, Eigen::VectorXcd coeffs) : lat(std::move(l)), a(std::move(coeffs)) {}

    bool zero_average_ok(double tol = 0.0) const;
    bool reality_ok(double tol = 1e-12) const;
    // throws std::runtime_error naming the violated invariant
    void check(const char* who) const;

    TravelingField& operator+=(const TravelingField& o) { a += o.a; return *this; }
    TravelingField& operator-=(const TravelingField& o) { a -= o.a; return *this; }
    TravelingField& operator*=(double s) { a *= s; return *this; }
    friend TravelingField operator+(TravelingField x, const TravelingField& y) { x += y; return x; }
    friend TravelingField operator-(TravelingField x, const TravelingField& y) { x -= y; return x; }
    friend TravelingField operator*(double s, TravelingField x) { x *= s; return x; }
};

enum class Parity { Even, Odd, Neither };

const char* to_string(Parity p);

// || u ||_s = ( sum <l,j>^{2s} |u(l)|^2 )^{1/2}
double sobolev_norm(const TravelingField& f, double s);

// smoothing projectors: keep (resp. drop) modes with <l> <= K
TravelingField project_low(const TravelingField& f, double K);
TravelingField project_high(const TravelingField& f, double K);

Parity parity(const TravelingField& f, double tol = 1e-12);

// pointwise evaluation sum u(l) e^{i(l.phi + j(l).x)}; asserts the
// imaginary part is at round-off level and returns the real part
double evaluate(const TravelingField& f, const std::vector<double>& phi, const std::array<double, 2>& x);

// finite parameter grid for the Lipschitz-weighted norms
struct ParamGrid {
    std::vector<Eigen::VectorXd> samples;        // omega in the annulus 1 <= |omega| <= 2
    std::vector<std::pair<int, int>> pairs;      // indices into samples
    double gamma = 1.0;

    void check() const;  // annulus membership, distinct pairs
    // axis-aligned pairs around base points with spacing h
    static ParamGrid axis_pairs(const std::vector<Eigen::VectorXd>& base, double h, double gamma);
};

// sup_s over samples + gamma * max Lipschitz quotient at s-1 over pairs.
// `fields[i]` is the field at samples[i].
double lip_gamma_norm(const std::vector<TravelingField>& fields, const ParamGrid& grid, double s);

// JSON serialization: {"nu", "wave_vectors", "K_trunc", "coeffs": [[l...], re, im]}
nlohmann::json field_to_json(const TravelingField& f);
TravelingField field_from_json(const nlohmann::json& j);

// test helper: random reality-symmetric zero-average field with coefficient
// decay ~ e^{-decay*|l|}
TravelingField random_field(const LatPtr& lat, Rng& rng, double decay = 0.6, Parity force = Parity::Neither);

}  // namespace bpl
