#include "bpl/opalg.hpp"

#include <cmath>
#include <stdexcept>

namespace bpl {

LatticeOperator LatticeOperator::identity(const LatPtr& lat) {
    LatticeOperator A(lat);
    for (int i = 0; i < lat->size(); ++i)
        if (lat->active(i)) A.m(i, i) = 1.0;
    return A;
}

LatticeOperator LatticeOperator::diagonal(const LatPtr& lat, const Eigen::VectorXcd& d) {
    if (d.size() != lat->size()) throw std::invalid_argument("diagonal: size mismatch");
    LatticeOperator A(lat);
    for (int i = 0; i < lat->size(); ++i)
        if (lat->active(i)) A.m(i, i) = d[i];
    return A;
}

void LatticeOperator::restrict_zero_average() {
    for (int i = 0; i < lat->size(); ++i) {
        if (lat->active(i)) continue;
        m.row(i).setZero();
        m.col(i).setZero();
    }
}

bool LatticeOperator::zero_rows_ok(double tol) const {
    for (int i = 0; i < lat->size(); ++i) {
        if (lat->active(i)) continue;
        if (m.row(i).cwiseAbs().maxCoeff() > tol || m.col(i).cwiseAbs().maxCoeff() > tol) return false;
    }
    return true;
}

void LatticeOperator::check(const char* who) const {
    if (!lat) throw std::runtime_error(std::string(who) + ": operator has no lattice");
    if (m.rows() != lat->size() || m.cols() != lat->size())
        throw std::runtime_error(std::string(who) + ": matrix size mismatch");
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (!zero_rows_ok(1e-13 * scale))
        throw std::runtime_error(std::string(who) + ": zero-average rows/cols invariant violated");
}

TravelingField LatticeOperator::apply(const TravelingField& f) const {
    if (f.lat.get() != lat.get() && f.lat->size() != lat->size())
        throw std::invalid_argument("apply: lattice mismatch");
    return TravelingField(f.lat, m * f.a);
}

double decay_norm(const LatticeOperator& A, DecayIndex idx) {
    const auto& lat = *A.lat;
    double best = 0.0;
    for (int c = 0; c < lat.size(); ++c) {
        if (!lat.active(c)) continue;
        double acc = 0.0;
        for (int r = 0; r < lat.size(); ++r) {
            double v = std::norm(A.m(r, c));
            if (v != 0.0) acc += std::pow(lat.bracket_diff(r, c), 2.0 * idx.s) * v;
        }
        auto jc = lat.j(c);
        double jnorm = double(std::max({1, std::abs(jc[0]), std::abs(jc[1])}));
        best = std::max(best, std::sqrt(acc) * std::pow(jnorm, -idx.m));
    }
    return best;
}

LatticeOperator compose(const LatticeOperator& A, const LatticeOperator& B) {
    if (A.lat->size() != B.lat->size()) throw std::invalid_argument("compose: dimension mismatch");
    LatticeOperator C(A.lat, A.m * B.m);
    C.is_restriction_of_mp = A.is_restriction_of_mp && B.is_restriction_of_mp;
    return C;
}

LatticeOperator exp_op(const LatticeOperator& X, double tol) {
    // series sum X^n / n! with a geometric tail certificate in the
    // Frobenius norm (submultiplicative, so the bound is rigorous here)
    LatticeOperator out = LatticeOperator::identity(X.lat);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(X.m.rows(), X.m.cols());
    const double xn = X.m.norm();
    double termn = 1.0;
    for (int n = 1; n <= 60; ++n) {
        term = (term * X.m) / double(n);
        out.m += term;
        termn = termn * xn / double(n);
        if (xn < double(n)) {
            // remaining tail <= termn * sum_{k>=1} (xn/(n+1))^k
            double q = xn / double(n + 1);
            double tail = termn * q / (1.0 - q);
            if (tail < tol) {
                out.restrict_zero_average();
                out.is_restriction_of_mp = X.is_restriction_of_mp;
                return out;
            }
        }
    }
    throw std::runtime_error("exp_op: smallness violated, series tail not certified in 60 terms");
}

LatticeOperator diag_part(const LatticeOperator& A) {
    LatticeOperator D(A.lat);
    D.m.diagonal() = A.m.diagonal();
    D.is_restriction_of_mp = A.is_restriction_of_mp;
    return D;
}

bool phi_average_is_diagonal(const LatticeOperator& A, double tol) {
    // On the traveling restriction l=l' forces j=j', so the phi-average of the
    // ambient operator is visible as diagonal iff the ambient operator was
    // momentum preserving.  A plainly diagonal matrix qualifies regardless.
    if (A.is_restriction_of_mp) return true;
    double scale = std::max(1.0, A.m.cwiseAbs().maxCoeff());
    Eigen::MatrixXcd off = A.m;
    off.diagonal().setZero();
    return off.cwiseAbs().maxCoeff() <= tol * scale;
}

StructureFlags structure_check(const LatticeOperator& A, double tol) {
    const auto& lat = *A.lat;
    double scale = std::max(1.0, A.m.cwiseAbs().maxCoeff());
    double atol = tol * scale;
    StructureFlags f;
    f.real = f.reversible = f.reversibility_preserving = true;
    for (int r = 0; r < lat.size() && (f.real || f.reversible || f.reversibility_preserving); ++r) {
        for (int c = 0; c < lat.size(); ++c) {
            cplx v = A.m(r, c);
            cplx w = A.m(lat.neg(r), lat.neg(c));
            if (std::abs(v - std::conj(w)) > atol) f.real = false;
            if (std::abs(v + w) > atol) f.reversible = false;
            if (std::abs(v - w) > atol) f.reversibility_preserving = false;
            if (!f.real && !f.reversible && !f.reversibility_preserving) break;
        }
    }
    return f;
}

std::pair<LatticeOperator, LatticeOperator> op_project(const LatticeOperator& A, double N) {
    if (N < 0) throw std::invalid_argument("op_project: N must be >= 0");
    const auto& lat = *A.lat;
    LatticeOperator low(A.lat), high(A.lat);
    low.is_restriction_of_mp = high.is_restriction_of_mp = A.is_restriction_of_mp;
    for (int c = 0; c < lat.size(); ++c) {
        for (int r = 0; r < lat.size(); ++r) {
            cplx v = A.m(r, c);
            if (v == cplx(0.0)) continue;
            const int* lr = lat.ell(r);
            const int* lc = lat.ell(c);
            int dl = 0;
            for (int k = 0; k < lat.nu(); ++k) dl = std::max(dl, std::abs(lr[k] - lc[k]));
            int dj = std::max(std::abs(lat.j(r)[0] - lat.j(c)[0]), std::abs(lat.j(r)[1] - lat.j(c)[1]));
            if (double(dl) <= N && double(dj) <= N)
                low.m(r, c) = v;
            else
                high.m(r, c) = v;
        }
    }
    return {low, high};
}

nlohmann::json op_to_json(const LatticeOperator& A) {
    nlohmann::json j;
    j["nu"] = A.lat->nu();
    j["K_trunc"] = A.lat->K();
    nlohmann::json wv = nlohmann::json::array();
    for (const auto& v : A.lat->mom().jbar) wv.push_back({v[0], v[1]});
    j["wave_vectors"] = wv;
    j["momentum_preserving"] = A.is_restriction_of_mp;
    nlohmann::json entries = nlohmann::json::array();
    for (int c = 0; c < A.lat->size(); ++c)
        for (int r = 0; r < A.lat->size(); ++r) {
            cplx v = A.m(r, c);
            if (v == cplx(0.0)) continue;
            nlohmann::json lr = nlohmann::json::array(), lc = nlohmann::json::array();
            for (int k = 0; k < A.lat->nu(); ++k) {
                lr.push_back(A.lat->ell(r)[k]);
                lc.push_back(A.lat->ell(c)[k]);
            }
            entries.push_back({lr, lc, v.real(), v.imag()});
        }
    j["entries"] = entries;
    return j;
}

LatticeOperator op_from_json(const nlohmann::json& j) {
    MomentumMap mom;
    for (const auto& v : j.at("wave_vectors")) mom.jbar.push_back({v.at(0).get<int>(), v.at(1).get<int>()});
    auto lat = make_lattice(mom, j.at("K_trunc").get<int>());
    LatticeOperator A(lat);
    A.is_restriction_of_mp = j.value("momentum_preserving", true);
    std::vector<int> lr(lat->nu()), lc(lat->nu());
    for (const auto& e : j.at("entries")) {
        for (int k = 0; k < lat->nu(); ++k) {
            lr[k] = e.at(0).at(k).get<int>();
            lc[k] = e.at(1).at(k).get<int>();
        }
        int r = lat->index_of(lr), c = lat->index_of(lc);
        if (r < 0 || c < 0) throw std::runtime_error("operator json: index outside truncation");
        A.m(r, c) = cplx(e.at(2).get<double>(), e.at(3).get<double>());
    }
    if (!A.zero_rows_ok()) throw std::runtime_error("operator json: inactive rows/cols must vanish");
    return A;
}

LatticeOperator random_operator(const LatPtr& lat, Rng& rng, double decay, bool make_real) {
    LatticeOperator A(lat);
    for (int c = 0; c < lat->size(); ++c) {
        if (!lat->active(c)) continue;
        for (int r = 0; r < lat->size(); ++r) {
            if (!lat->active(r)) continue;
            double w = std::exp(-decay * lat->bracket_diff(r, c));
            A.m(r, c) = cplx(w * rng.normal(), w * rng.normal());
        }
    }
    if (make_real) {
        // enforce A(r,c) = conj(A(-r,-c)) by symmetrization
        Eigen::MatrixXcd sym = A.m;
        for (int c = 0; c < lat->size(); ++c)
            for (int r = 0; r < lat->size(); ++r)
                sym(r, c) = 0.5 * (A.m(r, c) + std::conj(A.m(lat->neg(r), lat->neg(c))));
        A.m = sym;
    }
    return A;
}

}  // namespace bpl
