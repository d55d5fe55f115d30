#include "bpl/reduce.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "bpl/fftgrid.hpp"

namespace bpl {

double spectral_norm(const Eigen::MatrixXcd& A) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

Eigen::MatrixXcd inverse_on_active(const LatticeOperator& A) {
    const auto& lat = *A.lat;
    std::vector<int> act;
    for (int i = 0; i < lat.size(); ++i)
        if (lat.active(i)) act.push_back(i);
    const int na = int(act.size());
    Eigen::MatrixXcd sub(na, na);
    for (int c = 0; c < na; ++c)
        for (int r = 0; r < na; ++r) sub(r, c) = A.m(act[r], act[c]);
    Eigen::MatrixXcd subinv = sub.partialPivLu().inverse();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(lat.size(), lat.size());
    for (int c = 0; c < na; ++c)
        for (int r = 0; r < na; ++r) out(act[r], act[c]) = subinv(r, c);
    return out;
}

namespace {

// flat index of a wrapped frequency vector on the G^nu grid (row major)
int wrap_index(const int* ell, int nu, int G) {
    int idx = 0;
    for (int k = 0; k < nu; ++k) {
        int f = ell[k] % G;
        if (f < 0) f += G;
        idx = idx * G + f;
    }
    return idx;
}

}  // namespace

LatticeOperator composition_operator(const std::array<TravelingField, 2>& beta, int oversample) {
    const auto& lat = *beta[0].lat;
    const int nu = lat.nu();
    const int G = oversample * (2 * lat.K() + 1);
    FftNd fft(std::vector<int>(nu, G));
    const std::size_t np = fft.size();

    // evaluate the displacement components on the theta grid
    std::array<std::vector<double>, 2> bgrid;
    for (int k = 0; k < 2; ++k) {
        std::fill(fft.in(), fft.in() + np, cplx(0.0));
        for (int i = 0; i < lat.size(); ++i)
            if (beta[k].a[i] != cplx(0.0)) fft.in()[wrap_index(lat.ell(i), nu, G)] += beta[k].a[i];
        fft.backward();
        bgrid[k].resize(np);
        double imax = 0.0, scale = 0.0;
        for (std::size_t p = 0; p < np; ++p) {
            bgrid[k][p] = fft.out()[p].real();
            imax = std::max(imax, std::abs(fft.out()[p].imag()));
            scale = std::max(scale, std::abs(bgrid[k][p]));
        }
        if (imax > 1e-10 * std::max(1.0, scale))
            throw std::runtime_error("composition_operator: displacement not real on the grid");
    }

    // centered frequency per flat index, for the aliasing guard
    std::vector<char> near_nyquist(np, 0);
    {
        std::vector<int> p(nu, 0);
        for (std::size_t flat = 0; flat < np; ++flat) {
            int rem = int(flat);
            bool hi = false;
            for (int k = nu - 1; k >= 0; --k) {
                int f = rem % G;
                rem /= G;
                int cf = f <= G / 2 ? f : f - G;
                if (std::abs(cf) > 0.9 * (G / 2.0)) hi = true;
            }
            near_nyquist[flat] = hi ? 1 : 0;
        }
    }

    LatticeOperator B(beta[0].lat);
    B.m = Eigen::MatrixXcd::Zero(lat.size(), lat.size());
    std::map<std::array<int, 2>, Eigen::VectorXcd> cache;
    std::vector<int> dvec(nu);
    for (int c = 0; c < lat.size(); ++c) {
        auto jc = lat.j(c);
        if (jc[0] == 0 && jc[1] == 0) {
            B.m(c, c) = 1.0;  // composition acts trivially on x-averages
            continue;
        }
        auto it = cache.find(jc);
        if (it == cache.end()) {
            for (std::size_t p = 0; p < np; ++p) {
                double ph = jc[0] * bgrid[0][p] + jc[1] * bgrid[1][p];
                fft.in()[p] = cplx(std::cos(ph), std::sin(ph));
            }
            fft.forward();
            Eigen::VectorXcd spec(np);
            double tot2 = 0.0, hi2 = 0.0;
            for (std::size_t p = 0; p < np; ++p) {
                spec[p] = fft.out()[p] / double(np);
                double v = std::norm(spec[p]);
                tot2 += v;
                if (near_nyquist[p]) hi2 += v;
            }
            if (hi2 > 1e-12 * tot2)
                throw std::runtime_error(
                    "composition_operator: aliasing guard tripped, displacement too rough for the "
                    "oversampled grid");
            it = cache.emplace(jc, std::move(spec)).first;
        }
        const Eigen::VectorXcd& spec = it->second;
        const int* lc = lat.ell(c);
        for (int r = 0; r < lat.size(); ++r) {
            const int* lr = lat.ell(r);
            for (int k = 0; k < nu; ++k) dvec[k] = lr[k] - lc[k];
            B.m(r, c) = spec[wrap_index(dvec.data(), nu, G)];
        }
    }
    B.is_restriction_of_mp = true;
    return B;
}

Straightening straighten_transport(const TravelingField& w, const ProblemConfig& cfg,
                                   const Eigen::VectorXd& omega, int max_iters, double btol) {
    auto lat = w.lat;
    const int n = lat->size();
    const int nu = lat->nu();
    const double gamma = cfg.gamma();
    const double s0 = cfg.s0;

    Straightening st;
    st.lat = lat;
    st.beta_total = {TravelingField(lat), TravelingField(lat)};
    st.B = LatticeOperator(lat, Eigen::MatrixXcd::Identity(n, n));

    auto a0 = biot_savart(w);
    std::array<TravelingField, 2> b{TravelingField(lat), TravelingField(lat)};
    b[0].a = cfg.eps() * a0[0].a;
    b[1].a = cfg.eps() * a0[1].a;

    std::vector<int> zero_ell(nu, 0);
    const int idx0 = lat->index_of(zero_ell);
    Eigen::Vector2d m = Eigen::Vector2d::Zero();

    for (int it = 0; it < max_iters; ++it) {
        double bnorm = std::max(sobolev_norm(b[0], s0), sobolev_norm(b[1], s0));
        st.b_norms.push_back(bnorm);
        if (bnorm < btol) break;
        st.iterations = it + 1;
        const double Nn = std::pow(cfg.N0_transport, std::pow(1.5, it));

        // constant drift absorbed into m
        Eigen::Vector2d mean(b[0].a[idx0].real(), b[1].a[idx0].real());

        // homological equation on 0 < <l> <= N_n with the current drift
        std::array<TravelingField, 2> bt{TravelingField(lat), TravelingField(lat)};
        for (int i = 0; i < n; ++i) {
            int li = lat->ell_inf(i);
            if (li == 0 || double(li) > Nn) continue;
            const int* l = lat->ell(i);
            auto j = lat->j(i);
            double d = 0.0;
            for (int k = 0; k < nu; ++k) d += omega[k] * l[k];
            d += m[0] * j[0] + m[1] * j[1];
            double floor = 0.5 * gamma * std::pow(double(li), -cfg.tau);
            if (std::abs(d) < floor) {
                std::ostringstream os;
                os << "transport straightening: divisor " << d << " below floor " << floor
                   << " at |l| = " << li;
                throw ResonanceError(os.str());
            }
            for (int k = 0; k < 2; ++k) bt[k].a[i] = -b[k].a[i] / cplx(0.0, d);
        }

        LatticeOperator Bn = composition_operator(bt);
        Eigen::MatrixXcd Bn_inv = Bn.m.partialPivLu().inverse();

        // remainder: unreduced high modes plus the quadratic transport term
        std::array<TravelingField, 2> bn{TravelingField(lat), TravelingField(lat)};
        for (int k = 0; k < 2; ++k) {
            TravelingField r(lat);
            for (int i = 0; i < n; ++i)
                if (double(lat->ell_inf(i)) > Nn) r.a[i] = b[k].a[i];
            TravelingField conv(lat);
            for (int mcomp = 0; mcomp < 2; ++mcomp)
                conv.a += multiply(b[mcomp], x_deriv(bt[k], mcomp)).a;
            bn[k].a = Bn_inv * (r.a + conv.a);
        }
        b = bn;

        m += mean;
        st.m_history.push_back(mean.norm());

        for (int k = 0; k < 2; ++k) st.beta_total[k].a += st.B.m * bt[k].a;
        st.B.m = st.B.m * Bn.m;
    }
    st.m_final = m;

    st.B_inv = LatticeOperator(lat, st.B.m.partialPivLu().inverse());
    st.B_perp = st.B;
    st.B_perp.restrict_zero_average();
    st.B_perp_inv = st.B_inv;
    st.B_perp_inv.restrict_zero_average();

    // straightened transport residual, measured not assumed
    const double lt = std::pow(cfg.lambda, cfg.theta());
    Eigen::MatrixXcd T = lt * advection_operator(a0).m;
    Eigen::VectorXcd dphi = Eigen::VectorXcd::Zero(n);
    for (int i = 0; i < n; ++i) {
        const int* l = lat->ell(i);
        double dot = 0.0;
        for (int k = 0; k < nu; ++k) dot += omega[k] * l[k];
        dphi[i] = cplx(0.0, cfg.lambda * dot);
        T(i, i) += dphi[i];
    }
    Eigen::MatrixXcd R = st.B_perp_inv.m * T * st.B_perp.m;
    for (int i = 0; i < n; ++i) {
        if (!lat->active(i)) continue;
        auto j = lat->j(i);
        // the straightened transport is omega.dphi plus the accumulated
        // constant drift m.grad; both belong to the normal form
        R(i, i) -= dphi[i] + cplx(0.0, cfg.lambda * (m[0] * j[0] + m[1] * j[1]));
    }
    // measure on the interior window |l|_inf <= K/2: the truncated
    // conjugation only restricts the full-lattice operator away from the
    // boundary shells, which carry pure truncation leakage
    const int Kin = std::max(1, lat->K() / 2);
    for (int i = 0; i < n; ++i) {
        if (lat->ell_inf(i) <= Kin) continue;
        R.row(i).setZero();
        R.col(i).setZero();
    }
    st.residual_rel = spectral_norm(R) / cfg.lambda;
    return st;
}

ReductionState conjugate_to_L1(const Straightening& st, const TravelingField& w,
                               const ProblemConfig& cfg, const Eigen::VectorXd& omega) {
    auto lat = w.lat;
    const int n = lat->size();
    ReductionState rs;
    rs.lat = lat;
    rs.omega = omega;
    rs.d_phi = Eigen::VectorXcd::Zero(n);
    rs.mu = Eigen::VectorXcd::Zero(n);
    for (int i = 0; i < n; ++i) {
        if (!lat->active(i)) continue;
        const int* l = lat->ell(i);
        double dot = 0.0;
        for (int k = 0; k < lat->nu(); ++k) dot += omega[k] * l[k];
        rs.d_phi[i] = cplx(0.0, cfg.lambda * dot);
        auto j = lat->j(i);
        // diagonal normal form after straightening: dispersion multiplier
        // plus the constant transport drift picked up by the straightening
        rs.mu[i] = cplx(0.0, cfg.beta_rot * multiplier_tL(j) +
                                 cfg.lambda * (st.m_final[0] * j[0] + st.m_final[1] * j[1]));
    }
    LatticeOperator L = linearized_L(w, cfg, omega);
    rs.E = LatticeOperator(lat, st.B_perp_inv.m * L.m * st.B_perp.m);
    for (int i = 0; i < n; ++i)
        if (lat->active(i)) rs.E.m(i, i) -= rs.d_phi[i] + rs.mu[i];
    rs.W = st.B_perp.m;
    rs.W_inv = st.B_perp_inv.m;
    return rs;
}

double stage_one_explicit_gap(const Straightening& st, const TravelingField& w,
                              const ProblemConfig& cfg) {
    auto lat = w.lat;
    const int n = lat->size();
    const double lt = std::pow(cfg.lambda, cfg.theta());

    // dispersion + shear block of L (everything except transport)
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
    Eigen::VectorXcd invD = Eigen::VectorXcd::Zero(n);
    Eigen::VectorXcd dx0 = Eigen::VectorXcd::Zero(n), dx1 = Eigen::VectorXcd::Zero(n);
    for (int i = 0; i < n; ++i) {
        if (!lat->active(i)) continue;
        auto j = lat->j(i);
        invD[i] = 1.0 / double(j[0] * j[0] + j[1] * j[1]);
        dx0[i] = cplx(0.0, double(j[0]));
        dx1[i] = cplx(0.0, double(j[1]));
        A(i, i) = cplx(0.0, cfg.beta_rot * multiplier_tL(j));
    }
    // shear part E0[h] = B[h].grad w
    for (int c = 0; c < n; ++c) {
        if (!lat->active(c)) continue;
        auto jc = lat->j(c);
        double inv = 1.0 / double(jc[0] * jc[0] + jc[1] * jc[1]);
        cplx b1 = cplx(0.0, -double(jc[1]) * inv);
        cplx b2 = cplx(0.0, double(jc[0]) * inv);
        for (int r = 0; r < n; ++r) {
            if (!lat->active(r)) continue;
            int d = lat->diff_index(r, c);
            if (d < 0 || w.a[d] == cplx(0.0)) continue;
            auto jd = lat->j(d);
            A(r, c) += lt * w.a[d] *
                       (cplx(0.0, double(jd[0])) * b1 + cplx(0.0, double(jd[1])) * b2);
        }
    }
    Eigen::MatrixXcd lhs = st.B_perp_inv.m * A * st.B_perp.m;
    // the decomposition describes the off-normal-form remainder, so remove
    // the unconjugated dispersion diagonal from the conjugated block
    for (int i = 0; i < n; ++i)
        if (lat->active(i)) lhs(i, i) -= cplx(0.0, cfg.beta_rot * multiplier_tL(lat->j(i)));

    // explicit smoothing decomposition of the same block
    auto mult = [&](const TravelingField& g) { return multiplication_operator(g).m; };
    TravelingField q1(lat, st.B_inv.m * x_deriv(st.beta_total[0], 0).a);
    TravelingField q2(lat, st.B_inv.m * x_deriv(st.beta_total[1], 0).a);
    Eigen::MatrixXcd A1 = (Eigen::MatrixXcd::Identity(n, n) + mult(q1)) * dx0.asDiagonal();
    A1 += mult(q2) * dx1.asDiagonal();

    Eigen::MatrixXcd invDm = Eigen::MatrixXcd(invD.asDiagonal());
    Eigen::MatrixXcd P2 = st.B_perp_inv.m * invDm * st.B_perp.m - invDm;
    Eigen::MatrixXcd rhs =
        cfg.beta_rot * (invDm * (A1 - Eigen::MatrixXcd(dx0.asDiagonal())) + P2 * A1);

    TravelingField h1(lat, st.B_inv.m * x_deriv(w, 0).a);
    TravelingField h2(lat, st.B_inv.m * x_deriv(w, 1).a);
    Eigen::MatrixXcd S1 = st.B_perp_inv.m * (invDm * Eigen::MatrixXcd(dx0.asDiagonal())) * st.B_perp.m;
    Eigen::MatrixXcd S2 = st.B_perp_inv.m * (invDm * Eigen::MatrixXcd(dx1.asDiagonal())) * st.B_perp.m;
    rhs += lt * (mult(h1) * (-S2) + mult(h2) * S1);

    // restrict both sides to the zero-average subspace and to the interior
    // window |l|_inf <= K/2, where the truncated conjugation is a faithful
    // restriction of the full-lattice operator (the boundary shells carry
    // pure truncation leakage)
    const int Kin = std::max(1, lat->K() / 2);
    for (int i = 0; i < n; ++i) {
        if (lat->active(i) && lat->ell_inf(i) <= Kin) continue;
        rhs.row(i).setZero();
        rhs.col(i).setZero();
        lhs.row(i).setZero();
        lhs.col(i).setZero();
    }
    double scale = std::max(lhs.norm(), 1e-300);
    return (lhs - rhs).norm() / scale;
}

void lower_order(ReductionState& st, const ProblemConfig& cfg) {
    auto lat = st.lat;
    const int n = lat->size();
    const double gamma = cfg.gamma();
    const int M = cfg.M();

    for (int m = 1; m < M; ++m) {
        LatticeOperator X(lat);
        for (int c = 0; c < n; ++c) {
            if (!lat->active(c)) continue;
            for (int r = 0; r < n; ++r) {
                if (r == c || !lat->active(r)) continue;
                if (st.E.m(r, c) == cplx(0.0)) continue;
                const int* lr = lat->ell(r);
                const int* lc = lat->ell(c);
                double dot = 0.0;
                int dl = 0;
                for (int k = 0; k < lat->nu(); ++k) {
                    dot += st.omega[k] * double(lr[k] - lc[k]);
                    dl = std::max(dl, std::abs(lr[k] - lc[k]));
                }
                double d = cfg.lambda * dot;
                double floor = 0.5 * cfg.lambda * gamma * std::pow(double(std::max(1, dl)), -cfg.tau);
                if (std::abs(d) < floor) {
                    std::ostringstream os;
                    os << "order lowering: divisor " << d << " below floor " << floor;
                    throw ResonanceError(os.str());
                }
                st.min_divisor_ratio = std::min(st.min_divisor_ratio, std::abs(d) / floor);
                X.m(r, c) = -st.E.m(r, c) / cplx(0.0, d);
            }
        }
        LatticeOperator Phi = exp_op(X);
        Eigen::MatrixXcd Phi_inv = inverse_on_active(Phi);

        Eigen::MatrixXcd Lm = st.E.m;
        for (int i = 0; i < n; ++i)
            if (lat->active(i)) Lm(i, i) += st.d_phi[i] + st.mu[i];
        Eigen::MatrixXcd Ln = Phi_inv * Lm * Phi.m;

        for (int i = 0; i < n; ++i)
            if (lat->active(i)) st.mu[i] += st.E.m(i, i);
        st.E.m = Ln;
        for (int i = 0; i < n; ++i)
            if (lat->active(i)) st.E.m(i, i) -= st.d_phi[i] + st.mu[i];
        st.lowering_norms.push_back(st.E.m.norm());

        st.W = st.W * Phi.m;
        st.W_inv = Phi_inv * st.W_inv;
    }
}

void kam_reduce(ReductionState& st, const ProblemConfig& cfg, int n_steps, double tol) {
    auto lat = st.lat;
    const int n = lat->size();
    const double gamma = cfg.gamma();
    const DecayIndex stop_idx{-double(cfg.M()), cfg.s0};

    st.kam_norms.push_back(decay_norm(st.E, stop_idx));
    double prev_cutoff = 0.0;
    for (int step = 0; step < n_steps; ++step) {
        if (st.kam_norms.back() < tol) break;
        st.kam_steps = step + 1;
        // super-exponential cutoff growth; force at least one new integer
        // shell per step so no step is wasted on the same block
        const double Nn = std::max(prev_cutoff + 1.0, std::pow(cfg.N0_kam, std::pow(1.5, step)));
        prev_cutoff = std::floor(Nn);
        const double gamma_n = gamma * (1.0 + std::pow(2.0, -double(step)));
        const double gate = cfg.melnikov_gate_factor;

        LatticeOperator Psi(lat);
        for (int c = 0; c < n; ++c) {
            if (!lat->active(c)) continue;
            auto jc = lat->j(c);
            double jb = double(std::max({1, std::abs(jc[0]), std::abs(jc[1])}));
            for (int r = 0; r < n; ++r) {
                if (r == c || !lat->active(r)) continue;
                if (st.E.m(r, c) == cplx(0.0)) continue;
                const int* lr = lat->ell(r);
                const int* lc = lat->ell(c);
                double dot = 0.0;
                int dl = 0;
                for (int k = 0; k < lat->nu(); ++k) {
                    dot += st.omega[k] * double(lr[k] - lc[k]);
                    dl = std::max(dl, std::abs(lr[k] - lc[k]));
                }
                if (double(dl) > Nn) continue;  // outside the block, handled later
                cplx den = cplx(0.0, cfg.lambda * dot) + st.mu[r] - st.mu[c];
                double floor = cfg.lambda * gamma_n * gate /
                               (std::pow(double(std::max(1, dl)), cfg.tau) * std::pow(jb, cfg.tau));
                if (std::abs(den) < floor) {
                    std::ostringstream os;
                    os << "diagonalization: second-order divisor " << std::abs(den)
                       << " below floor " << floor;
                    throw ResonanceError(os.str());
                }
                st.min_divisor_ratio = std::min(st.min_divisor_ratio, std::abs(den) / floor);
                Psi.m(r, c) = -st.E.m(r, c) / den;
            }
        }
        LatticeOperator Phi = exp_op(Psi);
        Eigen::MatrixXcd Phi_inv = inverse_on_active(Phi);

        Eigen::MatrixXcd Lm = st.E.m;
        for (int i = 0; i < n; ++i)
            if (lat->active(i)) Lm(i, i) += st.d_phi[i] + st.mu[i];
        Eigen::MatrixXcd Ln = Phi_inv * Lm * Phi.m;

        for (int i = 0; i < n; ++i)
            if (lat->active(i)) st.mu[i] += st.E.m(i, i);
        st.E.m = Ln;
        for (int i = 0; i < n; ++i)
            if (lat->active(i)) st.E.m(i, i) -= st.d_phi[i] + st.mu[i];

        st.W = st.W * Phi.m;
        st.W_inv = Phi_inv * st.W_inv;
        st.kam_norms.push_back(decay_norm(st.E, stop_idx));
    }
    st.kam_ratios.clear();
    for (std::size_t i = 0; i + 1 < st.kam_norms.size(); ++i)
        st.kam_ratios.push_back(st.kam_norms[i + 1] / std::pow(st.kam_norms[i], 1.4));
}

const char* to_string(InverseMethod m) {
    return m == InverseMethod::dense_lu ? "dense_lu" : "reduction_chain";
}

InverseMethod inverse_method_from_string(const std::string& s) {
    if (s == "dense_lu") return InverseMethod::dense_lu;
    if (s == "reduction_chain") return InverseMethod::reduction_chain;
    throw std::invalid_argument("inverse method must be dense_lu or reduction_chain");
}

TravelingField LinearInverse::solve(const TravelingField& g) const {
    if (method == InverseMethod::dense_lu) {
        Eigen::VectorXcd sub(act.size());
        for (std::size_t k = 0; k < act.size(); ++k) sub[k] = g.a[act[k]];
        Eigen::VectorXcd x = lu.solve(sub);
        TravelingField h(g.lat);
        for (std::size_t k = 0; k < act.size(); ++k) h.a[act[k]] = x[k];
        return h;
    }
    const auto& la = *lat;
    Eigen::VectorXcd y = W_inv * g.a;
    const double floor_base = 2.0 * cfg.lambda * cfg.gamma() * cfg.melnikov_gate_factor;
    for (int i = 0; i < la.size(); ++i) {
        if (!la.active(i)) {
            y[i] = 0.0;
            continue;
        }
        double floor = floor_base * std::pow(double(std::max(1, la.ell_inf(i))), -cfg.tau);
        if (std::abs(eta[i]) < floor) {
            std::ostringstream os;
            os << "final inversion: first-order divisor " << std::abs(eta[i]) << " below floor "
               << floor;
            throw ResonanceError(os.str());
        }
        y[i] /= eta[i];
    }
    Eigen::VectorXcd z = W * y;
    // symmetrize the round-off drift of the reality constraint
    TravelingField h(g.lat);
    for (int i = 0; i < la.size(); ++i)
        h.a[i] = 0.5 * (z[i] + std::conj(z[la.neg(i)]));
    return h;
}

LinearInverse invert_linearized(const TravelingField& w, const ProblemConfig& cfg,
                                const Eigen::VectorXd& omega, InverseMethod method,
                                int kam_steps) {
    LinearInverse inv;
    inv.method = method;
    inv.lat = w.lat;
    inv.cfg = cfg;
    const auto& lat = *w.lat;
    for (int i = 0; i < lat.size(); ++i)
        if (lat.active(i)) inv.act.push_back(i);

    if (method == InverseMethod::dense_lu) {
        LatticeOperator L = linearized_L(w, cfg, omega);
        const int na = int(inv.act.size());
        Eigen::MatrixXcd sub(na, na);
        for (int c = 0; c < na; ++c)
            for (int r = 0; r < na; ++r) sub(r, c) = L.m(inv.act[r], inv.act[c]);
        inv.lu.compute(sub);
        inv.rcond = inv.lu.rcond();
        return inv;
    }

    Straightening st = straighten_transport(w, cfg, omega);
    ReductionState rs = conjugate_to_L1(st, w, cfg, omega);
    lower_order(rs, cfg);
    kam_reduce(rs, cfg, kam_steps);
    inv.W = rs.W;
    inv.W_inv = rs.W_inv;
    inv.eta = rs.d_phi + rs.mu;
    inv.min_divisor_ratio = rs.min_divisor_ratio;
    inv.state = std::move(rs);
    return inv;
}

}  // namespace bpl
