#include "bpl/model.hpp"

#include <cmath>
#include <sstream>

namespace bpl {

int ProblemConfig::M() const {
    double need = std::max(2.0 * tau, (1.0 - c_small) / (2.0 * (1.0 - c_small) - alpha));
    int m = int(std::floor(need)) + 1;
    return std::min(m, M_cap);
}

void ProblemConfig::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
    if (!(lambda > 1.0)) fail("lambda must be > 1");
    if (beta_rot == 0.0) fail("beta_rot must be nonzero");
    if (!(alpha > 1.0 && alpha < 2.0)) fail("alpha must lie in (1,2)");
    if (!(c_small > 0.0 && c_small < (2.0 - alpha) / 3.0))
        fail("c_small must lie in (0, (2-alpha)/3)");
    if (!(theta() - 1.0 + c_small < 0.0)) fail("derived theta violates theta-1+c < 0");
    if (!(tau > nu - 1)) fail("tau must exceed nu-1");
    if (nu < 2) fail("nu must be >= 2");
    if (int(momentum.jbar.size()) != nu) fail("momentum map must provide nu wave vectors");
    if (!momentum.rank_two()) fail("wave vectors must span rank 2 over Q");
    if (K_trunc < 1) fail("K_trunc must be >= 1");
    double nmin = (alpha - (1.0 - c_small)) / (2.0 * (1.0 - c_small) - alpha);
    if (!(double(N_approx) > nmin)) {
        std::ostringstream os;
        os << "N_approx must exceed (alpha-(1-c))/(2(1-c)-alpha) = " << nmin;
        fail(os.str());
    }
    if (M_cap < 2) fail("M_cap must be >= 2");
    double mmin = (1.0 - c_small) / (2.0 * (1.0 - c_small) - alpha);
    if (!(double(M()) > mmin)) fail("order-lowering depth M must exceed (1-c)/(2(1-c)-alpha)");
    for (const auto& fm : forcing_modes) {
        if (int(fm.ell.size()) != nu) fail("forcing mode index must have nu components");
        auto pt = momentum.pi_t(fm.ell.data());
        if (pt[0] == 0 && pt[1] == 0) fail("forcing mode violates zero-average constraint (pi^T(l)=0)");
    }
}

TravelingField ProblemConfig::make_forcing(const LatPtr& lat) const {
    if (!forcing_modes.empty()) return build_forcing(lat, forcing_modes, forcing_even);
    // default experiment forcing: modes (1,0),(0,1),(1,1) with unit amplitudes
    std::vector<ForcingMode> spec;
    std::vector<std::vector<int>> idx = {{1, 0}, {0, 1}, {1, 1}};
    for (auto& l : idx) {
        l.resize(nu, 0);
        spec.push_back({l, 1.0});
    }
    return build_forcing(lat, spec, forcing_even);
}

nlohmann::json ProblemConfig::to_json() const {
    nlohmann::json j;
    j["lambda"] = lambda;
    j["beta_rot"] = beta_rot;
    j["alpha"] = alpha;
    j["c_small"] = c_small;
    j["tau"] = tau;
    j["nu"] = nu;
    j["K_trunc"] = K_trunc;
    j["s0"] = s0;
    j["N_approx"] = N_approx;
    nlohmann::json wv = nlohmann::json::array();
    for (const auto& v : momentum.jbar) wv.push_back({v[0], v[1]});
    j["wave_vectors"] = wv;
    j["M_cap"] = M_cap;
    j["sigma_bar"] = sigma_bar;
    j["N0_transport"] = N0_transport;
    j["N0_kam"] = N0_kam;
    j["melnikov_gate_factor"] = melnikov_gate_factor;
    j["delta_smallness"] = delta_smallness;
    j["cond_ceiling"] = cond_ceiling;
    j["reversible"] = reversible;
    j["forcing_even"] = forcing_even;
    nlohmann::json fm = nlohmann::json::array();
    for (const auto& m : forcing_modes) fm.push_back({{"ell", m.ell}, {"amplitude", m.amplitude}});
    j["forcing_modes"] = fm;
    // derived, echoed for the record
    j["derived"] = {{"theta", theta()}, {"gamma", gamma()}, {"eps", eps()},
                    {"eps_M", eps_M()}, {"M", M()}};
    return j;
}

ProblemConfig ProblemConfig::from_json(const nlohmann::json& j) {
    ProblemConfig c;
    auto grab = [&](const char* key, auto& slot) {
        if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
    };
    grab("lambda", c.lambda);
    grab("beta_rot", c.beta_rot);
    grab("alpha", c.alpha);
    grab("c_small", c.c_small);
    grab("tau", c.tau);
    grab("nu", c.nu);
    grab("K_trunc", c.K_trunc);
    grab("s0", c.s0);
    grab("N_approx", c.N_approx);
    grab("M_cap", c.M_cap);
    grab("sigma_bar", c.sigma_bar);
    grab("N0_transport", c.N0_transport);
    grab("N0_kam", c.N0_kam);
    grab("melnikov_gate_factor", c.melnikov_gate_factor);
    grab("delta_smallness", c.delta_smallness);
    grab("cond_ceiling", c.cond_ceiling);
    grab("reversible", c.reversible);
    grab("forcing_even", c.forcing_even);
    if (j.contains("wave_vectors")) {
        c.momentum.jbar.clear();
        for (const auto& v : j.at("wave_vectors"))
            c.momentum.jbar.push_back({v.at(0).get<int>(), v.at(1).get<int>()});
    } else if (c.nu != 2) {
        throw std::invalid_argument("config: non-default nu requires wave_vectors");
    }
    if (j.contains("forcing_modes")) {
        for (const auto& m : j.at("forcing_modes"))
            c.forcing_modes.push_back({m.at("ell").get<std::vector<int>>(),
                                       m.value("amplitude", 1.0)});
    }
    if (j.contains("derived"))
        throw std::invalid_argument("config: derived quantities are computed, never supplied");
    c.validate();
    return c;
}

double multiplier_tL(const std::array<int, 2>& j) {
    if (j[0] == 0 && j[1] == 0) throw std::invalid_argument("multiplier_tL: undefined at zero mode");
    return double(j[0]) / double(j[0] * j[0] + j[1] * j[1]);
}

std::array<TravelingField, 2> biot_savart(const TravelingField& v) {
    TravelingField u1(v.lat), u2(v.lat);
    for (int i = 0; i < v.lat->size(); ++i) {
        if (!v.lat->active(i) || v.a[i] == cplx(0.0)) continue;
        auto j = v.lat->j(i);
        double inv = 1.0 / double(j[0] * j[0] + j[1] * j[1]);
        u1.a[i] = cplx(0.0, -double(j[1]) * inv) * v.a[i];
        u2.a[i] = cplx(0.0, double(j[0]) * inv) * v.a[i];
    }
    return {u1, u2};
}

TravelingField x_deriv(const TravelingField& f, int axis) {
    TravelingField out(f.lat);
    for (int i = 0; i < f.lat->size(); ++i)
        out.a[i] = cplx(0.0, double(f.lat->j(i)[axis])) * f.a[i];
    return out;
}

TravelingField phi_deriv(const TravelingField& f, int k) {
    TravelingField out(f.lat);
    for (int i = 0; i < f.lat->size(); ++i)
        out.a[i] = cplx(0.0, double(f.lat->ell(i)[k])) * f.a[i];
    return out;
}

TravelingField multiply(const TravelingField& f, const TravelingField& g) {
    const auto& lat = *f.lat;
    TravelingField out(f.lat);
    for (int b = 0; b < lat.size(); ++b) {
        if (g.a[b] == cplx(0.0)) continue;
        for (int a = 0; a < lat.size(); ++a) {
            if (f.a[a] == cplx(0.0)) continue;
            int s = lat.sum_index(a, b);
            if (s >= 0) out.a[s] += f.a[a] * g.a[b];
        }
    }
    return out;
}

TravelingField nonlinearity(const TravelingField& v1, const TravelingField& v2) {
    auto u = biot_savart(v1);
    const auto& lat = *v1.lat;
    TravelingField out(v1.lat);
    for (int b = 0; b < lat.size(); ++b) {
        if (v2.a[b] == cplx(0.0)) continue;
        auto jb = lat.j(b);
        cplx g1 = cplx(0.0, double(jb[0])) * v2.a[b];
        cplx g2 = cplx(0.0, double(jb[1])) * v2.a[b];
        for (int a = 0; a < lat.size(); ++a) {
            cplx term = u[0].a[a] * g1 + u[1].a[a] * g2;
            if (term == cplx(0.0)) continue;
            int s = lat.sum_index(a, b);
            if (s >= 0) out.a[s] += term;
        }
    }
    // divergence form: the x-average modes receive nothing, but round-off
    // hygiene keeps the invariant literal
    for (int i = 0; i < lat.size(); ++i)
        if (!lat.active(i)) out.a[i] = 0.0;
    return out;
}

Eigen::VectorXd linear_divisors(const LatPtr& lat, const ProblemConfig& cfg, const Eigen::VectorXd& omega) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(lat->size());
    for (int i = 0; i < lat->size(); ++i) {
        if (!lat->active(i)) continue;
        const int* l = lat->ell(i);
        double dot = 0.0;
        for (int k = 0; k < lat->nu(); ++k) dot += omega[k] * l[k];
        d[i] = cfg.lambda * dot + cfg.beta_rot * multiplier_tL(lat->j(i));
    }
    return d;
}

TravelingField functional_F(const TravelingField& w, const ProblemConfig& cfg,
                            const Eigen::VectorXd& omega, const TravelingField& f) {
    const auto& lat = *w.lat;
    Eigen::VectorXd div = linear_divisors(w.lat, cfg, omega);
    TravelingField out(w.lat);
    for (int i = 0; i < lat.size(); ++i) out.a[i] = cplx(0.0, div[i]) * w.a[i];
    TravelingField nl = nonlinearity(w, w);
    double lt = std::pow(cfg.lambda, cfg.theta());
    double lf = std::pow(cfg.lambda, cfg.alpha - cfg.theta());
    out.a += lt * nl.a - lf * f.a;
    return out;
}

LatticeOperator multiplication_operator(const TravelingField& g) {
    const auto& lat = *g.lat;
    LatticeOperator A(g.lat);
    for (int c = 0; c < lat.size(); ++c) {
        for (int r = 0; r < lat.size(); ++r) {
            int d = lat.diff_index(r, c);
            if (d >= 0 && g.a[d] != cplx(0.0)) A.m(r, c) = g.a[d];
        }
    }
    return A;
}

LatticeOperator advection_operator(const std::array<TravelingField, 2>& coeff) {
    const auto& lat = *coeff[0].lat;
    LatticeOperator A(coeff[0].lat);
    for (int c = 0; c < lat.size(); ++c) {
        auto jc = lat.j(c);
        cplx g1 = cplx(0.0, double(jc[0]));
        cplx g2 = cplx(0.0, double(jc[1]));
        for (int r = 0; r < lat.size(); ++r) {
            int d = lat.diff_index(r, c);
            if (d < 0) continue;
            cplx v = coeff[0].a[d] * g1 + coeff[1].a[d] * g2;
            if (v != cplx(0.0)) A.m(r, c) = v;
        }
    }
    return A;
}

LatticeOperator linearized_L(const TravelingField& w, const ProblemConfig& cfg,
                             const Eigen::VectorXd& omega) {
    const auto& lat = *w.lat;
    Eigen::VectorXd div = linear_divisors(w.lat, cfg, omega);
    LatticeOperator L(w.lat);
    for (int i = 0; i < lat.size(); ++i)
        if (lat.active(i)) L.m(i, i) = cplx(0.0, div[i]);

    const double lt = std::pow(cfg.lambda, cfg.theta());
    // a0 . grad  with a0 = B[w]
    auto a0 = biot_savart(w);
    LatticeOperator adv = advection_operator(a0);
    // E0[h] = grad w . B[h]: entry (r,c) = i j(d) w(d) . (i(-jc2, jc1)/|jc|^2)
    LatticeOperator e0(w.lat);
    for (int c = 0; c < lat.size(); ++c) {
        if (!lat.active(c)) continue;
        auto jc = lat.j(c);
        double inv = 1.0 / double(jc[0] * jc[0] + jc[1] * jc[1]);
        cplx b1 = cplx(0.0, -double(jc[1]) * inv);
        cplx b2 = cplx(0.0, double(jc[0]) * inv);
        for (int r = 0; r < lat.size(); ++r) {
            int d = lat.diff_index(r, c);
            if (d < 0 || w.a[d] == cplx(0.0)) continue;
            auto jd = lat.j(d);
            e0.m(r, c) = w.a[d] * (cplx(0.0, double(jd[0])) * b1 + cplx(0.0, double(jd[1])) * b2);
        }
    }
    L.m += lt * (adv.m + e0.m);
    L.restrict_zero_average();
    return L;
}

TravelingField build_forcing(const LatPtr& lat, const std::vector<ForcingMode>& spec, bool even) {
    TravelingField f(lat);
    for (const auto& m : spec) {
        if (int(m.ell.size()) != lat->nu())
            throw std::invalid_argument("build_forcing: mode index dimension mismatch");
        int idx = lat->index_of(m.ell);
        if (idx < 0) throw std::invalid_argument("build_forcing: mode outside truncation");
        if (!lat->active(idx))
            throw std::invalid_argument("build_forcing: mode violates zero-average constraint");
        int nidx = lat->neg(idx);
        if (even) {
            // cos mode: u(l) = u(-l) = amplitude/2 (real => even + reality)
            f.a[idx] += 0.5 * m.amplitude;
            f.a[nidx] += 0.5 * m.amplitude;
        } else {
            // sin mode: u(l) = amplitude/(2i), u(-l) = -u(l)
            f.a[idx] += cplx(0.0, -0.5 * m.amplitude);
            f.a[nidx] += cplx(0.0, 0.5 * m.amplitude);
        }
    }
    return f;
}

}  // namespace bpl
