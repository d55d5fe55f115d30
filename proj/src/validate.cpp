#include "bpl/validate.hpp"

#include <cmath>

#include "bpl/fftgrid.hpp"

namespace bpl {
namespace {

// spectral state on the oversampled spatial grid; array entries are Fourier
// coefficients indexed by wrapped frequency
struct Grid2 {
    int G;
    std::size_t np;
    FftNd fft;
    std::vector<int> j0, j1;      // centered frequencies per flat index
    std::vector<char> keep;       // 2/3 dealiasing mask
    std::vector<double> tl;       // dispersion symbol j0/|j|^2

    explicit Grid2(int G_) : G(G_), np(std::size_t(G_) * G_), fft({G_, G_}) {
        j0.resize(np);
        j1.resize(np);
        keep.resize(np);
        tl.resize(np);
        const int cut = G / 3;
        for (int a = 0; a < G; ++a)
            for (int b = 0; b < G; ++b) {
                std::size_t p = std::size_t(a) * G + b;
                int fa = a <= G / 2 ? a : a - G;
                int fb = b <= G / 2 ? b : b - G;
                j0[p] = fa;
                j1[p] = fb;
                keep[p] = (std::abs(fa) <= cut && std::abs(fb) <= cut) ? 1 : 0;
                tl[p] = (fa || fb) ? double(fa) / double(fa * fa + fb * fb) : 0.0;
            }
    }

    std::size_t wrap(int a, int b) const {
        int wa = a % G;
        if (wa < 0) wa += G;
        int wb = b % G;
        if (wb < 0) wb += G;
        return std::size_t(wa) * G + wb;
    }

    void to_phys(const Eigen::VectorXcd& spec, Eigen::VectorXcd& phys) {
        std::copy(spec.data(), spec.data() + np, fft.in());
        fft.backward();
        phys.resize(np);
        std::copy(fft.out(), fft.out() + np, phys.data());
    }

    void to_spec(const Eigen::VectorXcd& phys, Eigen::VectorXcd& spec) {
        std::copy(phys.data(), phys.data() + np, fft.in());
        fft.forward();
        spec.resize(np);
        const double inv = 1.0 / double(np);
        for (std::size_t p = 0; p < np; ++p) spec[p] = fft.out()[p] * inv * double(keep[p]);
    }

    // (u . grad a)^hat from vorticity spectra u = B[v]
    Eigen::VectorXcd transport(const Eigen::VectorXcd& vhat, const Eigen::VectorXcd& ahat) {
        Eigen::VectorXcd u1(np), u2(np), ax(np), ay(np);
        for (std::size_t p = 0; p < np; ++p) {
            double n2 = double(j0[p]) * j0[p] + double(j1[p]) * j1[p];
            cplx bs = n2 > 0 ? vhat[p] / n2 : cplx(0.0);
            u1[p] = cplx(0.0, -double(j1[p])) * bs;
            u2[p] = cplx(0.0, double(j0[p])) * bs;
            ax[p] = cplx(0.0, double(j0[p])) * ahat[p];
            ay[p] = cplx(0.0, double(j1[p])) * ahat[p];
        }
        Eigen::VectorXcd pu1, pu2, pax, pay;
        to_phys(u1, pu1);
        to_phys(u2, pu2);
        to_phys(ax, pax);
        to_phys(ay, pay);
        Eigen::VectorXcd prod(np);
        for (std::size_t p = 0; p < np; ++p) prod[p] = pu1[p] * pax[p] + pu2[p] * pay[p];
        Eigen::VectorXcd out;
        to_spec(prod, out);
        return out;
    }
};

// traveling coefficients placed on the grid spectrum with their carrier phases
Eigen::VectorXcd traveling_spectrum(Grid2& g, const TravelingField& u, double amp,
                                    const Eigen::VectorXd& omega, double lambda, double t) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(g.np);
    const auto& lat = *u.lat;
    for (int i = 0; i < lat.size(); ++i) {
        if (u.a[i] == cplx(0.0)) continue;
        const int* l = lat.ell(i);
        double dot = 0.0;
        for (int k = 0; k < lat.nu(); ++k) dot += omega[k] * l[k];
        auto j = lat.j(i);
        double ph = lambda * dot * t;
        out[g.wrap(j[0], j[1])] += amp * u.a[i] * cplx(std::cos(ph), std::sin(ph));
    }
    return out;
}

// one integrating-factor RK4 step; rhs(state_hat, t) excludes the dispersion
template <typename Rhs>
void ifrk4_step(const Eigen::VectorXcd& E1, const Eigen::VectorXcd& E2, double dt, double& t,
                Eigen::VectorXcd& v, const Rhs& rhs) {
    Eigen::VectorXcd k1 = rhs(v, t);
    Eigen::VectorXcd v2 = (E1.array() * (v + 0.5 * dt * k1).array()).matrix();
    Eigen::VectorXcd k2 = rhs(v2, t + 0.5 * dt);
    Eigen::VectorXcd v3 = (E1.array() * v.array()).matrix() + 0.5 * dt * k2;
    Eigen::VectorXcd k3 = rhs(v3, t + 0.5 * dt);
    Eigen::VectorXcd v4 =
        (E2.array() * v.array()).matrix() + dt * (E1.array() * k3.array()).matrix();
    Eigen::VectorXcd k4 = rhs(v4, t + dt);
    v = (E2.array() * v.array()).matrix() +
        (dt / 6.0) * ((E2.array() * k1.array()).matrix() +
                      2.0 * (E1.array() * (k2 + k3).array()).matrix() + k4);
    t += dt;
}

Eigen::VectorXcd half_propagator(const Grid2& g, double beta, double dt) {
    Eigen::VectorXcd E(g.np);
    for (std::size_t p = 0; p < g.np; ++p) {
        double ph = -beta * g.tl[p] * 0.5 * dt;
        E[p] = cplx(std::cos(ph), std::sin(ph));
    }
    return E;
}

}  // namespace

EvolutionResult evolve_and_compare(const TravelingField& w, const ProblemConfig& cfg,
                                   const Eigen::VectorXd& omega, const TravelingField& forcing,
                                   double t_final, int n_snapshots, double phase_step) {
    const int G = 4 * (2 * cfg.K_trunc + 1);
    Grid2 g(G);
    const double lt = std::pow(cfg.lambda, cfg.theta());
    const double la = std::pow(cfg.lambda, cfg.alpha);
    if (t_final <= 0.0) t_final = 2.0 * M_PI / cfg.lambda;

    double om1 = omega.cwiseAbs().sum();
    double dt_req = phase_step / (2.0 * cfg.lambda * om1);
    int steps = std::max(1, int(std::ceil(t_final / dt_req)));
    double dt = t_final / steps;

    Eigen::VectorXcd E1 = half_propagator(g, cfg.beta_rot, dt);
    Eigen::VectorXcd E2 = (E1.array() * E1.array()).matrix();

    auto rhs = [&](const Eigen::VectorXcd& vhat, double t) {
        Eigen::VectorXcd out = -g.transport(vhat, vhat);
        out += traveling_spectrum(g, forcing, la, omega, cfg.lambda, t);
        return out;
    };

    EvolutionResult res;
    res.steps = steps;
    res.dt = dt;
    Eigen::VectorXcd v = traveling_spectrum(g, w, lt, omega, cfg.lambda, 0.0);
    double t = 0.0;
    int snap_every = std::max(1, steps / std::max(1, n_snapshots));
    for (int s = 1; s <= steps; ++s) {
        ifrk4_step(E1, E2, dt, t, v, rhs);
        if (s % snap_every == 0 || s == steps) {
            Eigen::VectorXcd ex = traveling_spectrum(g, w, lt, omega, cfg.lambda, t);
            double den = std::max(ex.norm(), 1e-300);
            double d = (v - ex).norm() / den;
            res.times.push_back(t);
            res.defect_rel.push_back(d);
            res.max_defect = std::max(res.max_defect, d);
        }
    }
    return res;
}

StabilityResult stability_probe(const TravelingField& w, const ProblemConfig& cfg,
                                const Eigen::VectorXd& omega, const Eigen::VectorXcd& mu_inf,
                                std::uint64_t seed, double t_final, double phase_step) {
    const int G = 4 * (2 * cfg.K_trunc + 1);
    Grid2 g(G);
    const double lt = std::pow(cfg.lambda, cfg.theta());
    if (t_final <= 0.0) t_final = 2.0 / lt;

    StabilityResult out;
    const auto& lat = *w.lat;
    for (int i = 0; i < lat.size(); ++i)
        if (lat.active(i) && i < mu_inf.size())
            out.max_re_mu = std::max(out.max_re_mu, mu_inf[i].real());

    double om1 = omega.cwiseAbs().sum();
    double dt_req = phase_step / (2.0 * cfg.lambda * om1);
    int steps = std::max(1, int(std::ceil(t_final / dt_req)));
    double dt = t_final / steps;
    out.horizon = t_final;
    out.steps = steps;

    Eigen::VectorXcd E1 = half_propagator(g, cfg.beta_rot, dt);
    Eigen::VectorXcd E2 = (E1.array() * E1.array()).matrix();

    // random real zero-average perturbation supported on |j| <= K
    Rng rng(seed);
    Eigen::VectorXcd h = Eigen::VectorXcd::Zero(g.np);
    for (int a = -cfg.K_trunc; a <= cfg.K_trunc; ++a)
        for (int b = -cfg.K_trunc; b <= cfg.K_trunc; ++b) {
            if (a < 0 || (a == 0 && b <= 0)) continue;
            cplx c(rng.normal(), rng.normal());
            h[g.wrap(a, b)] += c;
            h[g.wrap(-a, -b)] += std::conj(c);
        }
    const double h0 = h.norm();

    auto rhs = [&](const Eigen::VectorXcd& hhat, double t) {
        Eigen::VectorXcd vhat = traveling_spectrum(g, w, lt, omega, cfg.lambda, t);
        Eigen::VectorXcd out1 = g.transport(vhat, hhat);  // u_lambda . grad h
        Eigen::VectorXcd out2 = g.transport(hhat, vhat);  // B[h] . grad v_lambda
        return Eigen::VectorXcd(-(out1 + out2));
    };

    double t = 0.0;
    out.growth = 1.0;
    int check_every = std::max(1, steps / 64);
    for (int s = 1; s <= steps; ++s) {
        ifrk4_step(E1, E2, dt, t, h, rhs);
        if (s % check_every == 0 || s == steps)
            out.growth = std::max(out.growth, h.norm() / h0);
    }
    return out;
}

}  // namespace bpl
