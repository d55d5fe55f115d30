#include "bpl/diophantine.hpp"

#include <cmath>

namespace bpl {

namespace {

// enumerate l in the box |l|_inf <= Lmax, skipping l = 0; calls f(l, <l>)
// and stops early when f returns false
template <typename F>
bool scan_box(int nu, int Lmax, F&& f) {
    std::vector<int> l(nu, -Lmax);
    const long long total = [&] {
        long long t = 1;
        for (int k = 0; k < nu; ++k) t *= 2 * Lmax + 1;
        return t;
    }();
    for (long long idx = 0; idx < total; ++idx) {
        long long t = idx;
        bool zero = true;
        int linf = 0;
        for (int k = 0; k < nu; ++k) {
            l[k] = int(t % (2 * Lmax + 1)) - Lmax;
            t /= 2 * Lmax + 1;
            if (l[k] != 0) zero = false;
            linf = std::max(linf, std::abs(l[k]));
        }
        if (zero) continue;
        if (!f(l, double(std::max(1, linf)))) return false;
    }
    return true;
}

}  // namespace

bool check_dc(const Eigen::VectorXd& omega, double gamma, double tau, int Lmax) {
    if (gamma == 0.0) return true;  // vacuous; callers flag this as degenerate
    return scan_box(int(omega.size()), Lmax, [&](const std::vector<int>& l, double br) {
        double dot = 0.0;
        for (int k = 0; k < int(l.size()); ++k) dot += omega[k] * l[k];
        return std::abs(dot) >= gamma * std::pow(br, -tau);
    });
}

bool check_omega_gamma(const Eigen::VectorXd& omega, const ProblemConfig& cfg, int Lmax,
                       double gamma_override) {
    const double g = gamma_override > 0 ? gamma_override : cfg.gamma();
    return scan_box(cfg.nu, Lmax, [&](const std::vector<int>& l, double br) {
        auto pt = cfg.momentum.pi_t(l.data());
        if (pt[0] == 0 && pt[1] == 0) return true;  // off the traveling support
        std::array<int, 2> j{-pt[0], -pt[1]};
        double dot = 0.0;
        for (int k = 0; k < cfg.nu; ++k) dot += omega[k] * l[k];
        double div = cfg.lambda * dot + cfg.beta_rot * multiplier_tL(j);
        return std::abs(div) >= cfg.lambda * g * std::pow(br, -cfg.tau);
    });
}

bool check_melnikov2(const Eigen::VectorXd& omega, const LatPtr& lat, const MuTable& mu,
                     const ProblemConfig& cfg, int Lmax, double gamma_prime) {
    if (mu.size() != lat->size()) throw std::invalid_argument("melnikov2: missing eigenvalue table");
    for (int c = 0; c < lat->size(); ++c) {
        if (!lat->active(c)) continue;
        auto jc = lat->j(c);
        double jb = double(std::max({1, std::abs(jc[0]), std::abs(jc[1])}));
        for (int r = 0; r < lat->size(); ++r) {
            if (!lat->active(r) || r == c) continue;
            const int* lr = lat->ell(r);
            const int* lc = lat->ell(c);
            int linf = 0;
            double dot = 0.0;
            for (int k = 0; k < lat->nu(); ++k) {
                int d = lr[k] - lc[k];
                linf = std::max(linf, std::abs(d));
                dot += omega[k] * d;
            }
            if (linf == 0 || linf > Lmax) continue;
            cplx div = cplx(0.0, cfg.lambda * dot) + mu[r] - mu[c];
            double floor = cfg.lambda * gamma_prime /
                           (std::pow(double(std::max(1, linf)), cfg.tau) * std::pow(jb, cfg.tau));
            if (std::abs(div) < floor) return false;
        }
    }
    return true;
}

bool check_melnikov1(const Eigen::VectorXd& omega, const LatPtr& lat, const MuTable& mu,
                     const ProblemConfig& cfg, int Lmax, double gamma_prime) {
    if (mu.size() != lat->size()) throw std::invalid_argument("melnikov1: missing eigenvalue table");
    for (int i = 0; i < lat->size(); ++i) {
        if (!lat->active(i) || lat->ell_inf(i) > Lmax) continue;
        const int* l = lat->ell(i);
        double dot = 0.0;
        for (int k = 0; k < lat->nu(); ++k) dot += omega[k] * l[k];
        cplx div = cplx(0.0, cfg.lambda * dot) + mu[i];
        double br = double(std::max(1, lat->ell_inf(i)));
        if (std::abs(div) < 2.0 * cfg.lambda * gamma_prime * std::pow(br, -cfg.tau)) return false;
    }
    return true;
}

Eigen::VectorXd sample_annulus(int nu, Rng& rng) {
    Eigen::VectorXd w(nu);
    while (true) {
        for (int k = 0; k < nu; ++k) w[k] = rng.uniform(-2.0, 2.0);
        double n = w.norm();
        if (n >= 1.0 && n <= 2.0) return w;
    }
}

MeasureEstimate measure_fraction(const std::function<bool(const Eigen::VectorXd&)>& admissible,
                                 int nu, std::size_t n_samples, std::uint64_t seed) {
    if (n_samples < 1000) throw std::invalid_argument("measure_fraction: need >= 1000 samples");
    Rng rng(seed);
    MeasureEstimate est;
    est.n_samples = n_samples;
    for (std::size_t i = 0; i < n_samples; ++i) {
        Eigen::VectorXd w = sample_annulus(nu, rng);
        if (!admissible(w)) ++est.n_excluded;
    }
    est.excluded_fraction = double(est.n_excluded) / double(n_samples);
    auto [lo, hi] = wilson_ci95(est.n_excluded, n_samples);
    est.ci_lo = lo;
    est.ci_hi = hi;
    return est;
}

}  // namespace bpl
