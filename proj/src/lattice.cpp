#include "bpl/lattice.hpp"

#include <cmath>
#include <sstream>

namespace bpl {

Lattice::Lattice(MomentumMap mom, int K) : mom_(std::move(mom)), K_(K) {
    if (K < 1) throw std::invalid_argument("lattice: K_trunc must be >= 1");
    if (mom_.nu() < 2) throw std::invalid_argument("lattice: need nu >= 2 wave vectors");
    if (!mom_.rank_two())
        throw std::invalid_argument("lattice: wave vectors must span a rank-2 sublattice of Z^2");
    const int nu = mom_.nu();
    const int side = 2 * K + 1;
    long long n = 1;
    for (int k = 0; k < nu; ++k) {
        n *= side;
        if (n > 2'000'000) throw std::invalid_argument("lattice: truncation too large");
    }
    n_ = int(n);
    ells_.resize(std::size_t(n_) * nu);
    jtab_.resize(n_);
    neg_.resize(n_);
    active_.resize(n_);
    ell_inf_.resize(n_);
    bracket_.resize(n_);

    std::vector<int> ell(nu, -K);
    for (int idx = 0; idx < n_; ++idx) {
        // decode idx in base (2K+1), least significant digit = component 0
        int t = idx;
        for (int k = 0; k < nu; ++k) {
            ell[k] = t % side - K;
            t /= side;
        }
        for (int k = 0; k < nu; ++k) ells_[std::size_t(idx) * nu + k] = ell[k];
        auto pt = mom_.pi_t(ell.data());
        jtab_[idx] = {-pt[0], -pt[1]};
        active_[idx] = (pt[0] != 0 || pt[1] != 0) ? 1 : 0;
        if (active_[idx]) ++n_active_;
        ell_inf_[idx] = linf(ell.data(), nu);
        int br = std::max(ell_inf_[idx], std::max(std::abs(jtab_[idx][0]), std::abs(jtab_[idx][1])));
        bracket_[idx] = double(std::max(1, br));
        int nidx = 0, mult = 1;
        for (int k = 0; k < nu; ++k) {
            nidx += (-ell[k] + K) * mult;
            mult *= side;
        }
        neg_[idx] = nidx;
    }
}

int Lattice::index_of(const int* ell) const {
    int idx = 0, mult = 1;
    const int side = 2 * K_ + 1;
    for (int k = 0; k < nu(); ++k) {
        if (ell[k] < -K_ || ell[k] > K_) return -1;
        idx += (ell[k] + K_) * mult;
        mult *= side;
    }
    return idx;
}

int Lattice::sum_index(int a, int b) const {
    const int* la = ell(a);
    const int* lb = ell(b);
    int idx = 0, mult = 1;
    const int side = 2 * K_ + 1;
    for (int k = 0; k < nu(); ++k) {
        int c = la[k] + lb[k];
        if (c < -K_ || c > K_) return -1;
        idx += (c + K_) * mult;
        mult *= side;
    }
    return idx;
}

int Lattice::diff_index(int a, int b) const {
    const int* la = ell(a);
    const int* lb = ell(b);
    int idx = 0, mult = 1;
    const int side = 2 * K_ + 1;
    for (int k = 0; k < nu(); ++k) {
        int c = la[k] - lb[k];
        if (c < -K_ || c > K_) return -1;
        idx += (c + K_) * mult;
        mult *= side;
    }
    return idx;
}

LatPtr make_lattice(const MomentumMap& mom, int K) { return std::make_shared<Lattice>(mom, K); }

bool TravelingField::zero_average_ok(double tol) const {
    for (int i = 0; i < lat->size(); ++i)
        if (!lat->active(i) && std::abs(a[i]) > tol) return false;
    return true;
}

bool TravelingField::reality_ok(double tol) const {
    double scale = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
    double atol = tol * std::max(1.0, scale);
    for (int i = 0; i < lat->size(); ++i)
        if (std::abs(a[i] - std::conj(a[lat->neg(i)])) > atol) return false;
    return true;
}

void TravelingField::check(const char* who) const {
    if (!lat) throw std::runtime_error(std::string(who) + ": field has no lattice");
    if (a.size() != lat->size()) throw std::runtime_error(std::string(who) + ": coefficient size mismatch");
    if (!zero_average_ok(1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff())))
        throw std::runtime_error(std::string(who) + ": zero-average invariant violated");
    if (!reality_ok()) throw std::runtime_error(std::string(who) + ": reality invariant violated");
}

const char* to_string(Parity p) {
    switch (p) {
        case Parity::Even: return "even";
        case Parity::Odd: return "odd";
        default: return "neither";
    }
}

double sobolev_norm(const TravelingField& f, double s) {
    double acc = 0.0;
    for (int i = 0; i < f.lat->size(); ++i) {
        double m = std::norm(f.a[i]);
        if (m != 0.0) acc += std::pow(f.lat->bracket_mode(i), 2.0 * s) * m;
    }
    return std::sqrt(acc);
}

TravelingField project_low(const TravelingField& f, double K) {
    if (K < 1) throw std::invalid_argument("project_low: K must be >= 1");
    TravelingField out(f.lat);
    for (int i = 0; i < f.lat->size(); ++i)
        if (double(std::max(1, f.lat->ell_inf(i))) <= K) out.a[i] = f.a[i];
    return out;
}

TravelingField project_high(const TravelingField& f, double K) {
    if (K < 1) throw std::invalid_argument("project_high: K must be >= 1");
    TravelingField out(f.lat);
    for (int i = 0; i < f.lat->size(); ++i)
        if (double(std::max(1, f.lat->ell_inf(i))) > K) out.a[i] = f.a[i];
    return out;
}

Parity parity(const TravelingField& f, double tol) {
    double scale = f.a.size() ? f.a.cwiseAbs().maxCoeff() : 0.0;
    double atol = tol * std::max(1.0, scale);
    bool even = true, odd = true;
    for (int i = 0; i < f.lat->size(); ++i) {
        const cplx neg = f.a[f.lat->neg(i)];
        if (std::abs(neg - f.a[i]) > atol) even = false;
        if (std::abs(neg + f.a[i]) > atol) odd = false;
        if (!even && !odd) return Parity::Neither;
    }
    // zero field is classified as even
    return even ? Parity::Even : Parity::Odd;
}

double evaluate(const TravelingField& f, const std::vector<double>& phi, const std::array<double, 2>& x) {
    if (int(phi.size()) != f.lat->nu()) throw std::invalid_argument("evaluate: phi dimension mismatch");
    cplx acc = 0.0;
    for (int i = 0; i < f.lat->size(); ++i) {
        if (f.a[i] == cplx(0.0)) continue;
        const int* l = f.lat->ell(i);
        auto j = f.lat->j(i);
        double ph = j[0] * x[0] + j[1] * x[1];
        for (int k = 0; k < f.lat->nu(); ++k) ph += l[k] * phi[k];
        acc += f.a[i] * std::polar(1.0, ph);
    }
    double scale = std::max(1.0, f.a.cwiseAbs().sum());
    if (std::abs(acc.imag()) > 1e-12 * scale)
        throw std::runtime_error("evaluate: non-real value, reality invariant broken upstream");
    return acc.real();
}

void ParamGrid::check() const {
    for (const auto& w : samples) {
        double n = w.norm();
        if (n < 1.0 - 1e-12 || n > 2.0 + 1e-12)
            throw std::runtime_error("param grid: sample outside the annulus 1 <= |omega| <= 2");
    }
    for (auto [i, k] : pairs) {
        if (i == k || (samples.at(i) - samples.at(k)).norm() == 0.0)
            throw std::runtime_error("degenerate Lipschitz pair");
    }
}

ParamGrid ParamGrid::axis_pairs(const std::vector<Eigen::VectorXd>& base, double h, double gamma) {
    ParamGrid g;
    g.gamma = gamma;
    for (const auto& w : base) {
        for (int axis = 0; axis < w.size(); ++axis) {
            Eigen::VectorXd wp = w;
            wp[axis] += h;
            if (wp.norm() > 2.0) wp[axis] -= 2.0 * h;  // stay inside the annulus
            int i0 = int(g.samples.size());
            g.samples.push_back(w);
            g.samples.push_back(wp);
            g.pairs.emplace_back(i0, i0 + 1);
        }
    }
    return g;
}

double lip_gamma_norm(const std::vector<TravelingField>& fields, const ParamGrid& grid, double s) {
    if (fields.size() != grid.samples.size())
        throw std::invalid_argument("lip_gamma_norm: one field per grid sample required");
    if (fields.empty()) throw std::invalid_argument("lip_gamma_norm: empty grid");
    grid.check();
    double sup = 0.0;
    for (const auto& f : fields) sup = std::max(sup, sobolev_norm(f, s));
    double lip = 0.0;
    for (auto [i, k] : grid.pairs) {
        TravelingField d = fields[i] - fields[k];
        double q = sobolev_norm(d, s - 1.0) / (grid.samples[i] - grid.samples[k]).norm();
        lip = std::max(lip, q);
    }
    return sup + grid.gamma * lip;
}

nlohmann::json field_to_json(const TravelingField& f) {
    nlohmann::json j;
    j["nu"] = f.lat->nu();
    j["K_trunc"] = f.lat->K();
    nlohmann::json wv = nlohmann::json::array();
    for (const auto& v : f.lat->mom().jbar) wv.push_back({v[0], v[1]});
    j["wave_vectors"] = wv;
    nlohmann::json coeffs = nlohmann::json::array();
    for (int i = 0; i < f.lat->size(); ++i) {
        if (f.a[i] == cplx(0.0)) continue;
        nlohmann::json e = nlohmann::json::array();
        nlohmann::json l = nlohmann::json::array();
        for (int k = 0; k < f.lat->nu(); ++k) l.push_back(f.lat->ell(i)[k]);
        e.push_back(l);
        e.push_back(f.a[i].real());
        e.push_back(f.a[i].imag());
        coeffs.push_back(e);
    }
    j["coeffs"] = coeffs;
    return j;
}

TravelingField field_from_json(const nlohmann::json& j) {
    MomentumMap mom;
    for (const auto& v : j.at("wave_vectors")) mom.jbar.push_back({v.at(0).get<int>(), v.at(1).get<int>()});
    if (int(mom.jbar.size()) != j.at("nu").get<int>())
        throw std::runtime_error("field json: nu does not match wave_vectors");
    auto lat = make_lattice(mom, j.at("K_trunc").get<int>());
    TravelingField f(lat);
    std::vector<int> ell(lat->nu());
    for (const auto& e : j.at("coeffs")) {
        const auto& l = e.at(0);
        if (int(l.size()) != lat->nu()) throw std::runtime_error("field json: bad mode index size");
        for (int k = 0; k < lat->nu(); ++k) ell[k] = l.at(k).get<int>();
        int idx = lat->index_of(ell);
        if (idx < 0) throw std::runtime_error("field json: mode outside truncation");
        f.a[idx] = cplx(e.at(1).get<double>(), e.at(2).get<double>());
    }
    if (!f.zero_average_ok())
        throw std::runtime_error("field json: zero-average invariant violated");
    if (!f.reality_ok())
        throw std::runtime_error("field json: reality invariant violated");
    return f;
}

TravelingField random_field(const LatPtr& lat, Rng& rng, double decay, Parity force) {
    TravelingField f(lat);
    for (int i = 0; i < lat->size(); ++i) {
        if (!lat->active(i)) continue;
        int ni = lat->neg(i);
        if (ni < i) continue;  // fill each +/- pair once
        double w = std::exp(-decay * lat->ell_inf(i));
        cplx v;
        switch (force) {
            case Parity::Even: v = cplx(w * rng.normal(), 0.0); break;  // even + real => real coeffs
            case Parity::Odd: v = cplx(0.0, w * rng.normal()); break;   // odd + real => imaginary coeffs
            default: v = cplx(w * rng.normal(), w * rng.normal()); break;
        }
        f.a[i] = v;
        f.a[ni] = (force == Parity::Odd) ? -v : std::conj(v);
        if (ni == i) f.a[i] = cplx(v.real(), 0.0);  // self-paired mode must be real
    }
    if (force == Parity::Odd) {
        // reality: u(-l) = conj(u(l)); odd: u(-l) = -u(l) => coefficients imaginary
        for (int i = 0; i < lat->size(); ++i) f.a[i] = cplx(0.0, f.a[i].imag());
    }
    return f;
}

}  // namespace bpl
