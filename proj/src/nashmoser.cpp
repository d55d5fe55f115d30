#include "bpl/nashmoser.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bpl {

const char* to_string(NewtonOutcome o) {
    switch (o) {
        case NewtonOutcome::converged: return "converged";
        case NewtonOutcome::stalled: return "stalled";
        case NewtonOutcome::resonance_exit: return "resonance_exit";
        case NewtonOutcome::max_iter: return "max_iter";
    }
    return "unknown";
}

std::vector<std::string> smallness_report(const ProblemConfig& cfg) {
    std::vector<std::string> out;
    const double gamma = cfg.gamma();
    const double tau1 = 2.0 * cfg.tau + 3.0;
    const double taubar = tau1 + cfg.sigma_bar;
    double lhs1 = std::pow(cfg.N0_kam, tau1) * cfg.eps() / gamma;
    double lhs2 = std::pow(cfg.N0_kam, taubar) / cfg.lambda;
    std::ostringstream os;
    if (lhs1 > cfg.delta_smallness) {
        os << "analytic smallness N0^tau1 eps/gamma = " << lhs1 << " exceeds delta = "
           << cfg.delta_smallness << " (advisory only)";
        out.push_back(os.str());
        os.str("");
    }
    if (lhs2 > cfg.delta_smallness) {
        os << "analytic smallness N0^taubar/lambda = " << lhs2 << " exceeds delta = "
           << cfg.delta_smallness << " (advisory only)";
        out.push_back(os.str());
    }
    return out;
}

NewtonRun nash_moser_solve(const ProblemConfig& cfg, const Eigen::VectorXd& omega,
                           const TravelingField& forcing, const NewtonOptions& opt) {
    NewtonRun run;
    run.threshold = opt.tol_factor * std::pow(cfg.lambda, 1.0 - cfg.c_small);

    // first-order non-resonance gate at entry
    if (!check_omega_gamma(omega, cfg, cfg.K_trunc)) {
        run.outcome = NewtonOutcome::resonance_exit;
        run.message = "frequency fails the first-order non-resonance gate";
        return run;
    }

    try {
        ApproxSolution app = build_v_app(cfg, omega, forcing);
        // regime gate: the construction assumes the recursion contracts; a
        // certified-but-small divisor can keep lambda om.l comparable to the
        // dispersion shift at this lambda and make the terms grow
        for (std::size_t k = 0; k + 1 < app.term_norms_s0.size(); ++k) {
            if (app.term_norms_s0[k + 1] > app.term_norms_s0[k]) {
                run.outcome = NewtonOutcome::resonance_exit;
                run.message = "approximation recursion does not contract at this frequency";
                return run;
            }
        }
        run.w = app.v_app;
    } catch (const std::runtime_error& e) {
        run.outcome = NewtonOutcome::resonance_exit;
        run.message = e.what();
        return run;
    }

    const double N0 = 1.0 / cfg.gamma();
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it <= opt.max_iter; ++it) {
        TravelingField Fw = functional_F(run.w, cfg, omega, forcing);
        double r = sobolev_norm(Fw, cfg.s0);
        run.residuals.push_back(r);
        if (r < run.threshold) {
            run.outcome = NewtonOutcome::converged;
            run.iterations = it;
            return run;
        }
        if (it == opt.max_iter) break;
        // truncated steps leave the high modes of the residual untouched
        // until the cutoff passes the truncation, so monotone contraction is
        // only expected for the untruncated scheme
        if (!opt.use_projectors && r > 0.9 * prev) {
            run.outcome = NewtonOutcome::stalled;
            run.iterations = it;
            std::ostringstream os;
            os << "residual stopped contracting at " << r;
            run.message = os.str();
            return run;
        }
        prev = r;

        try {
            LinearInverse inv = invert_linearized(run.w, cfg, omega, opt.method, opt.kam_steps);
            if (opt.method == InverseMethod::dense_lu) {
                run.rconds.push_back(inv.rcond);
                if (inv.rcond <= 0.0 || 1.0 / inv.rcond > cfg.cond_ceiling) {
                    run.outcome = NewtonOutcome::resonance_exit;
                    run.iterations = it;
                    std::ostringstream os;
                    os << "linearized operator condition estimate " << 1.0 / inv.rcond
                       << " exceeds ceiling " << cfg.cond_ceiling;
                    run.message = os.str();
                    return run;
                }
            }
            TravelingField rhs = Fw;
            if (opt.use_projectors) {
                double Nn = std::max(2.0, std::pow(N0, std::pow(1.5, it)));
                rhs = project_low(rhs, Nn);
                TravelingField h = inv.solve(rhs);
                h = project_low(h, Nn);
                run.step_norms.push_back(sobolev_norm(h, cfg.s0));
                run.w -= h;
            } else {
                TravelingField h = inv.solve(rhs);
                run.step_norms.push_back(sobolev_norm(h, cfg.s0));
                run.w -= h;
            }
        } catch (const ResonanceError& e) {
            run.outcome = NewtonOutcome::resonance_exit;
            run.iterations = it;
            run.message = e.what();
            return run;
        }
    }
    run.outcome = NewtonOutcome::max_iter;
    run.iterations = opt.max_iter;
    return run;
}

SweepResult theorem_sweep(const ProblemConfig& cfg_template, const std::vector<double>& lambdas,
                          int n_omega, std::uint64_t seed, const NewtonOptions& opt) {
    SweepResult sw;
    Rng rng(seed);
    std::vector<double> lx, ly;
    // shared frequency draws across lambda (see scaling_study): certify at
    // the strictest gamma so the same omega is admissible everywhere, and
    // require the approximation recursion to contract there so every run
    // starts inside the quantitative regime
    std::vector<Eigen::VectorXd> omegas;
    std::vector<int> draw_tries;
    {
        ProblemConfig strict = cfg_template;
        strict.lambda = *std::min_element(lambdas.begin(), lambdas.end());
        strict.validate();
        auto slat = strict.make_lat();
        TravelingField sf = strict.make_forcing(slat);
        for (int k = 0; k < n_omega; ++k) {
            int t = 0;
            omegas.push_back(sample_contracting_omega(strict, sf, rng, 100000, &t));
            draw_tries.push_back(t);
        }
    }
    for (double lam : lambdas) {
        ProblemConfig cfg = cfg_template;
        cfg.lambda = lam;
        cfg.validate();
        auto lat = cfg.make_lat();
        TravelingField f = cfg.make_forcing(lat);
        long tries = 0, accepted = 0;
        int fails = 0;
        for (int k = 0; k < n_omega; ++k) {
            const Eigen::VectorXd& om = omegas[k];
            tries += draw_tries[k];
            ++accepted;
            NewtonRun run = nash_moser_solve(cfg, om, f, opt);
            if (run.outcome != NewtonOutcome::converged) {
                ++fails;
                continue;
            }
            double amp = std::pow(lam, cfg.theta()) * sobolev_norm(run.w, cfg.s0);
            sw.lambdas.push_back(lam);
            sw.amplitudes.push_back(amp);
            sw.residuals.push_back(run.residuals.back());
            sw.gammas.push_back(cfg.gamma());
            lx.push_back(std::log(lam));
            ly.push_back(std::log(amp));
        }
        sw.attrition.push_back(tries > 0 ? double(tries - accepted) / double(tries) : 0.0);
        sw.failures.push_back(fails);
    }
    if (lx.size() >= 3) sw.amp_fit = fit_line(lx, ly);
    return sw;
}

}  // namespace bpl
