// Command line front end: approximate solutions, reduction diagnostics,
// Newton solves, amplitude sweeps, measure estimation, time-domain
// validation and report comparison.
//
// Exit codes: 0 success, 1 error, 2 non-resonance gate exit.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "bpl/nashmoser.hpp"
#include "bpl/report.hpp"
#include "bpl/validate.hpp"

using namespace bpl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitResonance = 2;

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    double lambda = 0.0;         // 0 = keep config value
    std::uint64_t seed = 1;
    std::string inverse = "dense_lu";
    bool reversible = false;
    int max_iter = 12;
    double tol = 1e-9;
    std::vector<double> lambdas;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_lambdas = false) {
    cmd->add_option("--config", a.config_path, "JSON or TOML problem configuration");
    cmd->add_option("--out", a.out_path, "report output path (JSON)");
    cmd->add_option("--lambda", a.lambda, "forcing frequency scale");
    cmd->add_option("--seed", a.seed, "random seed");
    cmd->add_option("--inverse", a.inverse, "linear inverse: dense_lu or reduction_chain")
        ->check(CLI::IsMember({"dense_lu", "reduction_chain"}));
    cmd->add_flag("--reversible", a.reversible, "even forcing / odd solution mode");
    cmd->add_option("--max-iter", a.max_iter, "Newton iteration cap");
    cmd->add_option("--tol", a.tol, "residual tolerance factor (times lambda^{1-c})");
    if (with_lambdas)
        cmd->add_option("--lambdas", a.lambdas, "list of lambda values")->delimiter(',');
}

ProblemConfig load_config(const CommonArgs& a) {
    ProblemConfig cfg;
    if (!a.config_path.empty()) {
        cfg = ProblemConfig::from_json(read_config_file(a.config_path));
    }
    if (a.lambda > 0.0) cfg.lambda = a.lambda;
    if (a.reversible) cfg.reversible = true;
    cfg.validate();
    return cfg;
}

void finish(const CommonArgs& a, nlohmann::json& report,
            std::chrono::steady_clock::time_point t0) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    report["meta"]["wall_ms"] = ms;
    if (!a.out_path.empty())
        write_json_file(a.out_path, report);
    else
        std::cout << report.dump(2) << "\n";
}

std::string csv_path(const std::string& out_path) {
    auto dot = out_path.find_last_of('.');
    return (dot == std::string::npos ? out_path : out_path.substr(0, dot)) + ".csv";
}

nlohmann::json vec_json(const std::vector<double>& v) { return nlohmann::json(v); }

NewtonOptions newton_options(const CommonArgs& a) {
    NewtonOptions opt;
    opt.method = inverse_method_from_string(a.inverse);
    opt.max_iter = a.max_iter;
    opt.tol_factor = a.tol;
    return opt;
}

int cmd_approx(const CommonArgs& a) {
    auto t0 = std::chrono::steady_clock::now();
    ProblemConfig cfg = load_config(a);
    auto lat = cfg.make_lat();
    TravelingField f = cfg.make_forcing(lat);
    Rng rng(a.seed);
    Eigen::VectorXd omega = sample_admissible_omega(cfg, rng);
    ApproxSolution sol = build_v_app(cfg, omega, f);

    nlohmann::json res;
    res["omega"] = std::vector<double>(omega.data(), omega.data() + omega.size());
    res["term_norms_s0"] = vec_json(sol.term_norms_s0);
    res["q_norm_s0"] = sobolev_norm(sol.q_N, cfg.s0);
    res["v_app_norm_s0"] = sobolev_norm(sol.v_app, cfg.s0);
    res["amplitude"] = std::pow(cfg.lambda, cfg.theta()) * sobolev_norm(sol.v_app, cfg.s0);
    res["consistency_rel"] = sol.consistency_rel;
    res["parity"] = to_string(parity(sol.v_app, 1e-9));
    res["v_app"] = field_to_json(sol.v_app);
    nlohmann::json rep = make_report("approx", cfg.to_json(), res, a.seed);
    finish(a, rep, t0);
    return kExitOk;
}

int cmd_reduce(const CommonArgs& a) {
    auto t0 = std::chrono::steady_clock::now();
    ProblemConfig cfg = load_config(a);
    auto lat = cfg.make_lat();
    TravelingField f = cfg.make_forcing(lat);
    Rng rng(a.seed);
    Eigen::VectorXd omega = sample_admissible_omega(cfg, rng);
    TravelingField w = build_v_app(cfg, omega, f).v_app;

    Straightening st = straighten_transport(w, cfg, omega);
    ReductionState rs = conjugate_to_L1(st, w, cfg, omega);
    lower_order(rs, cfg);
    kam_reduce(rs, cfg);

    double max_re = 0.0, sym_gap = 0.0;
    for (int i = 0; i < lat->size(); ++i) {
        if (!lat->active(i)) continue;
        max_re = std::max(max_re, std::abs(rs.mu[i].real()));
        sym_gap = std::max(sym_gap, std::abs(rs.mu[i] + std::conj(rs.mu[lat->neg(i)])));
    }

    nlohmann::json res;
    res["omega"] = std::vector<double>(omega.data(), omega.data() + omega.size());
    res["straighten_iterations"] = st.iterations;
    res["straighten_residual_rel"] = st.residual_rel;
    res["m_history"] = vec_json(st.m_history);
    res["b_norms"] = vec_json(st.b_norms);
    res["lowering_norms"] = vec_json(rs.lowering_norms);
    res["kam_norms"] = vec_json(rs.kam_norms);
    res["kam_ratios"] = vec_json(rs.kam_ratios);
    res["kam_steps"] = rs.kam_steps;
    res["min_divisor_ratio"] = rs.min_divisor_ratio;
    res["max_abs_re_mu"] = max_re;
    res["mu_conjugation_gap"] = sym_gap;
    res["stage_one_explicit_gap"] = stage_one_explicit_gap(st, w, cfg);
    nlohmann::json rep = make_report("reduce", cfg.to_json(), res, a.seed);
    finish(a, rep, t0);
    return kExitOk;
}

int cmd_solve(const CommonArgs& a) {
    auto t0 = std::chrono::steady_clock::now();
    ProblemConfig cfg = load_config(a);
    auto lat = cfg.make_lat();
    TravelingField f = cfg.make_forcing(lat);
    Rng rng(a.seed);
    Eigen::VectorXd omega = sample_admissible_omega(cfg, rng);
    NewtonOptions opt = newton_options(a);
    for (const auto& warn : smallness_report(cfg)) std::cerr << "warning: " << warn << "\n";
    NewtonRun run = nash_moser_solve(cfg, omega, f, opt);

    nlohmann::json res;
    res["omega"] = std::vector<double>(omega.data(), omega.data() + omega.size());
    res["outcome"] = to_string(run.outcome);
    res["message"] = run.message;
    res["iterations"] = run.iterations;
    res["residuals"] = vec_json(run.residuals);
    res["step_norms"] = vec_json(run.step_norms);
    res["rconds"] = vec_json(run.rconds);
    res["threshold"] = run.threshold;
    res["inverse"] = a.inverse;
    if (run.outcome == NewtonOutcome::converged) {
        res["amplitude"] = std::pow(cfg.lambda, cfg.theta()) * sobolev_norm(run.w, cfg.s0);
        res["parity"] = to_string(parity(run.w, 1e-9));
        res["w"] = field_to_json(run.w);
    }
    nlohmann::json rep = make_report("solve", cfg.to_json(), res, a.seed);
    finish(a, rep, t0);
    if (run.outcome == NewtonOutcome::resonance_exit) return kExitResonance;
    return run.outcome == NewtonOutcome::converged ? kExitOk : kExitError;
}

int cmd_sweep(const CommonArgs& a) {
    auto t0 = std::chrono::steady_clock::now();
    ProblemConfig cfg = load_config(a);
    std::vector<double> lambdas = a.lambdas;
    if (lambdas.empty()) lambdas = {1000.0, 3000.0, 10000.0, 30000.0};
    NewtonOptions opt = newton_options(a);
    SweepResult sw = theorem_sweep(cfg, lambdas, 3, a.seed, opt);

    nlohmann::json res;
    res["lambdas"] = vec_json(sw.lambdas);
    res["amplitudes"] = vec_json(sw.amplitudes);
    res["residuals"] = vec_json(sw.residuals);
    res["gammas"] = vec_json(sw.gammas);
    res["attrition"] = vec_json(sw.attrition);
    res["failures"] = sw.failures;
    res["amp_slope"] = sw.amp_fit.slope;
    res["amp_slope_stderr"] = sw.amp_fit.slope_stderr;
    res["expected_slope_low"] = cfg.alpha - 1.0;
    res["expected_slope_high"] = cfg.alpha - 1.0 + cfg.c_small;
    nlohmann::json rep = make_report("sweep", cfg.to_json(), res, a.seed);
    finish(a, rep, t0);

    if (!a.out_path.empty()) {
        std::ofstream csv(csv_path(a.out_path));
        csv << "lambda,amplitude,residual,gamma\n";
        for (std::size_t i = 0; i < sw.lambdas.size(); ++i)
            csv << sw.lambdas[i] << "," << sw.amplitudes[i] << "," << sw.residuals[i] << ","
                << sw.gammas[i] << "\n";
    }
    return kExitOk;
}

int cmd_measure(const CommonArgs& a) {
    auto t0 = std::chrono::steady_clock::now();
    ProblemConfig cfg = load_config(a);
    std::vector<double> gammas{1e-2, 3e-3, 1e-3};
    std::size_t n_samples = 10000;

    nlohmann::json rows = nlohmann::json::array();
    std::vector<std::array<double, 4>> csv_rows;
    for (double gm : gammas) {
        MeasureEstimate est = measure_fraction(
            [&](const Eigen::VectorXd& om) { return check_dc(om, gm, cfg.tau, 2 * cfg.K_trunc); },
            cfg.nu, n_samples, a.seed);
        nlohmann::json r;
        r["gamma"] = gm;
        r["excluded_fraction"] = est.excluded_fraction;
        r["ci_lo"] = est.ci_lo;
        r["ci_hi"] = est.ci_hi;
        r["ratio_to_gamma"] = est.excluded_fraction / gm;
        rows.push_back(r);
        csv_rows.push_back({gm, est.excluded_fraction, est.ci_lo, est.ci_hi});
    }
    nlohmann::json res;
    res["n_samples"] = n_samples;
    res["rows"] = rows;
    double cmax = 0.0;
    for (const auto& r : rows) cmax = std::max(cmax, r.at("ratio_to_gamma").get<double>());
    res["measure_constant"] = cmax;
    nlohmann::json rep = make_report("measure", cfg.to_json(), res, a.seed);
    finish(a, rep, t0);

    if (!a.out_path.empty()) {
        std::ofstream csv(csv_path(a.out_path));
        csv << "gamma,excluded_fraction,ci_lo,ci_hi\n";
        for (const auto& r : csv_rows)
            csv << r[0] << "," << r[1] << "," << r[2] << "," << r[3] << "\n";
    }
    return kExitOk;
}

int cmd_validate(const CommonArgs& a) {
    auto t0 = std::chrono::steady_clock::now();
    ProblemConfig cfg = load_config(a);
    auto lat = cfg.make_lat();
    TravelingField f = cfg.make_forcing(lat);
    Rng rng(a.seed);
    Eigen::VectorXd omega = sample_admissible_omega(cfg, rng);
    NewtonOptions opt = newton_options(a);
    NewtonRun run = nash_moser_solve(cfg, omega, f, opt);
    if (run.outcome == NewtonOutcome::resonance_exit) {
        std::cerr << "non-resonance gate exit: " << run.message << "\n";
        return kExitResonance;
    }
    if (run.outcome != NewtonOutcome::converged) {
        std::cerr << "solve did not converge: " << to_string(run.outcome) << "\n";
        return kExitError;
    }

    EvolutionResult ev = evolve_and_compare(run.w, cfg, omega, f);
    double rel = run.residuals.back() / std::pow(cfg.lambda, 1.0 - cfg.c_small);
    double proxy = std::max(rel, 1e-9);

    Straightening st = straighten_transport(run.w, cfg, omega);
    ReductionState rs = conjugate_to_L1(st, run.w, cfg, omega);
    lower_order(rs, cfg);
    kam_reduce(rs, cfg);
    StabilityResult sp = stability_probe(run.w, cfg, omega, rs.mu, a.seed + 1);

    nlohmann::json res;
    res["omega"] = std::vector<double>(omega.data(), omega.data() + omega.size());
    res["newton_residual"] = run.residuals.back();
    res["residual_proxy"] = proxy;
    res["times"] = vec_json(ev.times);
    res["defect_rel"] = vec_json(ev.defect_rel);
    res["max_defect"] = ev.max_defect;
    res["steps"] = ev.steps;
    res["dt"] = ev.dt;
    res["max_re_mu"] = sp.max_re_mu;
    res["growth"] = sp.growth;
    res["horizon"] = sp.horizon;
    nlohmann::json rep = make_report("validate", cfg.to_json(), res, a.seed);
    finish(a, rep, t0);

    if (!a.out_path.empty()) {
        std::ofstream csv(csv_path(a.out_path));
        csv << "t,defect_rel\n";
        for (std::size_t i = 0; i < ev.times.size(); ++i)
            csv << ev.times[i] << "," << ev.defect_rel[i] << "\n";
    }
    return kExitOk;
}

int cmd_compare(const std::string& pa, const std::string& pb, double tol) {
    nlohmann::json a = read_json_file(pa);
    nlohmann::json b = read_json_file(pb);
    if (a.value("format_version", "") != b.value("format_version", "")) {
        std::cerr << "format_version mismatch\n";
        return kExitError;
    }
    auto diffs = compare_reports(a, b, tol);
    for (const auto& d : diffs) std::cerr << d.path << ": " << d.detail << "\n";
    if (diffs.empty()) {
        std::cout << "reports agree within tolerance " << tol << "\n";
        return kExitOk;
    }
    std::cout << diffs.size() << " differences\n";
    return kExitError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral laboratory for forced traveling waves on the beta plane"};
    app.require_subcommand(1);

    CommonArgs a_approx, a_reduce, a_solve, a_sweep, a_measure, a_validate;
    add_common(app.add_subcommand("approx", "build the approximate solution"), a_approx);
    add_common(app.add_subcommand("reduce", "reduction diagnostics at the approximate solution"),
               a_reduce);
    add_common(app.add_subcommand("solve", "Newton solve of the truncated functional"), a_solve);
    add_common(app.add_subcommand("sweep", "amplitude scaling across lambda"), a_sweep, true);
    add_common(app.add_subcommand("measure", "excluded-frequency measure estimate"), a_measure);
    add_common(app.add_subcommand("validate", "time-domain check of a solved state"), a_validate);

    std::string cmp_a, cmp_b;
    double cmp_tol = 1e-8;
    auto* cmp = app.add_subcommand("compare", "compare two run reports");
    cmp->add_option("first", cmp_a, "first report")->required();
    cmp->add_option("second", cmp_b, "second report")->required();
    cmp->add_option("--tol", cmp_tol, "relative tolerance for numeric leaves");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("approx")) return cmd_approx(a_approx);
        if (app.got_subcommand("reduce")) return cmd_reduce(a_reduce);
        if (app.got_subcommand("solve")) return cmd_solve(a_solve);
        if (app.got_subcommand("sweep")) return cmd_sweep(a_sweep);
        if (app.got_subcommand("measure")) return cmd_measure(a_measure);
        if (app.got_subcommand("validate")) return cmd_validate(a_validate);
        if (app.got_subcommand("compare")) return cmd_compare(cmp_a, cmp_b, cmp_tol);
    } catch (const ResonanceError& e) {
        std::cerr << "non-resonance gate exit: " << e.what() << "\n";
        return kExitResonance;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
