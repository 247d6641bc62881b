// Acceptance suite: one check per stated criterion, each printing a single
// PASS/FAIL line with the measured quantities. The process exit code is the
// number of failed criteria.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "qpalm/analysis.hpp"
#include "qpalm/baselines.hpp"
#include "qpalm/instance_io.hpp"
#include "qpalm/metrics.hpp"
#include "qpalm/qpalm_core.hpp"
#include "qpalm/rng.hpp"
#include "qpalm/surrogate.hpp"

using namespace qpalm;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s criterion_%d (%s): %s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. Rate-band reproduction on a paper-scale QCQP run.
void criterion_rate_band() {
    const QcqpInstance inst = qcqp_generate(80, 30, 2.0, QcqpGenSpec{}, 7);
    const Problem problem = qcqp_make_problem(inst);
    const BoundsBundle bounds = qcqp_analytic_bounds(inst);

    QpalmConfig cfg;
    cfg.T = 1000;
    cfg.mode = ScheduleMode::Practical;
    cfg.c_alpha = 10.0;
    cfg.record_moreau = true;
    cfg.moreau_every = 10;
    const RunTrace trace = qpalm_run(problem, bounds, cfg);
    const AveragedCurves curves = averaged_curves(trace);

    std::ostringstream detail;
    bool pass = true;

    const auto stat_fit = envelope_fit(curves.stationarity, FitMode::FreeInBand);
    if (stat_fit && stat_fit->exponent >= -0.70 && stat_fit->exponent <= -0.30) {
        detail << "stationarity exponent " << fmt(stat_fit->exponent);
    } else {
        pass = false;
        detail << "stationarity fit " << (stat_fit ? fmt(stat_fit->exponent) : "unavailable");
    }

    const auto comp_fit = envelope_fit(curves.complementarity, FitMode::FreeInBand);
    if (comp_fit && comp_fit->exponent >= -0.70 && comp_fit->exponent <= -0.30) {
        detail << ", complementarity exponent " << fmt(comp_fit->exponent);
    } else {
        pass = false;
        int positive = 0;
        for (const MetricPoint& pt : curves.complementarity)
            if (pt.value > 0.0) ++positive;
        detail << ", complementarity fit unavailable (" << positive
               << " positive points: with lambda^1 = 0 the running sum of <lambda^t, g(x^t)> "
                  "decomposes into nonnegative per-epoch sums of squares, so the signed averaged "
                  "complementarity curve never goes positive for this update rule)";
        // Supplementary diagnostic only: envelope of the magnitude curve.
        std::vector<MetricPoint> magnitude;
        double acc = 0.0;
        int t = 0;
        for (const TraceRow& row : trace.rows) {
            acc += std::abs(row.comp);
            ++t;
            magnitude.push_back({t, acc / t});
        }
        if (const auto mag_fit = envelope_fit(magnitude, FitMode::FreeInBand))
            detail << "; |comp| magnitude-curve exponent " << fmt(mag_fit->exponent)
                   << " [diagnostic only]";
    }

    const auto viol_fit = envelope_fit(curves.violation, FitMode::FixedThird);
    const double slope = loglog_slope(curves.violation, cfg.T / 10.0, cfg.T);
    if (viol_fit && viol_fit->majorizes && std::isfinite(slope) && slope <= -0.25) {
        detail << ", violation majorized by " << fmt(viol_fit->coefficient)
               << "*T^-1/3 with last-decade slope " << fmt(slope);
    } else {
        pass = false;
        detail << ", violation check failed (slope " << fmt(slope) << ", fit "
               << (viol_fit ? (viol_fit->majorizes ? "majorizes" : "does not majorize")
                            : "unavailable")
               << ")";
    }

    report(1, "rate-band reproduction", pass, detail.str());
}

// ---------------------------------------------------------------------------
// 2. Tiny instance against a dense feasible-grid oracle.
void criterion_grid_oracle() {
    const QcqpInstance inst = qcqp_generate(2, 1, 1.0, QcqpGenSpec{}, 3);
    const Problem problem = qcqp_make_problem(inst);
    const BoundsBundle bounds = qcqp_analytic_bounds(inst);

    // 401 x 401 grid over the box; best objective over feasible nodes.
    const int grid_points = 401;
    const double R = inst.half_width;
    double grid_best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < grid_points; ++a) {
        for (int b = 0; b < grid_points; ++b) {
            Vec x(2);
            x << -R + 2.0 * R * a / (grid_points - 1), -R + 2.0 * R * b / (grid_points - 1);
            if (inst.eval_constraint(0, x) <= 0.0)
                grid_best = std::min(grid_best, inst.eval_objective(x));
        }
    }

    QpalmConfig cfg;
    cfg.T = 500;
    cfg.c_alpha = 10.0;
    const RunTrace trace = qpalm_run(problem, bounds, cfg);
    const double f_final = problem.f(trace.final_x);
    const double violation = problem.constraint_values(trace.final_x).maxCoeff();
    const double alpha = make_schedule(cfg.T, ScheduleMode::Practical, nullptr, cfg.c_alpha).alpha;
    const double residual = kkt_residual(problem, trace.final_x, trace.final_lambda, alpha).norm();

    const bool pass =
        std::abs(f_final - grid_best) <= 1e-2 && violation <= 1e-3 && residual <= 1e-2;
    report(2, "grid-oracle equivalence", pass,
           "grid f* = " + fmt(grid_best) + ", |f - f*| = " + fmt(std::abs(f_final - grid_best)) +
               " (tol 1e-2), violation = " + fmt(violation) + " (tol 1e-3), ||R_alpha|| = " +
               fmt(residual) + " (tol 1e-2)");
}

// ---------------------------------------------------------------------------
// 3. Theory-schedule invariant suite on an engineered regular instance.
void criterion_theory_invariants() {
    QcqpInstance inst;
    inst.n = 2;
    inst.p = 1;
    inst.half_width = 0.25;
    Mat q0(2, 2);
    q0 << 1.0, 0.0, 0.0, -0.3;
    inst.Q = {q0, Mat::Identity(2, 2)};
    Vec c0(2), c1(2);
    c0 << -0.5, -0.5;
    c1 << 0.1, 0.0;
    inst.c = {c0, c1};
    inst.x_star = Vec::Constant(2, -0.1);
    inst.delta = Vec::Constant(1, 0.05);
    inst.r = Vec(1);
    inst.r[0] = 0.5 * inst.x_star.dot(inst.Q[1] * inst.x_star) + c1.dot(inst.x_star) +
                inst.delta[0];

    const Problem problem = qcqp_make_problem(inst);
    const BoundsBundle bounds = qcqp_analytic_bounds(inst);
    const double pad = 0.01;
    const ConstantsBundle constants = compute_constants(bounds, problem.moduli, pad);

    const int T = 1000;
    const TheoryTCheck t_check = theory_t_check(constants, T);

    QpalmConfig cfg;
    cfg.T = T;
    cfg.mode = ScheduleMode::Theory;
    cfg.pad = pad;
    cfg.inner.step_tol = 1e-8;
    const RunTrace trace = qpalm_run(problem, bounds, cfg);
    const Schedule schedule = make_schedule(T, ScheduleMode::Theory, &constants, 0.0);

    const double slack = 1e-8;
    int violations = 0;
    std::ostringstream detail;

    if (!(constants.rho < 1.0) || !t_check.ok) ++violations;
    detail << "rho = " << fmt(constants.rho) << ", T_min = " << fmt(t_check.t_min);

    // lambda >= 0 exactly, tracked over the entire run.
    if (trace.min_multiplier < 0.0) ++violations;

    // componentwise and norm drift bounds
    double comp_drift = 0.0, norm_drift = 0.0, step_worst = 0.0, lam_worst = 0.0;
    std::vector<Vec> lams = trace.multipliers;
    lams.push_back(trace.final_lambda);
    for (std::size_t k = 0; k + 1 < lams.size(); ++k) {
        comp_drift = std::max(comp_drift, (lams[k + 1] - lams[k]).cwiseAbs().maxCoeff());
        norm_drift = std::max(norm_drift, std::abs(lams[k + 1].norm() - lams[k].norm()));
    }
    for (const Vec& lam : lams) lam_worst = std::max(lam_worst, lam.norm());
    for (const TraceRow& row : trace.rows) step_worst = std::max(step_worst, row.step_norm);

    if (comp_drift > constants.gamma2 * schedule.sigma + slack) ++violations;
    if (norm_drift > constants.gamma1 * schedule.sigma + slack) ++violations;
    const double step_bound = constants.gamma6 * std::pow(static_cast<double>(T), -1.0 / 3.0);
    if (step_worst > step_bound + slack) ++violations;
    if (lam_worst > constants.multiplier_bound + slack) ++violations;
    detail << ", drift " << fmt(comp_drift) << "/" << fmt(constants.gamma2 * schedule.sigma)
           << ", norm drift " << fmt(norm_drift) << "/" << fmt(constants.gamma1 * schedule.sigma)
           << ", step " << fmt(step_worst) << "/" << fmt(step_bound) << ", |lambda| "
           << fmt(lam_worst) << "/" << fmt(constants.multiplier_bound);

    // constraint-sum inequality, per constraint
    double step_sum = 0.0;
    for (const TraceRow& row : trace.rows) step_sum += row.step_norm;
    const double reach = bounds.grad_g_bound + 0.5 * constants.kappa_h * bounds.diameter;
    for (int i = 0; i < problem.p; ++i) {
        double g_sum = 0.0;
        for (const TraceRow& row : trace.rows) g_sum += row.g[i];
        const double rhs = trace.final_lambda[i] / schedule.sigma + reach * step_sum;
        if (g_sum > rhs + slack) ++violations;
    }

    // complementarity-sum inequality
    double comp_sum = 0.0;
    for (const TraceRow& row : trace.rows) comp_sum += row.comp;
    const double comp_rhs =
        0.5 * schedule.sigma * bounds.constraint_norm * bounds.constraint_norm * T +
        bounds.grad_f_bound * bounds.grad_f_bound * T / (2.0 * schedule.alpha);
    if (-comp_sum > comp_rhs + slack) ++violations;

    detail << ", violations = " << violations;
    report(3, "theory-schedule invariants", violations == 0, detail.str());
}

// ---------------------------------------------------------------------------
// 4. Surrogate correctness at the stated sample counts.
void criterion_surrogate() {
    const QcqpInstance inst = qcqp_generate(10, 4, 1.0, QcqpGenSpec{}, 43);
    const Problem problem = qcqp_make_problem(inst);
    Rng rng(derive_seed(43, "surrogate-acceptance"));
    auto box_point = [&]() {
        Vec x(problem.n);
        for (int i = 0; i < problem.n; ++i)
            x[i] = rng.uniform(problem.box.lower[i], problem.box.upper[i]);
        return x;
    };

    const double sigma = 0.05, alpha = 5.0, pad = 0.1;
    int minorization_failures = 0;
    for (int pair = 0; pair < 10000; ++pair) {
        const Vec anchor = box_point();
        const Vec x = box_point();
        const SurrogateModel model =
            build_surrogate(problem, anchor, Vec::Zero(problem.p), pad, sigma, alpha);
        for (int i = 1; i <= problem.p; ++i)
            if (model.eval_q(i, x) > problem.g[i - 1](x) + 1e-8) ++minorization_failures;
    }

    const Vec anchor = box_point();
    const Vec lambda = [&] {
        Vec lam(problem.p);
        for (int i = 0; i < problem.p; ++i) lam[i] = rng.uniform(0.0, 2.0);
        return lam;
    }();
    const SurrogateModel model = build_surrogate(problem, anchor, lambda, pad, sigma, alpha);

    int convexity_failures = 0;
    for (int seg = 0; seg < 1000; ++seg) {
        const Vec x = box_point();
        const Vec y = box_point();
        const double mid = model.subproblem_value(0.5 * (x + y));
        const double chord = 0.5 * model.subproblem_value(x) + 0.5 * model.subproblem_value(y);
        if (mid > chord - alpha / 8.0 * (x - y).squaredNorm() + 1e-10) ++convexity_failures;
    }

    double worst_rel = 0.0;
    for (int point = 0; point < 100; ++point) {
        const Vec x = box_point();
        Vec fd(problem.n);
        Vec probe = x;
        for (int j = 0; j < problem.n; ++j) {
            const double h = 1e-5 * (1.0 + std::abs(x[j]));
            probe[j] = x[j] + h;
            const double hi = model.subproblem_value(probe);
            probe[j] = x[j] - h;
            const double lo = model.subproblem_value(probe);
            probe[j] = x[j];
            fd[j] = (hi - lo) / (2.0 * h);
        }
        const Vec grad = model.subproblem_gradient(x);
        worst_rel = std::max(worst_rel, (grad - fd).norm() / std::max(1.0, fd.norm()));
    }

    const bool pass =
        minorization_failures == 0 && convexity_failures == 0 && worst_rel <= 1e-5;
    report(4, "surrogate correctness", pass,
           "minorization failures " + std::to_string(minorization_failures) +
               "/40000, convexity failures " + std::to_string(convexity_failures) +
               "/1000, worst gradient rel err " + fmt(worst_rel) + " (tol 1e-5)");
}

// ---------------------------------------------------------------------------
// 5. APG contract on a strongly convex quadratic.
void criterion_apg() {
    const int n = 20;
    Rng rng(derive_seed(5, "apg-acceptance"));
    Vec diag(n);
    for (int i = 0; i < n; ++i) diag[i] = 1.0 + 9.0 * i / (n - 1);
    const Vec b = rng.normal_vec(n);
    const Vec x_opt = (b.array() / diag.array()).matrix();
    const auto value = [&](const Vec& x) { return 0.5 * x.dot(diag.asDiagonal() * x) - b.dot(x); };
    const auto gradient = [&](const Vec& x) { return Vec(diag.asDiagonal() * x - b); };
    const double f_opt = value(x_opt);

    const BoxSet box = BoxSet::cube(n, 100.0);
    ApgConfig cfg;
    cfg.max_iter = 200;
    cfg.step_tol = 1e-16;
    cfg.record_audit = true;
    const Vec x0 = Vec::Zero(n);
    const ApgResult res = apg_minimize(
        value, gradient, [&box](const Vec& z) { return box.project(z); }, x0, cfg);

    const double ratio = (res.value - f_opt) / (value(x0) - f_opt);
    int audit_failures = 0, feasibility_failures = 0;
    for (const ApgAuditEntry& entry : res.audit) {
        if (!apg_audit_holds(entry, value, gradient)) ++audit_failures;
        if (!box.contains(entry.x_next)) ++feasibility_failures;
    }

    const bool pass = ratio <= 1e-8 && audit_failures == 0 && feasibility_failures == 0;
    report(5, "accelerated projected gradient contract", pass,
           "value-error ratio at iter 200 = " + fmt(ratio) + " (tol 1e-8), audit failures " +
               std::to_string(audit_failures) + ", feasibility failures " +
               std::to_string(feasibility_failures));
}

// ---------------------------------------------------------------------------
// 6. Directional comparison over 20 seeded instances with equal budgets.
void criterion_comparison() {
    const double budget = 10.0;
    std::vector<RunOutcome> outcomes;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const QcqpInstance inst = qcqp_generate(80, 30, 2.0, QcqpGenSpec{}, seed);
        const Problem problem = qcqp_make_problem(inst);
        const BoundsBundle bounds = qcqp_analytic_bounds(inst);
        const std::string id = "seed" + std::to_string(seed);

        QpalmConfig qcfg;
        qcfg.T = 500;
        qcfg.c_alpha = 10.0;
        qcfg.timing = true;
        qcfg.budget_s = budget;
        qcfg.record_kkt_residual = false;
        outcomes.push_back(outcome_from_trace(qpalm_run(problem, bounds, qcfg), "qpalm", id));

        PalmConfig pcfg;
        pcfg.T = 500;
        pcfg.c_alpha = 10.0;
        pcfg.timing = true;
        pcfg.budget_s = budget;
        outcomes.push_back(outcome_from_trace(palm_run(problem, bounds, pcfg), "palm", id));

        AlmConfig acfg;
        acfg.outer_iters = 30;
        acfg.timing = true;
        acfg.budget_s = budget;
        outcomes.push_back(outcome_from_trace(alm_run(problem, bounds, acfg), "alm", id));
    }

    std::map<std::string, double> best_decrease;
    for (const RunOutcome& o : outcomes) {
        const double d = o.initial_objective - o.best_objective;
        auto [it, fresh] = best_decrease.try_emplace(o.instance_id, d);
        if (!fresh) it->second = std::max(it->second, d);
    }
    std::map<std::string, std::vector<double>> times;
    for (const RunOutcome& o : outcomes)
        times[o.solver].push_back(time_to_success(o, 0.8 * best_decrease.at(o.instance_id)));
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    const double qpalm_med = median(times["qpalm"]);
    const double palm_med = median(times["palm"]);
    const double alm_med = median(times["alm"]);

    const bool pass = qpalm_med < palm_med && qpalm_med < alm_med;
    report(6, "directional comparison", pass,
           "median time-to-success (s): qpalm " + fmt(qpalm_med) + ", palm " + fmt(palm_med) +
               ", alm " + fmt(alm_med) +
               (pass ? "" : " [calibration flag, not a correctness failure; full data above]"));
}

// ---------------------------------------------------------------------------
// 7. Neyman-Pearson trend check at desk scale.
void criterion_np_trend() {
    const NpInstance inst = np_synth_generate(500, 500, 50, 1.0, 3, 0.2, 10.0);
    const Problem problem = np_make_problem(inst);
    const BoundsBundle bounds = np_bounds(inst);

    QpalmConfig cfg;
    cfg.T = 500;
    cfg.c_alpha = 10.0;
    cfg.record_moreau = true;
    cfg.moreau_every = 10;
    const RunTrace trace = qpalm_run(problem, bounds, cfg);
    const AveragedCurves curves = averaged_curves(trace);

    bool pass = true;
    std::ostringstream detail;

    // (a) averaged constraint violation below zero within the budget
    double best_avg_violation = std::numeric_limits<double>::infinity();
    for (const MetricPoint& pt : curves.violation)
        best_avg_violation = std::min(best_avg_violation, pt.value);
    if (!(best_avg_violation < 0.0)) pass = false;
    detail << "avg violation reaches " << fmt(best_avg_violation);

    // (b) curves settle over the last half: no step rises by more than 5% of
    // the curve's magnitude scale there
    auto worst_rise = [](const std::vector<MetricPoint>& curve) {
        if (curve.size() < 4) return 0.0;
        const std::size_t half = curve.size() / 2;
        double scale = 0.0;
        for (std::size_t k = half; k < curve.size(); ++k)
            scale = std::max(scale, std::abs(curve[k].value));
        if (scale == 0.0) return 0.0;
        double rise = 0.0;
        for (std::size_t k = half + 1; k < curve.size(); ++k)
            rise = std::max(rise, curve[k].value - curve[k - 1].value);
        return rise / scale;
    };
    const double rise_a = worst_rise(curves.stationarity);
    const double rise_b = worst_rise(curves.violation);
    const double rise_c = worst_rise(curves.complementarity);
    if (rise_a > 0.05 || rise_b > 0.05 || rise_c > 0.05) pass = false;
    detail << ", last-half rises " << fmt(rise_a) << "/" << fmt(rise_b) << "/" << fmt(rise_c)
           << " (tol 0.05)";

    // (c) exponents inside the band wherever a curve has a positive part
    for (const auto& [name, curve, mode] :
         {std::tuple{"stationarity", &curves.stationarity, FitMode::FreeInBand},
          std::tuple{"violation", &curves.violation, FitMode::FixedThird},
          std::tuple{"complementarity", &curves.complementarity, FitMode::FreeInBand}}) {
        const auto fit = envelope_fit(*curve, mode);
        if (!fit) continue; // curve not positive: exponent clause does not apply
        if (fit->exponent < -0.70 || fit->exponent > -0.30) pass = false;
        detail << ", " << name << " exponent " << fmt(fit->exponent);
    }

    report(7, "classification trend check", pass, detail.str());
}

// ---------------------------------------------------------------------------
// 8. Byte-level determinism of the solve command.
void criterion_determinism() {
#ifndef QPALM_CLI_PATH
    report(8, "solve determinism", false, "CLI path not configured");
#else
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("qpalm_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);

    const std::string inst = (dir / "inst.json").string();
    auto run = [&](const std::string& args) {
        const std::string cmd = std::string(QPALM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    auto slurp = [](const std::string& path) {
        std::ifstream in(path);
        std::ostringstream out;
        out << in.rdbuf();
        return out.str();
    };

    bool pass = run("generate --family qcqp --spec n=20 p=8 R=1.5 --seed 12 --out " + inst) == 0;
    const std::string solve = "solve --instance " + inst +
                              " --solver qpalm --T 100 --c-alpha 10 --seed 2 --out ";
    pass = pass && run(solve + (dir / "a").string()) == 0;
    pass = pass && run(solve + (dir / "b").string()) == 0;
    const std::string bytes_a = slurp((dir / "a.csv").string());
    pass = pass && !bytes_a.empty() && bytes_a == slurp((dir / "b.csv").string());
    report(8, "solve determinism", pass,
           pass ? "two identical-flag runs produced byte-identical trace CSVs"
                : "traces differ or the CLI failed");
    fs::remove_all(dir);
#endif
}

} // namespace

int main() {
    try {
        criterion_rate_band();
        criterion_grid_oracle();
        criterion_theory_invariants();
        criterion_surrogate();
        criterion_apg();
        criterion_comparison();
        criterion_np_trend();
        criterion_determinism();
    } catch (const std::exception& err) {
        std::cerr << "acceptance suite aborted: " << err.what() << "\n";
        return 99;
    }
    if (g_failures)
        std::printf("%d criterion(s) failed\n", g_failures);
    else
        std::printf("all criteria passed\n");
    return g_failures;
}
