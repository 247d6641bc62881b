// Command-line driver: instance generation, solver runs, solver comparison,
// and trace validation. Every output embeds the originating configuration and
// the content digest of the instance it came from.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "qpalm/analysis.hpp"
#include "qpalm/baselines.hpp"
#include "qpalm/instance_io.hpp"
#include "qpalm/metrics.hpp"
#include "qpalm/qpalm_core.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qpalm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitTheory = 4;

std::map<std::string, std::string> parse_spec(const std::vector<std::string>& pairs) {
    std::map<std::string, std::string> spec;
    for (const std::string& pair : pairs) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos)
            throw InputError("--spec expects key=value, got '" + pair + "'");
        spec[pair.substr(0, eq)] = pair.substr(eq + 1);
    }
    return spec;
}

double spec_num(const std::map<std::string, std::string>& spec, const std::string& key,
                double fallback) {
    const auto it = spec.find(key);
    return it == spec.end() ? fallback : std::stod(it->second);
}

void refuse_existing(const std::string& path, bool force) {
    if (!force && fs::exists(path))
        throw InputError("refusing to overwrite existing " + path + " (pass --force)");
}

void write_text(const std::string& path, const std::string& text, bool force) {
    refuse_existing(path, force);
    std::ofstream out(path);
    if (!out) throw InputError("cannot open " + path + " for writing");
    out << text;
}

json build_instance_doc(const std::string& family, const std::map<std::string, std::string>& spec,
                        std::uint64_t seed) {
    if (family == "qcqp") {
        QcqpGenSpec gen;
        gen.objective_curvature = spec_num(spec, "L0", gen.objective_curvature);
        gen.constraint_curvature = spec_num(spec, "Lg", gen.constraint_curvature);
        gen.neg_fraction_obj = spec_num(spec, "neg_frac_obj", gen.neg_fraction_obj);
        gen.indefinite_constraints =
            static_cast<int>(spec_num(spec, "indef_count", gen.indefinite_constraints));
        gen.neg_fraction_constraint = spec_num(spec, "neg_frac_con", gen.neg_fraction_constraint);
        gen.tau_obj = spec_num(spec, "tau0", gen.tau_obj);
        gen.tau_con = spec_num(spec, "taug", gen.tau_con);
        gen.delta_min = spec_num(spec, "delta_min", gen.delta_min);
        gen.delta_max = spec_num(spec, "delta_max", gen.delta_max);
        const int n = static_cast<int>(spec_num(spec, "n", 80));
        const int p = static_cast<int>(spec_num(spec, "p", 30));
        const double R = spec_num(spec, "R", 2.0);
        return instance_document(qcqp_generate(n, p, R, gen, seed));
    }
    if (family == "np") {
        if (spec.count("path")) {
            const auto rule_it = spec.find("rule");
            const LabelRule rule = (rule_it != spec.end() && rule_it->second == "odd_even")
                                       ? LabelRule::OddEven
                                       : LabelRule::Sign;
            return instance_document(np_load_dataset(
                spec.at("path"), rule, spec_num(spec, "tau", 0.2), spec_num(spec, "R_box", 10.0),
                static_cast<int>(spec_num(spec, "max_rows", 5000)), seed));
        }
        return instance_document(np_synth_generate(
            static_cast<int>(spec_num(spec, "N0", 500)), static_cast<int>(spec_num(spec, "N1", 500)),
            static_cast<int>(spec_num(spec, "d", 50)), spec_num(spec, "sep", 1.0), seed,
            spec_num(spec, "tau", 0.2), spec_num(spec, "R_box", 10.0)));
    }
    throw InputError("unknown family '" + family + "' (expected qcqp or np)");
}

struct SolveFlags {
    std::string solver = "qpalm";
    std::string mode = "practical";
    int T = 1000;
    double c_alpha = 10.0;
    double pad = 0.1;
    std::uint64_t seed = 0;
    double inner_tol = 1e-6;
    int moreau_every = 0; // 0 disables the Moreau diagnostic
    bool timing = false;
    double budget_s = 0.0;
    int alm_outers = 30;
    std::string start = "default"; // default | zero | xhat
};

std::optional<Vec> start_point(const SolveFlags& flags, const InstanceFile& inst) {
    if (flags.start == "zero") return Vec::Zero(inst.problem.n);
    if (flags.start == "xhat") return inst.bounds.slater_point;
    if (flags.start != "default")
        throw InputError("--start must be one of default, zero, xhat");
    return std::nullopt; // solvers default to the strictly feasible point
}

RunTrace run_solver(const InstanceFile& inst, const SolveFlags& flags) {
    if (flags.solver == "qpalm") {
        QpalmConfig cfg;
        cfg.T = flags.T;
        cfg.mode = flags.mode == "theory" ? ScheduleMode::Theory : ScheduleMode::Practical;
        cfg.c_alpha = flags.c_alpha;
        cfg.pad = flags.pad;
        cfg.seed = flags.seed;
        cfg.inner.step_tol = flags.inner_tol;
        cfg.record_moreau = flags.moreau_every > 0;
        cfg.moreau_every = std::max(1, flags.moreau_every);
        cfg.timing = flags.timing;
        cfg.budget_s = flags.budget_s;
        cfg.initial_point = start_point(flags, inst);
        return qpalm_run(inst.problem, inst.bounds, cfg);
    }
    if (flags.solver == "palm") {
        PalmConfig cfg;
        cfg.T = flags.T;
        cfg.c_alpha = flags.c_alpha;
        cfg.inner.step_tol = flags.inner_tol;
        cfg.timing = flags.timing;
        cfg.budget_s = flags.budget_s;
        cfg.initial_point = start_point(flags, inst);
        return palm_run(inst.problem, inst.bounds, cfg);
    }
    if (flags.solver == "alm") {
        AlmConfig cfg;
        cfg.outer_iters = flags.alm_outers;
        cfg.inner.step_tol = flags.inner_tol;
        cfg.timing = flags.timing;
        cfg.budget_s = flags.budget_s;
        cfg.initial_point = start_point(flags, inst);
        return alm_run(inst.problem, inst.bounds, cfg);
    }
    throw InputError("unknown solver '" + flags.solver + "' (expected qpalm, palm or alm)");
}

json fitted_exponents(const RunTrace& trace) {
    json fits = json::object();
    const AveragedCurves curves = averaged_curves(trace);
    auto report = [](const std::optional<FitResult>& fit) -> json {
        if (!fit) return nullptr;
        return {{"exponent", fit->exponent},
                {"coefficient", fit->coefficient},
                {"residual", fit->residual},
                {"majorizes", fit->majorizes},
                {"points_used", fit->points_used},
                {"dropped_fraction", fit->dropped_fraction}};
    };
    fits["stationarity"] = report(envelope_fit(curves.stationarity, FitMode::FreeInBand));
    fits["complementarity"] = report(envelope_fit(curves.complementarity, FitMode::FreeInBand));
    fits["violation"] = report(envelope_fit(curves.violation, FitMode::FixedThird));
    return fits;
}

void write_run_outputs(const InstanceFile& inst, const SolveFlags& flags, const RunTrace& trace_in,
                       const std::string& out_prefix, bool force) {
    RunTrace trace = trace_in;
    trace.config_echo["instance_digest"] = inst.digest;
    trace.config_echo["family"] = inst.family;

    const std::string csv_path = out_prefix + ".csv";
    const std::string json_path = out_prefix + ".json";
    const std::string curves_path = out_prefix + "_curves.csv";
    refuse_existing(csv_path, force);
    refuse_existing(json_path, force);
    refuse_existing(curves_path, force);
    write_trace_csv(trace, csv_path);

    {
        std::ofstream out(curves_path);
        out << "# " << trace.config_echo.dump() << "\n";
        write_curves_csv(averaged_curves(trace), out);
    }

    json summary = trace_summary_json(trace);
    summary["solver"] = flags.solver;
    summary["instance_digest"] = inst.digest;
    summary["fitted_exponents"] = fitted_exponents(trace);
    std::ofstream out(json_path);
    out << summary.dump(2) << "\n";
}

int cmd_generate(const std::string& family, const std::vector<std::string>& spec_pairs,
                 std::uint64_t seed, const std::string& out, bool force) {
    refuse_existing(out, force);
    const json doc = build_instance_doc(family, parse_spec(spec_pairs), seed);
    save_instance(doc, out);
    const InstanceFile inst = load_instance(out);
    std::cout << "wrote " << out << "\n"
              << "  family=" << inst.family << " n=" << inst.problem.n << " p=" << inst.problem.p
              << " eps0=" << inst.bounds.slater_margin << " digest=" << inst.digest << "\n  moduli=[";
    for (int i = 0; i < inst.problem.moduli.size(); ++i)
        std::cout << (i ? "," : "") << inst.problem.moduli[i];
    std::cout << "]\n";
    return kExitOk;
}

int cmd_solve(const std::string& instance_path, const SolveFlags& flags, const std::string& out,
              bool force) {
    const InstanceFile inst = load_instance(instance_path);
    const RunTrace trace = run_solver(inst, flags);
    write_run_outputs(inst, flags, trace, out, force);
    std::cout << "wrote " << out << ".csv and " << out << ".json (" << trace.size() << " rows)\n";
    return kExitOk;
}

double median(std::vector<double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

int cmd_compare(const std::string& family, const std::vector<std::string>& spec_pairs,
                const std::vector<std::string>& instance_paths, std::vector<std::uint64_t> seeds,
                std::vector<std::string> solvers, SolveFlags flags, const std::string& out_dir,
                bool force) {
    if (solvers.empty()) throw InputError("--solvers must name at least one solver");
    fs::create_directories(out_dir);
    fs::create_directories(out_dir + "/traces");

    // Materialize instances: explicit files take precedence over seeded generation.
    std::vector<std::pair<std::string, InstanceFile>> instances;
    if (!instance_paths.empty()) {
        for (const auto& path : instance_paths)
            instances.emplace_back(fs::path(path).stem().string(), load_instance(path));
    } else {
        if (seeds.empty()) seeds = {1};
        const auto spec = parse_spec(spec_pairs);
        for (std::uint64_t seed : seeds) {
            const json doc = build_instance_doc(family, spec, seed);
            const std::string path = out_dir + "/instance_" + std::to_string(seed) + ".json";
            refuse_existing(path, force);
            save_instance(doc, path);
            instances.emplace_back("seed" + std::to_string(seed), load_instance(path));
        }
    }

    flags.timing = true;
    const json batch_echo = {{"command", "compare"},
                             {"solvers", solvers},
                             {"T", flags.T},
                             {"c_alpha", flags.c_alpha},
                             {"pad", flags.pad},
                             {"inner_tol", flags.inner_tol},
                             {"alm_outers", flags.alm_outers},
                             {"budget_s", flags.budget_s}};
    std::vector<RunOutcome> outcomes;
    json runs = json::array();
    std::ostringstream summaries;
    summaries << "# " << batch_echo.dump() << "\n";
    summaries << "instance,digest,solver,rows,truncated,wall_s,initial_f,best_f,decrease\n";

    for (const auto& [name, inst] : instances) {
        for (const std::string& solver : solvers) {
            SolveFlags run_flags = flags;
            run_flags.solver = solver;
            RunTrace trace;
            bool failed = false;
            std::string failure;
            try {
                trace = run_solver(inst, run_flags);
            } catch (const std::exception& err) {
                failed = true;
                failure = err.what();
            }
            json record = {{"instance", name},
                           {"digest", inst.digest},
                           {"solver", solver},
                           {"failed", failed}};
            if (failed) {
                record["error"] = failure;
                runs.push_back(record);
                continue;
            }
            trace.config_echo["instance_digest"] = inst.digest;
            write_trace_csv(trace, out_dir + "/traces/" + name + "_" + solver + ".csv");

            RunOutcome outcome = outcome_from_trace(trace, solver, name);
            summaries << name << ',' << inst.digest << ',' << solver << ',' << trace.size() << ','
                      << (trace.truncated_by_budget ? 1 : 0) << ',' << trace.wall_time_s << ','
                      << outcome.initial_objective << ',' << outcome.best_objective << ','
                      << (outcome.initial_objective - outcome.best_objective) << "\n";
            record["wall_s"] = trace.wall_time_s;
            record["best_f"] = outcome.best_objective;
            runs.push_back(record);
            outcomes.push_back(std::move(outcome));
        }
    }
    write_text(out_dir + "/summaries.csv", summaries.str(), true);

    json report;
    report["runs"] = runs;
    report["budget_s"] = flags.budget_s;
    report["solvers"] = solvers;

    if (!outcomes.empty() && solvers.size() >= 2) {
        // Success times per solver at the 80% decrease rule.
        std::map<std::string, double> best_decrease;
        for (const RunOutcome& o : outcomes) {
            const double d = o.initial_objective - o.best_objective;
            auto [it, fresh] = best_decrease.try_emplace(o.instance_id, d);
            if (!fresh) it->second = std::max(it->second, d);
        }
        std::map<std::string, std::vector<double>> times;
        for (const RunOutcome& o : outcomes)
            times[o.solver].push_back(time_to_success(o, 0.8 * best_decrease.at(o.instance_id)));
        json medians = json::object();
        for (auto& [solver, ts] : times) medians[solver] = median(ts);
        report["median_success_time_s"] = medians;

        std::vector<double> grid;
        const double top = flags.budget_s > 0.0 ? flags.budget_s : 60.0;
        for (int k = 0; k <= 60; ++k)
            grid.push_back(top * std::pow(10.0, -4.0 + 4.0 * k / 60.0));
        std::ostringstream profile_csv;
        profile_csv << "# " << batch_echo.dump() << "\n";
        profile_csv << "solver,budget_s,solved_fraction\n";
        for (const SolverProfile& profile : data_profile(outcomes, grid)) {
            for (const ProfilePoint& pt : profile.points)
                profile_csv << profile.solver << ',' << pt.budget_s << ',' << pt.solved_fraction
                            << "\n";
        }
        write_text(out_dir + "/profile.csv", profile_csv.str(), true);
    }

    if (instances.size() == 1 && !outcomes.empty()) {
        // Single deterministic problem: time-to-target with theta in [0.1, 0.8].
        double f_ref = std::numeric_limits<double>::infinity();
        for (const RunOutcome& o : outcomes) f_ref = std::min(f_ref, o.best_objective);
        std::vector<double> thetas;
        for (int k = 0; k <= 14; ++k) thetas.push_back(0.1 + 0.05 * k);
        std::ostringstream targets_csv;
        targets_csv << "# " << batch_echo.dump() << "\n";
        targets_csv << "solver,theta,time_s\n";
        for (const RunOutcome& o : outcomes) {
            if (!(o.initial_objective > f_ref)) continue;
            for (const TargetPoint& pt : time_to_target(o, f_ref, thetas))
                targets_csv << o.solver << ',' << pt.theta << ',' << pt.time_s << "\n";
        }
        write_text(out_dir + "/targets.csv", targets_csv.str(), true);
        report["f_ref"] = f_ref;
    }

    write_text(out_dir + "/compare.json", report.dump(2) + "\n", true);
    std::cout << "wrote " << out_dir << "/compare.json (" << outcomes.size() << " runs)\n";
    return kExitOk;
}

// Invariant checks on a finished run. Constants come from the instance file
// when given; theory runs additionally embed the full bundle in their echo.
int cmd_validate(const std::string& trace_path, const std::string& summary_path,
                 const std::string& instance_path, const std::string& out, bool force) {
    const RunTrace trace = read_trace_csv(trace_path);
    json summary;
    {
        std::ifstream in(summary_path);
        if (!in) throw InputError("cannot open summary " + summary_path);
        in >> summary;
    }

    json report;
    report["trace"] = trace_path;
    json checks = json::array();
    auto add_check = [&checks](const std::string& name, bool ok, const json& details) {
        checks.push_back({{"check", name}, {"pass", ok}, {"details", details}});
    };

    const json config = summary.value("config", json::object());
    const double sigma = config.value("sigma", 0.0);
    const double alpha = config.value("alpha", 0.0);
    const double slack = 1e-8;

    double min_lam_norm = 0.0;
    bool cpu_monotone = true;
    for (std::size_t k = 0; k < trace.rows.size(); ++k) {
        min_lam_norm = std::min(min_lam_norm, trace.rows[k].lam_norm);
        if (k > 0 && trace.rows[k].cpu_s < trace.rows[k - 1].cpu_s) cpu_monotone = false;
    }
    const double audit_min_lambda =
        summary.contains("run_audit") ? summary["run_audit"].value("min_multiplier", 0.0) : 0.0;
    add_check("multiplier_nonnegative", min_lam_norm >= 0.0 && audit_min_lambda >= 0.0,
              {{"min_lam_norm", min_lam_norm}, {"audit_min_multiplier", audit_min_lambda}});
    add_check("cpu_nondecreasing", cpu_monotone, json::object());

    std::optional<BoundsBundle> bounds;
    Vec moduli;
    if (!instance_path.empty()) {
        const InstanceFile inst = load_instance(instance_path);
        bounds = inst.bounds;
        moduli = inst.problem.moduli;
    }
    const double pad = config.value("pad", 0.1);
    if (bounds) {
        double kappa_h = 0.0;
        for (int i = 1; i < moduli.size(); ++i) kappa_h = std::max(kappa_h, moduli[i] + pad);
        const DriftBounds drift = compute_drift_bounds(*bounds, kappa_h, trace.p);

        if (sigma > 0.0) {
            double max_norm_drift = 0.0;
            for (std::size_t k = 1; k < trace.rows.size(); ++k)
                max_norm_drift = std::max(
                    max_norm_drift, std::abs(trace.rows[k].lam_norm - trace.rows[k - 1].lam_norm));
            add_check("norm_drift_gamma1", max_norm_drift <= drift.gamma1 * sigma + slack,
                      {{"max_norm_drift", max_norm_drift}, {"bound", drift.gamma1 * sigma}});
            const double comp_drift =
                summary.contains("run_audit")
                    ? summary["run_audit"].value("max_component_drift", 0.0)
                    : 0.0;
            add_check("component_drift_gamma2", comp_drift <= drift.gamma2 * sigma + slack,
                      {{"max_component_drift", comp_drift}, {"bound", drift.gamma2 * sigma}});

            if (summary.contains("final_lambda")) {
                const auto lam = summary["final_lambda"].get<std::vector<double>>();
                double step_sum = 0.0;
                for (const TraceRow& row : trace.rows) step_sum += row.step_norm;
                const double reach = bounds->grad_g_bound + 0.5 * kappa_h * bounds->diameter;
                bool sum_ok = true;
                double worst_margin = std::numeric_limits<double>::infinity();
                for (int i = 0; i < trace.p; ++i) {
                    double g_sum = 0.0;
                    for (const TraceRow& row : trace.rows) g_sum += row.g[i];
                    const double rhs = lam[i] / sigma + reach * step_sum;
                    worst_margin = std::min(worst_margin, rhs - g_sum);
                    if (g_sum > rhs + slack) sum_ok = false;
                }
                add_check("constraint_sum_bound", sum_ok, {{"worst_margin", worst_margin}});
            }
            if (alpha > 0.0) {
                double comp_sum = 0.0;
                for (const TraceRow& row : trace.rows) comp_sum += row.comp;
                const double T = static_cast<double>(trace.rows.size());
                const double rhs = 0.5 * sigma * bounds->constraint_norm *
                                       bounds->constraint_norm * T +
                                   bounds->grad_f_bound * bounds->grad_f_bound * T / (2.0 * alpha);
                add_check("complementarity_sum_bound", -comp_sum <= rhs + slack,
                          {{"lhs", -comp_sum}, {"rhs", rhs}});
            }
        }
    } else {
        add_check("constants_available", false,
                  {{"note", "pass --instance to enable drift and summed-inequality checks"}});
    }

    const AveragedCurves curves = averaged_curves(trace);
    json fit_report = json::object();
    auto fit_entry = [](const std::optional<FitResult>& fit) -> json {
        if (!fit) return nullptr;
        return {{"exponent", fit->exponent}, {"coefficient", fit->coefficient},
                {"majorizes", fit->majorizes}};
    };
    fit_report["stationarity"] = fit_entry(envelope_fit(curves.stationarity, FitMode::FreeInBand));
    fit_report["complementarity"] =
        fit_entry(envelope_fit(curves.complementarity, FitMode::FreeInBand));
    fit_report["violation"] = fit_entry(envelope_fit(curves.violation, FitMode::FixedThird));
    report["fits"] = fit_report;

    bool all_pass = true;
    for (const auto& check : checks)
        if (!check["pass"].get<bool>()) all_pass = false;
    report["checks"] = checks;
    report["all_pass"] = all_pass;

    if (out.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        write_text(out, report.dump(2) + "\n", force);
        std::cout << "wrote " << out << (all_pass ? " (all checks passed)\n" : " (FAILURES)\n");
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"QPALM experiments: generate instances, run solvers, compare, validate"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "write a problem instance JSON");
    std::string gen_family = "qcqp";
    std::vector<std::string> gen_spec;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    bool gen_force = false;
    gen->add_option("--family", gen_family, "qcqp or np");
    gen->add_option("--spec", gen_spec, "key=value generator settings")->take_all();
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out", gen_out, "output instance path")->required();
    gen->add_flag("--force", gen_force, "overwrite existing outputs");

    auto* solve = app.add_subcommand("solve", "run one solver on an instance");
    std::string solve_instance, solve_out;
    SolveFlags solve_flags;
    bool solve_force = false;
    solve->add_option("--instance", solve_instance, "instance JSON")->required();
    solve->add_option("--solver", solve_flags.solver, "qpalm, palm or alm");
    solve->add_option("--mode", solve_flags.mode, "theory or practical (qpalm)");
    solve->add_option("--T", solve_flags.T, "outer iteration budget");
    solve->add_option("--c-alpha", solve_flags.c_alpha, "practical-mode step scale");
    solve->add_option("--pad", solve_flags.pad, "curvature pad");
    solve->add_option("--seed", solve_flags.seed, "run seed (echoed)");
    solve->add_option("--inner-tol", solve_flags.inner_tol, "inner step tolerance");
    solve->add_option("--moreau-every", solve_flags.moreau_every,
                      "Moreau diagnostic stride (0 = off)");
    solve->add_flag("--timing", solve_flags.timing,
                    "record measured cpu_s in the trace (non-reproducible bytes)");
    solve->add_option("--budget-s", solve_flags.budget_s, "wall-clock cap, 0 = off");
    solve->add_option("--alm-outers", solve_flags.alm_outers, "ALM outer iterations");
    solve->add_option("--start", solve_flags.start, "default, zero or xhat");
    solve->add_option("--out", solve_out, "output prefix (.csv/.json appended)")->required();
    solve->add_flag("--force", solve_force, "overwrite existing outputs");

    auto* compare = app.add_subcommand("compare", "run several solvers over instances");
    std::string cmp_family = "qcqp";
    std::vector<std::string> cmp_spec, cmp_instances, cmp_solvers = {"qpalm", "palm", "alm"};
    std::vector<std::uint64_t> cmp_seeds;
    SolveFlags cmp_flags;
    cmp_flags.T = 500;
    std::string cmp_out = "compare_out";
    bool cmp_force = false;
    compare->add_option("--family", cmp_family, "family for seeded generation");
    compare->add_option("--spec", cmp_spec, "key=value generator settings")->take_all();
    compare->add_option("--instances", cmp_instances, "existing instance files")->take_all();
    compare->add_option("--seeds", cmp_seeds, "seeds for generated instances")->take_all();
    compare->add_option("--solvers", cmp_solvers, "solvers to run")->take_all();
    compare->add_option("--T", cmp_flags.T, "outer iterations for qpalm/palm");
    compare->add_option("--c-alpha", cmp_flags.c_alpha, "practical-mode step scale");
    compare->add_option("--pad", cmp_flags.pad, "curvature pad");
    compare->add_option("--inner-tol", cmp_flags.inner_tol, "inner step tolerance");
    compare->add_option("--alm-outers", cmp_flags.alm_outers, "ALM outer iterations");
    compare->add_option("--budget-s", cmp_flags.budget_s, "per-run wall-clock budget");
    compare->add_option("--start", cmp_flags.start, "default, zero or xhat");
    compare->add_option("--out", cmp_out, "output directory");
    compare->add_flag("--force", cmp_force, "overwrite existing outputs");

    auto* validate = app.add_subcommand("validate", "invariant checks on a finished run");
    std::string val_trace, val_summary, val_instance, val_out;
    bool val_force = false;
    validate->add_option("--trace", val_trace, "trace CSV")->required();
    validate->add_option("--summary", val_summary, "summary JSON")->required();
    validate->add_option("--instance", val_instance, "instance JSON (enables constant checks)");
    validate->add_option("--out", val_out, "report path (stdout when omitted)");
    validate->add_flag("--force", val_force, "overwrite existing outputs");

    try {
        app.parse(argc, argv);
        if (gen->parsed()) return cmd_generate(gen_family, gen_spec, gen_seed, gen_out, gen_force);
        if (solve->parsed()) return cmd_solve(solve_instance, solve_flags, solve_out, solve_force);
        if (compare->parsed())
            return cmd_compare(cmp_family, cmp_spec, cmp_instances, cmp_seeds, cmp_solvers,
                               cmp_flags, cmp_out, cmp_force);
        if (validate->parsed())
            return cmd_validate(val_trace, val_summary, val_instance, val_out, val_force);
        return kExitUsage;
    } catch (const CLI::ParseError& err) {
        const int rc = app.exit(err);
        return rc == 0 ? kExitOk : kExitUsage;
    } catch (const ScheduleError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitTheory;
    } catch (const InputError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitUsage;
    } catch (const NumericalError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitNumerical;
    }
}
