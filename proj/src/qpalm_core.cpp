#include "qpalm/qpalm_core.hpp"

#include <chrono>
#include <cmath>

#include "qpalm/metrics.hpp"

namespace qpalm {

Schedule make_schedule(int T, ScheduleMode mode, const ConstantsBundle* constants,
                       double c_alpha) {
    if (T < 1) throw InputError("make_schedule: T >= 1 required");
    Schedule s;
    s.sigma = std::pow(static_cast<double>(T), -2.0 / 3.0);
    if (mode == ScheduleMode::Theory) {
        if (constants == nullptr)
            throw InputError("make_schedule: theory mode needs a constants bundle");
        if (constants->rho >= 1.0)
            throw ScheduleError("B5 violated: rho = " + std::to_string(constants->rho),
                                constants->rho);
        s.alpha = 16.0 * constants->gamma5 * std::cbrt(static_cast<double>(T));
    } else {
        if (!(c_alpha > 0.0)) throw InputError("make_schedule: c_alpha must be positive");
        s.alpha = c_alpha * std::cbrt(static_cast<double>(T));
    }
    return s;
}

void QpalmConfig::validate() const {
    if (T < 1) throw InputError("QpalmConfig: T >= 1 required");
    if (!(c_alpha > 0.0)) throw InputError("QpalmConfig: c_alpha must be positive");
    if (!(pad > 0.0)) throw InputError("QpalmConfig: pad must be positive");
    if (moreau_every < 1) throw InputError("QpalmConfig: moreau_every >= 1 required");
    inner.validate();
}

std::pair<SolverState, TraceRow> qpalm_step(const SolverState& state, const Problem& problem,
                                            double sigma, double alpha, double pad,
                                            const ApgConfig& inner) {
    const SurrogateModel model = build_surrogate(problem, state.x, state.lambda, pad, sigma, alpha);

    ApgResult apg;
    try {
        apg = apg_minimize([&model](const Vec& z) { return model.subproblem_value(z); },
                           [&model](const Vec& z) { return model.subproblem_gradient(z); },
                           [&problem](const Vec& z) { return problem.box.project(z); }, state.x,
                           inner);
    } catch (const NumericalError& err) {
        throw NumericalError("outer iteration " + std::to_string(state.t) + ": " + err.what());
    }

    SolverState next;
    next.t = state.t + 1;
    next.x = apg.minimizer;
    next.lambda = Vec(problem.p);
    for (int i = 0; i < problem.p; ++i)
        next.lambda[i] = std::max(0.0, state.lambda[i] + sigma * model.eval_q(i + 1, next.x));

    TraceRow row;
    row.t = state.t;
    row.f = model.f_anchor;
    row.g = model.g_anchor;
    row.comp = state.lambda.dot(model.g_anchor);
    row.lam_norm = state.lambda.norm();
    row.step_norm = (next.x - state.x).norm();
    row.inner_iters = apg.iterations;
    return {std::move(next), std::move(row)};
}

RunTrace qpalm_run(const Problem& problem, const BoundsBundle& bounds, const QpalmConfig& config) {
    config.validate();
    problem.check_shapes();

    const ConstantsBundle* constants_ptr = nullptr;
    ConstantsBundle constants;
    if (config.mode == ScheduleMode::Theory) {
        constants = compute_constants(bounds, problem.moduli, config.pad);
        constants_ptr = &constants;
    }
    const Schedule schedule = make_schedule(config.T, config.mode, constants_ptr, config.c_alpha);

    SolverState state;
    state.t = 1;
    state.x = config.initial_point ? *config.initial_point : bounds.slater_point;
    if (!problem.box.contains(state.x, 1e-12))
        throw InputError("qpalm_run: initial point lies outside the feasible set");
    state.x = problem.box.project(state.x);
    state.lambda = Vec::Zero(problem.p);

    RunTrace trace;
    trace.p = problem.p;
    trace.rows.reserve(config.T);
    trace.multipliers.reserve(config.T);
    trace.min_multiplier = 0.0;

    const bool measure = config.timing || config.budget_s > 0.0;
    using Clock = std::chrono::steady_clock;
    double elapsed = 0.0;

    for (int t = 1; t <= config.T; ++t) {
        const Vec lambda_before = state.lambda;

        const auto started = measure ? Clock::now() : Clock::time_point{};
        auto [next, row] = qpalm_step(state, problem, schedule.sigma, schedule.alpha, config.pad,
                                      config.inner);
        if (measure)
            elapsed += std::chrono::duration<double>(Clock::now() - started).count();
        row.cpu_s = config.timing ? elapsed : 0.0;

        // Diagnostics are computed outside the timed section.
        if (config.record_kkt_residual)
            row.r_alpha = kkt_residual(problem, state.x, state.lambda, schedule.alpha).norm();
        if (config.record_moreau && (t - 1) % config.moreau_every == 0) {
            ApgConfig prox_inner = config.inner;
            prox_inner.step_tol = 1e-8;
            const MoreauGradient env =
                moreau_gradient(problem, state.x, state.lambda, schedule.alpha, prox_inner);
            // non-converged proximal solves leave the row flagged (NaN) instead
            // of polluting the averaged curve
            if (env.converged) row.moreau_sq = env.gradient.squaredNorm();
        }

        trace.multipliers.push_back(lambda_before);
        trace.min_multiplier = std::min(trace.min_multiplier,
                                        problem.p ? next.lambda.minCoeff() : 0.0);
        trace.max_component_drift =
            std::max(trace.max_component_drift,
                     problem.p ? (next.lambda - lambda_before).cwiseAbs().maxCoeff() : 0.0);
        trace.max_norm_drift = std::max(
            trace.max_norm_drift, std::abs(next.lambda.norm() - lambda_before.norm()));
        trace.max_step_norm = std::max(trace.max_step_norm, row.step_norm);

        trace.rows.push_back(std::move(row));
        state = std::move(next);

        if (config.budget_s > 0.0 && elapsed > config.budget_s && t < config.T) {
            trace.truncated_by_budget = true;
            break;
        }
    }

    trace.final_x = state.x;
    trace.final_lambda = state.lambda;
    trace.wall_time_s = elapsed;

    trace.config_echo = {{"solver", "qpalm"},
                         {"T", config.T},
                         {"mode", config.mode == ScheduleMode::Theory ? "theory" : "practical"},
                         {"sigma", schedule.sigma},
                         {"alpha", schedule.alpha},
                         {"c_alpha", config.c_alpha},
                         {"pad", config.pad},
                         {"seed", config.seed},
                         {"inner_step_tol", config.inner.step_tol},
                         {"record_moreau", config.record_moreau},
                         {"moreau_every", config.moreau_every}};
    if (constants_ptr) trace.config_echo["constants"] = constants_ptr->to_json();
    return trace;
}

} // namespace qpalm
