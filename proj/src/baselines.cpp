#include "qpalm/baselines.hpp"

#include <chrono>
#include <cmath>

#include "qpalm/metrics.hpp"

namespace qpalm {

void AlmConfig::validate() const {
    if (!(penalty_init > 0.0)) throw InputError("AlmConfig: penalty_init must be positive");
    if (penalty_growth < 1.0) throw InputError("AlmConfig: penalty_growth must be >= 1");
    if (outer_iters < 1) throw InputError("AlmConfig: outer_iters >= 1 required");
    inner.validate();
}

void PalmConfig::validate() const {
    if (T < 1) throw InputError("PalmConfig: T >= 1 required");
    if (!(c_alpha > 0.0)) throw InputError("PalmConfig: c_alpha must be positive");
    inner.validate();
}

double aug_lagrangian_value(const Problem& problem, const Vec& x, const Vec& lambda,
                            double sigma) {
    double penalty = 0.0;
    for (int i = 0; i < problem.p; ++i) {
        const double shifted = std::max(0.0, lambda[i] + sigma * problem.g[i](x));
        penalty += shifted * shifted;
    }
    return problem.f(x) + (penalty - lambda.squaredNorm()) / (2.0 * sigma);
}

Vec aug_lagrangian_gradient(const Problem& problem, const Vec& x, const Vec& lambda,
                            double sigma) {
    Vec grad = problem.grad_f(x);
    for (int i = 0; i < problem.p; ++i) {
        const double shifted = std::max(0.0, lambda[i] + sigma * problem.g[i](x));
        if (shifted > 0.0) grad += shifted * problem.grad_g[i](x);
    }
    return grad;
}

namespace {

struct LoopTimer {
    bool measure;
    double elapsed = 0.0;
    std::chrono::steady_clock::time_point mark;
    void start() {
        if (measure) mark = std::chrono::steady_clock::now();
    }
    void stop() {
        if (measure)
            elapsed += std::chrono::duration<double>(std::chrono::steady_clock::now() - mark).count();
    }
};

TraceRow make_row(const Problem& problem, int t, const Vec& x, const Vec& lambda) {
    TraceRow row;
    row.t = t;
    row.f = problem.f(x);
    row.g = problem.constraint_values(x);
    row.comp = lambda.dot(row.g);
    row.lam_norm = lambda.norm();
    return row;
}

void note_drift(RunTrace& trace, const Vec& before, const Vec& after, double step_norm) {
    if (after.size()) {
        trace.min_multiplier = std::min(trace.min_multiplier, after.minCoeff());
        trace.max_component_drift =
            std::max(trace.max_component_drift, (after - before).cwiseAbs().maxCoeff());
    }
    trace.max_norm_drift =
        std::max(trace.max_norm_drift, std::abs(after.norm() - before.norm()));
    trace.max_step_norm = std::max(trace.max_step_norm, step_norm);
}

} // namespace

RunTrace alm_run(const Problem& problem, const BoundsBundle& bounds, const AlmConfig& config) {
    config.validate();
    problem.check_shapes();

    Vec x = problem.box.project(config.initial_point ? *config.initial_point : bounds.slater_point);
    Vec lambda = Vec::Zero(problem.p);
    double sigma = config.penalty_init;

    RunTrace trace;
    trace.p = problem.p;
    LoopTimer timer{config.timing || config.budget_s > 0.0};

    for (int t = 1; t <= config.outer_iters; ++t) {
        TraceRow row = make_row(problem, t, x, lambda);
        const Vec lambda_before = lambda;
        Vec x_next = x;

        timer.start();
        bool inner_failed = false;
        try {
            const ApgResult apg = apg_minimize(
                [&](const Vec& z) { return aug_lagrangian_value(problem, z, lambda, sigma); },
                [&](const Vec& z) { return aug_lagrangian_gradient(problem, z, lambda, sigma); },
                [&](const Vec& z) { return problem.box.project(z); }, x, config.inner);
            x_next = apg.minimizer;
            row.inner_iters = apg.iterations;
        } catch (const NumericalError&) {
            inner_failed = true; // keep the current point and carry on
        }
        for (int i = 0; i < problem.p; ++i)
            lambda[i] = std::max(0.0, lambda[i] + sigma * problem.g[i](x_next));
        timer.stop();

        row.step_norm = (x_next - x).norm();
        row.cpu_s = config.timing ? timer.elapsed : 0.0;
        if (inner_failed) row.inner_iters = -1;

        trace.multipliers.push_back(lambda_before);
        note_drift(trace, lambda_before, lambda, row.step_norm);
        trace.rows.push_back(std::move(row));

        x = x_next;
        sigma *= config.penalty_growth;

        if (config.kkt_tol > 0.0 &&
            kkt_residual(problem, x, lambda, 1.0).norm() <= config.kkt_tol &&
            (problem.p == 0 || problem.constraint_values(x).maxCoeff() <= config.kkt_tol))
            break;
        if (config.budget_s > 0.0 && timer.elapsed > config.budget_s && t < config.outer_iters) {
            trace.truncated_by_budget = true;
            break;
        }
    }

    trace.final_x = x;
    trace.final_lambda = lambda;
    trace.wall_time_s = timer.elapsed;
    trace.config_echo = {{"solver", "alm"},
                         {"outer_iters", config.outer_iters},
                         {"penalty_init", config.penalty_init},
                         {"penalty_growth", config.penalty_growth},
                         {"kkt_tol", config.kkt_tol},
                         {"inner_step_tol", config.inner.step_tol}};
    return trace;
}

RunTrace palm_run(const Problem& problem, const BoundsBundle& bounds, const PalmConfig& config) {
    config.validate();
    problem.check_shapes();

    const double sigma = std::pow(static_cast<double>(config.T), -2.0 / 3.0);
    const double alpha = config.c_alpha * std::cbrt(static_cast<double>(config.T));

    Vec x = problem.box.project(config.initial_point ? *config.initial_point : bounds.slater_point);
    Vec lambda = Vec::Zero(problem.p);

    RunTrace trace;
    trace.p = problem.p;
    LoopTimer timer{config.timing || config.budget_s > 0.0};

    for (int t = 1; t <= config.T; ++t) {
        TraceRow row = make_row(problem, t, x, lambda);
        const Vec lambda_before = lambda;
        Vec x_next = x;

        timer.start();
        bool inner_failed = false;
        try {
            const ApgResult apg = apg_minimize(
                [&](const Vec& z) {
                    return aug_lagrangian_value(problem, z, lambda, sigma) +
                           0.5 * alpha * (z - x).squaredNorm();
                },
                [&](const Vec& z) {
                    return Vec(aug_lagrangian_gradient(problem, z, lambda, sigma) +
                               alpha * (z - x));
                },
                [&](const Vec& z) { return problem.box.project(z); }, x, config.inner);
            x_next = apg.minimizer;
            row.inner_iters = apg.iterations;
        } catch (const NumericalError&) {
            inner_failed = true;
        }
        for (int i = 0; i < problem.p; ++i)
            lambda[i] = std::max(0.0, lambda[i] + sigma * problem.g[i](x_next));
        timer.stop();

        row.step_norm = (x_next - x).norm();
        row.cpu_s = config.timing ? timer.elapsed : 0.0;
        if (inner_failed) row.inner_iters = -1;

        trace.multipliers.push_back(lambda_before);
        note_drift(trace, lambda_before, lambda, row.step_norm);
        trace.rows.push_back(std::move(row));

        x = x_next;
        if (config.budget_s > 0.0 && timer.elapsed > config.budget_s && t < config.T) {
            trace.truncated_by_budget = true;
            break;
        }
    }

    trace.final_x = x;
    trace.final_lambda = lambda;
    trace.wall_time_s = timer.elapsed;
    trace.config_echo = {{"solver", "palm"},
                         {"T", config.T},
                         {"sigma", sigma},
                         {"alpha", alpha},
                         {"c_alpha", config.c_alpha},
                         {"inner_step_tol", config.inner.step_tol}};
    return trace;
}

} // namespace qpalm
