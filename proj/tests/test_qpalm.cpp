#include <doctest.h>

#include <sstream>

#include "qpalm/qpalm_core.hpp"
#include "test_helpers.hpp"

using namespace qpalm;

TEST_CASE("schedule values") {
    SUBCASE("sigma is T^{-2/3} in both modes") {
        CHECK(make_schedule(1000, ScheduleMode::Practical, nullptr, 1.0).sigma ==
              doctest::Approx(0.01).epsilon(1e-12));
    }

    SUBCASE("theory alpha from gamma5") {
        ConstantsBundle c;
        c.gamma5 = 5.0;
        c.rho = 0.5;
        CHECK(make_schedule(8, ScheduleMode::Theory, &c, 0.0).alpha ==
              doctest::Approx(160.0).epsilon(1e-12));
    }

    SUBCASE("practical alpha from c_alpha") {
        CHECK(make_schedule(27, ScheduleMode::Practical, nullptr, 10.0).alpha ==
              doctest::Approx(30.0).epsilon(1e-12));
    }

    SUBCASE("theory mode requires regularity") {
        ConstantsBundle c;
        c.gamma5 = 5.0;
        c.rho = 1.3;
        CHECK_THROWS_AS(make_schedule(8, ScheduleMode::Theory, &c, 0.0), ScheduleError);
    }
}

namespace {

// Constant-valued constraints make the multiplier update exactly predictable:
// the subproblem minimizer stays at the anchor, so q_i(x^{t+1}) = g_i(x^t).
Problem constant_constraint_problem(double g1, double g2) {
    Problem problem;
    problem.n = 2;
    problem.p = 2;
    problem.box = BoxSet::cube(2, 1.0);
    problem.f = [](const Vec&) { return 0.0; };
    problem.grad_f = [](const Vec&) { return Vec::Zero(2); };
    problem.g = {[g1](const Vec&) { return g1; }, [g2](const Vec&) { return g2; }};
    problem.grad_g = {[](const Vec&) { return Vec::Zero(2); },
                      [](const Vec&) { return Vec::Zero(2); }};
    problem.moduli = Vec::Zero(3);
    return problem;
}

} // namespace

TEST_CASE("multiplier update clips at zero") {
    SUBCASE("all models nonpositive keeps lambda at zero") {
        const Problem problem = constant_constraint_problem(-1.0, -2.0);
        SolverState state{1, Vec::Zero(2), Vec::Zero(2)};
        const auto [next, row] = qpalm_step(state, problem, 0.5, 1.0, 0.1, ApgConfig{});
        CHECK(next.lambda.maxCoeff() == 0.0);
        CHECK(next.lambda.minCoeff() == 0.0);
    }

    SUBCASE("componentwise clipped update") {
        const Problem problem = constant_constraint_problem(-4.0, 2.0);
        SolverState state{1, Vec::Zero(2), Vec::Zero(2)};
        state.lambda << 1.0, 0.0;
        const auto [next, row] = qpalm_step(state, problem, 0.5, 1.0, 0.1, ApgConfig{});
        CHECK(next.lambda[0] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(next.lambda[1] == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("one step decreases the subproblem objective below its anchor value") {
    const QcqpInstance inst = test::small_qcqp(3, 2, 1, 1.0);
    const Problem problem = qcqp_make_problem(inst);
    SolverState state{1, inst.x_star, Vec::Zero(1)};
    const double sigma = 0.1, alpha = 2.0, pad = 0.1;

    const SurrogateModel model = build_surrogate(problem, state.x, state.lambda, pad, sigma, alpha);
    const auto [next, row] = qpalm_step(state, problem, sigma, alpha, pad, ApgConfig{});
    CHECK(model.subproblem_value(next.x) <= model.subproblem_value(state.x) + 1e-12);
    CHECK(row.step_norm == doctest::Approx((next.x - state.x).norm()));
}

TEST_CASE("run contract") {
    const QcqpInstance inst = test::small_qcqp(13);
    const Problem problem = qcqp_make_problem(inst);
    const BoundsBundle bounds = qcqp_analytic_bounds(inst);

    SUBCASE("single iteration and nonnegative multipliers") {
        QpalmConfig cfg;
        cfg.T = 1;
        const RunTrace trace = qpalm_run(problem, bounds, cfg);
        CHECK(trace.size() == 1);
        CHECK(trace.final_lambda.minCoeff() >= 0.0);
        CHECK(trace.rows[0].t == 1);
    }

    SUBCASE("identical configs give bit-identical traces") {
        QpalmConfig cfg;
        cfg.T = 40;
        const RunTrace a = qpalm_run(problem, bounds, cfg);
        const RunTrace b = qpalm_run(problem, bounds, cfg);
        std::ostringstream sa, sb;
        write_trace_csv(a, sa);
        write_trace_csv(b, sb);
        CHECK(sa.str() == sb.str());
    }

    SUBCASE("initial point must be feasible") {
        QpalmConfig cfg;
        cfg.T = 1;
        cfg.initial_point = Vec::Constant(problem.n, 100.0);
        CHECK_THROWS_AS(qpalm_run(problem, bounds, cfg), InputError);
    }

    SUBCASE("row count matches T and time column is monotone") {
        QpalmConfig cfg;
        cfg.T = 25;
        cfg.timing = true;
        const RunTrace trace = qpalm_run(problem, bounds, cfg);
        CHECK(trace.size() == 25);
        for (int k = 1; k < trace.size(); ++k)
            CHECK(trace.rows[k].cpu_s >= trace.rows[k - 1].cpu_s);
    }
}

TEST_CASE("recorded runs satisfy the multiplier drift bounds") {
    const QcqpInstance inst = test::small_qcqp(17, 10, 4, 1.0);
    const Problem problem = qcqp_make_problem(inst);
    const BoundsBundle bounds = qcqp_analytic_bounds(inst);

    QpalmConfig cfg;
    cfg.T = 150;
    cfg.pad = 0.1;
    const RunTrace trace = qpalm_run(problem, bounds, cfg);
    const double sigma = make_schedule(cfg.T, ScheduleMode::Practical, nullptr, cfg.c_alpha).sigma;

    double kappa_h = 0.0;
    for (int i = 1; i <= problem.p; ++i) kappa_h = std::max(kappa_h, problem.moduli[i] + cfg.pad);
    const DriftBounds drift = compute_drift_bounds(bounds, kappa_h, problem.p);

    CHECK(trace.min_multiplier >= 0.0);
    CHECK(trace.max_component_drift <= drift.gamma2 * sigma + 1e-8);
    CHECK(trace.max_norm_drift <= drift.gamma1 * sigma + 1e-8);

    SUBCASE("per-iteration multiplier history agrees with the aggregates") {
        REQUIRE(static_cast<int>(trace.multipliers.size()) == trace.size());
        double worst = 0.0;
        for (std::size_t k = 1; k < trace.multipliers.size(); ++k)
            worst = std::max(worst, (trace.multipliers[k] - trace.multipliers[k - 1])
                                        .cwiseAbs()
                                        .maxCoeff());
        CHECK(worst <= trace.max_component_drift + 1e-15);
    }

    SUBCASE("constraint-sum inequality") {
        const double reach = bounds.grad_g_bound + 0.5 * kappa_h * bounds.diameter;
        double step_sum = 0.0;
        for (const TraceRow& row : trace.rows) step_sum += row.step_norm;
        for (int i = 0; i < problem.p; ++i) {
            double g_sum = 0.0;
            for (const TraceRow& row : trace.rows) g_sum += row.g[i];
            CHECK(g_sum <= trace.final_lambda[i] / sigma + reach * step_sum + 1e-8);
        }
    }

    SUBCASE("complementarity-sum inequality") {
        const double alpha =
            make_schedule(cfg.T, ScheduleMode::Practical, nullptr, cfg.c_alpha).alpha;
        double comp_sum = 0.0;
        for (const TraceRow& row : trace.rows) comp_sum += row.comp;
        const double rhs = 0.5 * sigma * bounds.constraint_norm * bounds.constraint_norm * cfg.T +
                           bounds.grad_f_bound * bounds.grad_f_bound * cfg.T / (2.0 * alpha);
        CHECK(-comp_sum <= rhs + 1e-8);
    }
}

TEST_CASE("averaged violation decays over a longer run") {
    // Qualitative decay: the averaged constraint violation at T sits below its
    // value at T/10 once the multipliers have caught up.
    const QcqpInstance inst = qcqp_generate(80, 30, 2.0, QcqpGenSpec{}, 7);
    const Problem problem = qcqp_make_problem(inst);
    const BoundsBundle bounds = qcqp_analytic_bounds(inst);
    QpalmConfig cfg;
    cfg.T = 1000;
    const RunTrace trace = qpalm_run(problem, bounds, cfg);

    auto averaged_max_violation = [&trace, &problem](int upto) {
        Vec sums = Vec::Zero(problem.p);
        for (int t = 0; t < upto; ++t) sums += trace.rows[t].g;
        return sums.maxCoeff() / upto;
    };
    CHECK(averaged_max_violation(1000) < averaged_max_violation(100));
}

TEST_CASE("theory schedule on an engineered instance") {
    const QcqpInstance inst = test::theory_friendly_qcqp();
    const Problem problem = qcqp_make_problem(inst);
    const BoundsBundle bounds = qcqp_analytic_bounds(inst);

    QpalmConfig cfg;
    cfg.T = 200;
    cfg.mode = ScheduleMode::Theory;
    cfg.pad = 0.01;
    const RunTrace trace = qpalm_run(problem, bounds, cfg);
    CHECK(trace.size() == 200);
    CHECK(trace.config_echo.contains("constants"));
    CHECK(trace.config_echo["constants"]["rho"].get<double>() < 1.0);
    CHECK(trace.min_multiplier >= 0.0);
}
