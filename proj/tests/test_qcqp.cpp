#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "qpalm/qcqp.hpp"
#include "qpalm/rng.hpp"
#include "test_helpers.hpp"

using namespace qpalm;

TEST_CASE("generation is deterministic in (spec, seed)") {
    const QcqpGenSpec spec;
    const QcqpInstance a = qcqp_generate(10, 4, 1.5, spec, 99);
    const QcqpInstance b = qcqp_generate(10, 4, 1.5, spec, 99);
    for (int k = 0; k <= 4; ++k) {
        CHECK((a.Q[k] - b.Q[k]).norm() == 0.0);
        CHECK((a.c[k] - b.c[k]).norm() == 0.0);
    }
    CHECK((a.x_star - b.x_star).norm() == 0.0);
    CHECK((a.r - b.r).norm() == 0.0);

    const QcqpInstance c = qcqp_generate(10, 4, 1.5, spec, 100);
    CHECK((a.Q[0] - c.Q[0]).norm() > 0.0);
}

TEST_CASE("planted point is strictly feasible with the drawn margins") {
    const QcqpInstance inst = qcqp_generate(80, 30, 2.0, QcqpGenSpec{}, 7);
    for (int i = 0; i < inst.p; ++i)
        CHECK(inst.eval_constraint(i, inst.x_star) ==
              doctest::Approx(-inst.delta[i]).epsilon(1e-10));
}

TEST_CASE("objective spectrum honors the requested fractions") {
    QcqpGenSpec spec;
    spec.neg_fraction_obj = 0.0;
    const QcqpInstance inst = qcqp_generate(12, 2, 1.0, spec, 5);
    Eigen::SelfAdjointEigenSolver<Mat> es(inst.Q[0], Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= 0.5 - 1e-9);
}

TEST_CASE("constraint spectra stay above the declared floor") {
    QcqpGenSpec spec;
    spec.indefinite_constraints = 1;
    const QcqpInstance inst = qcqp_generate(2, 1, 1.0, spec, 31);
    Eigen::SelfAdjointEigenSolver<Mat> es(inst.Q[1], Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -spec.constraint_curvature - 1e-9);
}

TEST_CASE("oracle evaluation") {
    SUBCASE("closed form on a hand-built instance") {
        QcqpInstance inst;
        inst.n = 2;
        inst.p = 1;
        inst.half_width = 5.0;
        inst.Q = {2.0 * Mat::Identity(2, 2), Mat::Identity(2, 2)};
        Vec c0(2);
        c0 << 1.0, 0.0;
        inst.c = {c0, Vec::Zero(2)};
        inst.r = Vec::Constant(1, 3.0);
        inst.x_star = Vec::Zero(2);
        inst.delta = Vec::Constant(1, 3.0);

        Vec x(2);
        x << 1.0, 1.0;
        CHECK(inst.eval_objective(x) == doctest::Approx(3.0));
        const Vec grad = inst.grad_objective(x);
        CHECK(grad[0] == doctest::Approx(3.0));
        CHECK(grad[1] == doctest::Approx(2.0));
        CHECK(inst.eval_objective(Vec::Zero(2)) == 0.0);
        CHECK(inst.eval_constraint(0, Vec::Zero(2)) == doctest::Approx(-3.0));
    }

    SUBCASE("matches an independent quadratic-form evaluation") {
        const QcqpInstance inst = test::small_qcqp(13);
        Rng rng(77);
        const Vec x = rng.uniform_vec(inst.n, -1.0, 1.0);
        // plain-loop evaluator, no linear algebra library
        auto quad = [&](const Mat& q, const Vec& lin, double shift) {
            double acc = 0.0;
            for (int i = 0; i < inst.n; ++i)
                for (int j = 0; j < inst.n; ++j) acc += x[i] * q(i, j) * x[j];
            acc *= 0.5;
            for (int i = 0; i < inst.n; ++i) acc += lin[i] * x[i];
            return acc - shift;
        };
        CHECK(inst.eval_objective(x) ==
              doctest::Approx(quad(inst.Q[0], inst.c[0], 0.0)).epsilon(1e-13));
        for (int i = 0; i < inst.p; ++i)
            CHECK(inst.eval_constraint(i, x) ==
                  doctest::Approx(quad(inst.Q[i + 1], inst.c[i + 1], inst.r[i])).epsilon(1e-13));
    }
}

TEST_CASE("analytic bounds") {
    SUBCASE("closed form for identity data") {
        QcqpInstance inst;
        inst.n = 2;
        inst.p = 1;
        inst.half_width = 1.0;
        inst.Q = {Mat::Identity(2, 2), Mat::Identity(2, 2)};
        inst.c = {Vec::Zero(2), Vec::Zero(2)};
        inst.r = Vec::Constant(1, 1.0);
        inst.x_star = Vec::Zero(2);
        inst.delta = Vec::Constant(1, 1.0);
        const BoundsBundle b = qcqp_analytic_bounds(inst);
        CHECK(b.grad_g_bound == doctest::Approx(std::sqrt(2.0)));
        CHECK(b.diameter == doctest::Approx(2.0 * std::sqrt(2.0)));
        CHECK(b.slater_margin == 1.0);
    }

    SUBCASE("bounds dominate sampled maxima and eps0 is min delta") {
        const QcqpInstance inst = test::small_qcqp(21);
        const BoundsBundle b = qcqp_analytic_bounds(inst);
        CHECK(b.slater_margin == doctest::Approx(inst.delta.minCoeff()).epsilon(1e-10));
        CHECK(verify_bounds(qcqp_make_problem(inst), b, 10000, 4).all_ok());
    }
}

TEST_CASE("exact moduli from the spectrum") {
    SUBCASE("positive definite gives zero") {
        QcqpInstance inst;
        inst.n = 2;
        inst.p = 1;
        inst.half_width = 1.0;
        Mat diag(2, 2);
        diag << -0.7, 0.0, 0.0, 2.0;
        inst.Q = {Mat::Identity(2, 2), diag};
        inst.c = {Vec::Zero(2), Vec::Zero(2)};
        inst.r = Vec::Constant(1, 1.0);
        inst.x_star = Vec::Zero(2);
        inst.delta = Vec::Constant(1, 1.0);
        const Vec moduli = qcqp_exact_moduli(inst);
        CHECK(moduli[0] == 0.0);
        CHECK(moduli[1] == doctest::Approx(0.7).epsilon(1e-12));
    }

    SUBCASE("generated moduli stay within the generator targets") {
        const QcqpGenSpec spec;
        const QcqpInstance inst = qcqp_generate(8, 4, 1.0, spec, 3);
        const Vec moduli = qcqp_exact_moduli(inst);
        CHECK(moduli[0] <= spec.objective_curvature + 1e-9);
        for (int i = 1; i <= inst.p; ++i) CHECK(moduli[i] <= spec.constraint_curvature + 1e-9);
    }
}

TEST_CASE("generator input validation") {
    QcqpGenSpec spec;
    CHECK_THROWS_AS(qcqp_generate(0, 1, 1.0, spec, 1), InputError);
    spec.neg_fraction_obj = 1.2;
    CHECK_THROWS_AS(qcqp_generate(4, 2, 1.0, spec, 1), InputError);
    spec.neg_fraction_obj = 0.3;
    spec.objective_curvature = 0.05; // below the -0.1 eigenvalue ceiling
    CHECK_THROWS_AS(qcqp_generate(4, 2, 1.0, spec, 1), InputError);
    spec.objective_curvature = 2.0;
    spec.indefinite_constraints = 5;
    CHECK_THROWS_AS(qcqp_generate(4, 2, 1.0, spec, 1), InputError);
}

TEST_CASE("payload JSON round-trips bit-exactly") {
    const QcqpInstance inst = test::small_qcqp(41);
    const QcqpInstance back = qcqp_from_payload_json(qcqp_payload_json(inst));
    CHECK(back.n == inst.n);
    CHECK(back.p == inst.p);
    for (int k = 0; k <= inst.p; ++k) {
        CHECK((back.Q[k] - inst.Q[k]).norm() == 0.0);
        CHECK((back.c[k] - inst.c[k]).norm() == 0.0);
    }
    CHECK((back.r - inst.r).norm() == 0.0);
    CHECK((back.x_star - inst.x_star).norm() == 0.0);
    CHECK(back.spec.delta_max == inst.spec.delta_max);
}

TEST_CASE("objective lower bound certifies min over the box") {
    const QcqpInstance inst = test::small_qcqp(55, 4, 2, 1.0);
    const double lb = qcqp_objective_lower_bound(inst);
    Rng rng(9);
    for (int trial = 0; trial < 2000; ++trial) {
        const Vec x = rng.uniform_vec(inst.n, -inst.half_width, inst.half_width);
        CHECK(inst.eval_objective(x) >= lb - 1e-12);
    }
}
