#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "qpalm/problem.hpp"

namespace qpalm {

// Recipe for random nonconvex QCQP instances: spectra of the quadratic terms,
// scaling of the linear terms, and the feasibility margins of the planted
// strictly feasible point.
struct QcqpGenSpec {
    double objective_curvature = 2.0;      // L_0 target: negative eigenvalues drawn from [-L_0, -0.1]
    double constraint_curvature = 1.0;     // L_i target for indefinite constraints
    double neg_fraction_obj = 0.3;         // share of negative eigenvalues in Q_0
    int indefinite_constraints = -1;       // -1 means ceil(0.2 * p)
    double neg_fraction_constraint = 0.2;  // share of negative eigenvalues in indefinite Q_i
    double tau_obj = 1.0;                  // scale of c_0
    double tau_con = 1.0;                  // scale of c_i
    double delta_min = 0.1;                // feasibility margin range
    double delta_max = 1.0;

    int resolved_indefinite(int p) const;
};

struct QcqpInstance {
    int n = 0;
    int p = 0;
    double half_width = 0.0;   // R, box is [-R, R]^n
    std::vector<Mat> Q;        // Q[0] objective, Q[1..p] constraints, all symmetric
    std::vector<Vec> c;        // c[0..p]
    Vec r;                     // offsets r_1..r_p
    Vec x_star;                // planted strictly feasible point
    Vec delta;                 // margins: g_i(x_star) = -delta_i
    QcqpGenSpec spec;
    std::uint64_t seed = 0;

    double eval_objective(const Vec& x) const;
    Vec grad_objective(const Vec& x) const;
    double eval_constraint(int i, const Vec& x) const;
    Vec grad_constraint(int i, const Vec& x) const;

    BoxSet box() const { return BoxSet::cube(n, half_width); }
};

// Q_i = U^T D U with U from the sign-fixed Householder QR of a Gaussian draw.
// Same (spec, seed) yields a bit-identical instance.
QcqpInstance qcqp_generate(int n, int p, double half_width, const QcqpGenSpec& spec,
                           std::uint64_t seed);

// L_i = max(0, -lambda_min(Q_i)) via symmetric eigen-solve; entry 0 is the objective.
Vec qcqp_exact_moduli(const QcqpInstance& inst);

// Interval-arithmetic bounds over the box:
//   D0 = 2R sqrt(n), kappa_f/kappa_g from ||Q||_2 R sqrt(n) + ||c||,
//   nu_g = sqrt(p) max_i (||Q_i||_2 n R^2 / 2 + ||c_i|| R sqrt(n) + |r_i|),
//   eps0 = min_i delta_i at xhat = x_star.
BoundsBundle qcqp_analytic_bounds(const QcqpInstance& inst);

// Oracle bundle view; moduli are the exact eigen-based ones.
Problem qcqp_make_problem(const QcqpInstance& inst);

// Certified lower bound on min_X f via the spectrum and the linear part.
double qcqp_objective_lower_bound(const QcqpInstance& inst);

nlohmann::json qcqp_payload_json(const QcqpInstance& inst);
QcqpInstance qcqp_from_payload_json(const nlohmann::json& payload);

} // namespace qpalm
