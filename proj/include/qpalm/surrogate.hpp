#pragma once

#include <cmath>

#include "qpalm/problem.hpp"

namespace qpalm {

// Scalar curvature choices for the quadratic models: each constraint model
// gets s_i = -(L_i + pad) so that it minorizes g_i, and the objective model
// curvature sigma0 = 1 + sum_j lambda_j (L_j + pad) keeps the penalized model
// convex. pad > 0 makes s_i strictly below -L_i.
struct CurvatureSpec {
    double pad = 0.1;
    Vec constraint_curvature; // s_1..s_p, all negative
    double objective_curvature = 1.0; // sigma0, >= 1 whenever lambda >= 0

    // kappa_H = max_i |s_i| and C_Sigma = sqrt(p) * kappa_H.
    double kappa_h() const { return constraint_curvature.size() ? constraint_curvature.cwiseAbs().maxCoeff() : 0.0; }
    double c_sigma() const { return std::sqrt(static_cast<double>(constraint_curvature.size())) * kappa_h(); }
};

// First-order data of the problem frozen at an anchor point, plus the penalty
// parameters of the outer iteration. Immutable once built; evaluation is pure.
struct SurrogateModel {
    Vec anchor;           // x^t
    double f_anchor = 0.0;
    Vec grad_f_anchor;
    Vec g_anchor;         // g_i(x^t)
    Mat grad_g_anchor;    // one constraint gradient per column
    Vec lambda;           // lambda^t
    double sigma = 0.0;   // penalty parameter
    double alpha = 0.0;   // proximal weight
    CurvatureSpec curvature;

    int dim() const { return static_cast<int>(anchor.size()); }
    int constraints() const { return static_cast<int>(g_anchor.size()); }

    // Quadratic model q_i at x; index 0 is the objective model.
    double eval_q(int i, const Vec& x) const;
    Vec grad_q(int i, const Vec& x) const;

    // Value and gradient of the surrogate augmented Lagrangian plus the
    // proximal term:
    //   q_0(x) + (1/2 sigma) [ sum_i [lambda_i + sigma q_i(x)]_+^2 - ||lambda||^2 ]
    //          + (alpha/2) ||x - anchor||^2.
    double subproblem_value(const Vec& x) const;
    Vec subproblem_gradient(const Vec& x) const;
};

// Evaluates and caches all first-order data at x_t. Requires lambda_t >= 0.
SurrogateModel build_surrogate(const Problem& problem, const Vec& x_t, const Vec& lambda_t,
                               double pad, double sigma, double alpha);

} // namespace qpalm
