#pragma once

#include "qpalm/apg.hpp"
#include "qpalm/problem.hpp"
#include "qpalm/trace.hpp"

namespace qpalm {

// Projected-gradient residual R_alpha(x, lambda) = alpha [x - P_X(x - grad_x L / alpha)].
// Zero exactly at KKT pairs.
Vec kkt_residual(const Problem& problem, const Vec& x, const Vec& lambda, double alpha);

// All four clauses of the relaxed KKT conditions, with non-strict inequalities:
// ||R_alpha|| <= eps, -<lambda, g(x)> <= eps, g(x) <= eps, lambda >= -eps.
bool epsilon_kkt(const Problem& problem, const Vec& x, const Vec& lambda, double alpha,
                 double eps);

struct MoreauGradient {
    Vec gradient;       // alpha (x - xhat)
    Vec proximal_point; // xhat
    bool reliable = false; // strong convexity of the proximal subproblem certified
    bool converged = false;
};

// Gradient of the Moreau envelope of z -> L(z, lambda) + indicator(X) with
// parameter 1/alpha: solves the proximal subproblem with APG. The result is
// flagged unreliable when alpha does not dominate the weak-convexity modulus
// of L(., lambda), in which case APG acts as a local method.
MoreauGradient moreau_gradient(const Problem& problem, const Vec& x, const Vec& lambda,
                               double alpha, ApgConfig inner = {});

struct MetricPoint {
    int t_prime;
    double value;
};

struct AveragedCurves {
    // (1/|K|) sum_{k in K, k <= T'} moreau_sq over measured indices K.
    std::vector<MetricPoint> stationarity;
    // max_i (1/T') sum_{t <= T'} g_i(x^t).
    std::vector<MetricPoint> violation;
    // -(1/T') sum_{t <= T'} <lambda^t, g(x^t)>.
    std::vector<MetricPoint> complementarity;
};

AveragedCurves averaged_curves(const RunTrace& trace);

// Tidy long-format CSV: metric,T_prime,value.
void write_curves_csv(const AveragedCurves& curves, std::ostream& out);
void write_curves_csv(const AveragedCurves& curves, const std::string& path);

} // namespace qpalm
