#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qpalm/box.hpp"
#include "qpalm/types.hpp"

namespace qpalm {

// Oracle bundle for  min f(x)  s.t.  g_i(x) <= 0 (i = 1..p),  x in a box.
// Immutable after construction; all evaluations are pure, so instances can be
// shared across concurrent solver runs.
struct Problem {
    int n = 0;
    int p = 0;
    BoxSet box;
    ValueOracle f;
    GradOracle grad_f;
    std::vector<ValueOracle> g;
    std::vector<GradOracle> grad_g;
    // Weak-convexity moduli L_0..L_p (f first, then each constraint).
    Vec moduli;

    // g(x) stacked into a length-p vector.
    Vec constraint_values(const Vec& x) const;

    // L(x, lambda) = f(x) + sum_j lambda_j g_j(x).
    double lagrangian(const Vec& x, const Vec& lambda) const;
    Vec grad_lagrangian(const Vec& x, const Vec& lambda) const;

    void check_shapes() const;
};

// Analytic certificates for the problem: set diameter, sup-norm bounds on g
// and the gradients, and a strictly feasible point with its margin.
struct BoundsBundle {
    double diameter = 0.0;      // D0
    double constraint_norm = 0.0; // nu_g, bound on ||g(x)||
    double grad_f_bound = 0.0;  // kappa_f
    double grad_g_bound = 0.0;  // kappa_g, bound on max_i ||grad g_i(x)||
    double slater_margin = 0.0; // eps0
    Vec slater_point;           // xhat with g_i(xhat) <= -eps0

    void require_valid() const;
};

// Empirical audit of a BoundsBundle against sampled points in the box.
struct BoundsAudit {
    int samples = 0;
    double observed_constraint_norm = 0.0;
    double observed_grad_f = 0.0;
    double observed_grad_g = 0.0;
    double slater_worst = 0.0; // max_i g_i(xhat)
    bool constraint_norm_ok = false;
    bool grad_f_ok = false;
    bool grad_g_ok = false;
    bool slater_ok = false;
    bool all_ok() const { return constraint_norm_ok && grad_f_ok && grad_g_ok && slater_ok; }
};

// Draws `samples` uniform points in the box and reports the observed maxima
// next to the claimed bounds. Violations are reported, never thrown.
BoundsAudit verify_bounds(const Problem& problem, const BoundsBundle& bounds,
                          int samples, std::uint64_t seed);

} // namespace qpalm
