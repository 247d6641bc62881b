#pragma once

#include <optional>

#include "qpalm/apg.hpp"
#include "qpalm/problem.hpp"
#include "qpalm/trace.hpp"

namespace qpalm {

// Classical augmented Lagrangian method: full inner minimization of the true
// augmented Lagrangian, multiplier update, growing penalty.
struct AlmConfig {
    double penalty_init = 1.0;   // sigma_0
    double penalty_growth = 10.0; // rho_pen >= 1
    int outer_iters = 30;
    double kkt_tol = 0.0; // 0 disables the early-stop test
    ApgConfig inner;
    bool timing = false;
    double budget_s = 0.0;
    std::optional<Vec> initial_point;

    void validate() const;
};

// Proximal ALM: the QPALM loop with the true f and g in place of the quadratic
// models. Fixed sigma and alpha of the same form as QPALM's practical mode.
struct PalmConfig {
    int T = 500;
    double c_alpha = 10.0;
    ApgConfig inner;
    bool timing = false;
    double budget_s = 0.0;
    std::optional<Vec> initial_point;

    void validate() const;
};

// Augmented Lagrangian value/gradient of the original problem at penalty sigma:
//   f(x) + (1/2 sigma) [ sum_i [lambda_i + sigma g_i(x)]_+^2 - ||lambda||^2 ].
double aug_lagrangian_value(const Problem& problem, const Vec& x, const Vec& lambda, double sigma);
Vec aug_lagrangian_gradient(const Problem& problem, const Vec& x, const Vec& lambda, double sigma);

RunTrace alm_run(const Problem& problem, const BoundsBundle& bounds, const AlmConfig& config);
RunTrace palm_run(const Problem& problem, const BoundsBundle& bounds, const PalmConfig& config);

} // namespace qpalm
