#pragma once

#include <string>

#include <json.hpp>

#include "qpalm/problem.hpp"

namespace qpalm {

// Multiplier drift bounds: per-step caps gamma2 * sigma (componentwise) and
// gamma1 * sigma (norm). These only need the analytic bounds, not the strict
// regularity condition.
struct DriftBounds {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
};

DriftBounds compute_drift_bounds(const BoundsBundle& bounds, double kappa_h, int p);

// Every named constant of the rate analysis, computed from analytic bounds,
// weak-convexity moduli and the curvature pad. Construction fails when the
// strict regularity ratio rho = D0^2 C_Sigma / eps0 reaches 1, because the
// uniform multiplier bound then stops existing.
struct ConstantsBundle {
    // Inputs echoed.
    double diameter = 0.0;        // D0
    double constraint_norm = 0.0; // nu_g
    double grad_f_bound = 0.0;    // kappa_f
    double grad_g_bound = 0.0;    // kappa_g
    double slater_margin = 0.0;   // eps0
    Vec moduli;                   // L_0..L_p
    double pad = 0.0;
    int p = 0;

    // Curvature aggregates.
    double kappa_h = 0.0;  // max_i (L_i + pad) over constraints
    double c_sigma = 0.0;  // sqrt(p) kappa_h
    double sum_constraint_moduli = 0.0;

    // Drift and rate constants.
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double gamma3 = 0.0;
    double gamma4 = 0.0;
    double gamma5 = 0.0;
    double gamma6 = 0.0;

    double rho = 0.0; // strict regularity ratio, must stay below 1
    double eta = 0.0; // multiplier-bound parameter, 16 gamma5 by default

    double kappa0_bar = 0.0; // (2 kappa_f D0 + D0^2) / eps0
    double kappa1 = 0.0;
    double kappa2 = 0.0; // identically zero
    double kappa3 = 0.0; // may be negative, used as printed
    double kappa4 = 0.0;

    double multiplier_bound = 0.0; // M*
    double kappa_sigma = 0.0;      // 1 + C_Sigma M*
    double kappa0_at_bound = 0.0;  // kappa_0(M*)

    double t_min = 0.0; // largest of the three iteration-threshold terms

    double kappa0_of(double multiplier_norm) const;
    double kappa_sigma_of(double multiplier_norm) const;

    // Weak-convexity modulus of x -> L(x, lambda^k) along the run.
    double beta(double k, double sigma) const;
    // Threshold the proximal weight must dominate (alpha > 16 beta_hat).
    double beta_hat(double k, double sigma) const;

    // Drift-analysis diagnostics; s is a free window-length argument.
    double theta(double sigma, double alpha, double s, double multiplier_norm) const;
    double psi(double sigma, double alpha, double s, double multiplier_norm) const;

    nlohmann::json to_json() const;
};

ConstantsBundle compute_constants(const BoundsBundle& bounds, const Vec& moduli, double pad,
                                  double eta = 0.0 /* 0 means 16 gamma5 */);

// Verdict of the minimum-iteration check for the theory schedule.
struct TheoryTCheck {
    bool ok = false;
    double t_min = 0.0;
    double term_curvature = 0.0;   // (L_0 + kappa_sigma/2)^3
    double term_smoothness = 0.0;  // second threshold term
    double term_penalty = 0.0;     // p (kappa_g + kappa_h D0/2)^2 / (16 gamma5)
    bool beta_hat_ok = false;      // beta_hat_T(T^{-2/3}) <= gamma5 T^{1/3}
    bool multiplier_bound_ok = false; // kappa3 T^{-2/3} + kappa4 T^{-1/3} <= 1
    std::string reason;            // empty when ok
};

TheoryTCheck theory_t_check(const ConstantsBundle& constants, int T);

} // namespace qpalm
