#include "qpalm/constants.hpp"

#include <cmath>

namespace qpalm {

DriftBounds compute_drift_bounds(const BoundsBundle& bounds, double kappa_h, int p) {
    const double d0 = bounds.diameter;
    const double reach = bounds.grad_g_bound * d0 + 0.5 * kappa_h * d0 * d0;
    DriftBounds drift;
    drift.gamma1 = bounds.constraint_norm + std::sqrt(static_cast<double>(p)) * reach;
    drift.gamma2 = bounds.constraint_norm + reach;
    return drift;
}

double ConstantsBundle::kappa0_of(double multiplier_norm) const {
    return (2.0 * grad_f_bound * diameter + kappa_sigma_of(multiplier_norm) * diameter * diameter) /
           slater_margin;
}

double ConstantsBundle::kappa_sigma_of(double multiplier_norm) const {
    return 1.0 + c_sigma * multiplier_norm;
}

double ConstantsBundle::beta(double k, double sigma) const {
    return moduli[0] + sum_constraint_moduli * gamma2 * k * sigma;
}

double ConstantsBundle::beta_hat(double k, double sigma) const {
    const double sqrt_p = std::sqrt(static_cast<double>(p));
    const double smoothness = 2.0 * constraint_norm * sqrt_p * kappa_h +
                              2.0 * p * grad_g_bound * grad_g_bound +
                              0.5 * p * kappa_h * kappa_h * diameter * diameter;
    return beta(k, sigma) + 0.5 * kappa_sigma + 0.5 * sigma * smoothness +
           sqrt_p * kappa_h * gamma1 * k * sigma;
}

double ConstantsBundle::theta(double sigma, double alpha, double s, double multiplier_norm) const {
    return 0.5 * slater_margin * sigma * s + gamma1 * sigma * (s - 1.0) +
           alpha * diameter * diameter / (slater_margin * s) +
           (2.0 * grad_f_bound * diameter + kappa_sigma_of(multiplier_norm) * diameter * diameter) /
               slater_margin +
           sigma * constraint_norm * constraint_norm / slater_margin;
}

double ConstantsBundle::psi(double sigma, double alpha, double s, double multiplier_norm) const {
    return kappa0_of(multiplier_norm) + kappa1 * alpha / s + kappa2 * s + kappa3 * sigma +
           kappa4 * sigma * s;
}

ConstantsBundle compute_constants(const BoundsBundle& bounds, const Vec& moduli, double pad,
                                  double eta) {
    bounds.require_valid();
    if (moduli.size() < 2) throw InputError("compute_constants: need moduli for f and p >= 1 constraints");
    if (!(pad > 0.0)) throw InputError("compute_constants: pad must be positive");

    ConstantsBundle c;
    c.diameter = bounds.diameter;
    c.constraint_norm = bounds.constraint_norm;
    c.grad_f_bound = bounds.grad_f_bound;
    c.grad_g_bound = bounds.grad_g_bound;
    c.slater_margin = bounds.slater_margin;
    c.moduli = moduli;
    c.pad = pad;
    c.p = static_cast<int>(moduli.size()) - 1;

    c.kappa_h = 0.0;
    c.sum_constraint_moduli = 0.0;
    for (int i = 1; i <= c.p; ++i) {
        c.kappa_h = std::max(c.kappa_h, moduli[i] + pad);
        c.sum_constraint_moduli += moduli[i];
    }
    const double sqrt_p = std::sqrt(static_cast<double>(c.p));
    c.c_sigma = sqrt_p * c.kappa_h;

    const DriftBounds drift = compute_drift_bounds(bounds, c.kappa_h, c.p);
    c.gamma1 = drift.gamma1;
    c.gamma2 = drift.gamma2;

    const double d0 = c.diameter;
    const double eps0 = c.slater_margin;
    const double spread = sqrt_p * c.grad_g_bound * d0 + sqrt_p * d0 * d0 * c.kappa_h;
    c.gamma4 = c.constraint_norm * c.gamma1 + c.gamma1 * spread + 0.5 * spread * spread;
    c.gamma5 = 2.0 + sqrt_p * c.kappa_h * c.gamma1 + c.sum_constraint_moduli * c.gamma2;

    c.rho = d0 * d0 * c.c_sigma / eps0;
    c.eta = (eta > 0.0) ? eta : 16.0 * c.gamma5;

    c.kappa0_bar = (2.0 * c.grad_f_bound * d0 + d0 * d0) / eps0;
    c.kappa1 = d0 * d0 / eps0;
    c.kappa2 = 0.0;
    c.kappa3 = c.constraint_norm * c.constraint_norm / eps0 - c.gamma1;
    c.kappa4 = c.gamma1 + 0.5 * eps0 +
               (8.0 * c.gamma1 * c.gamma1 / eps0) *
                   std::log(32.0 * c.gamma1 * c.gamma1 / (eps0 * eps0));

    if (c.rho >= 1.0)
        throw ScheduleError("B5 violated: strict regularity ratio rho = " + std::to_string(c.rho) +
                                " >= 1; the uniform multiplier bound is unavailable",
                            c.rho);

    c.multiplier_bound = (c.kappa0_bar + c.eta * c.kappa1 + 1.0) / (1.0 - c.rho);
    c.kappa_sigma = c.kappa_sigma_of(c.multiplier_bound);
    c.kappa0_at_bound = c.kappa0_of(c.multiplier_bound);
    c.gamma3 = c.kappa0_at_bound + c.eta * c.kappa1 + c.kappa3 + c.kappa4;
    const double reach = c.grad_g_bound + 0.5 * c.kappa_h * d0;
    c.gamma6 = (c.grad_f_bound + reach * sqrt_p * (c.gamma3 + c.constraint_norm)) /
               (8.0 * c.gamma5);

    const double term1 = std::pow(moduli[0] + 0.5 * c.kappa_sigma, 3.0);
    const double term2 = 0.5 * (2.0 * c.constraint_norm * sqrt_p * c.kappa_h +
                                2.0 * c.p * c.grad_g_bound * c.grad_g_bound +
                                0.5 * c.p * c.kappa_h * c.kappa_h * d0 * d0);
    const double term3 = c.p * reach * reach / (16.0 * c.gamma5);
    c.t_min = std::max({term1, term2, term3});
    return c;
}

TheoryTCheck theory_t_check(const ConstantsBundle& c, int T) {
    TheoryTCheck check;
    check.term_curvature = std::pow(c.moduli[0] + 0.5 * c.kappa_sigma, 3.0);
    const double sqrt_p = std::sqrt(static_cast<double>(c.p));
    check.term_smoothness = 0.5 * (2.0 * c.constraint_norm * sqrt_p * c.kappa_h +
                                   2.0 * c.p * c.grad_g_bound * c.grad_g_bound +
                                   0.5 * c.p * c.kappa_h * c.kappa_h * c.diameter * c.diameter);
    const double reach = c.grad_g_bound + 0.5 * c.kappa_h * c.diameter;
    check.term_penalty = c.p * reach * reach / (16.0 * c.gamma5);
    check.t_min = std::max({check.term_curvature, check.term_smoothness, check.term_penalty});

    const double t = static_cast<double>(T);
    const double sigma = std::pow(t, -2.0 / 3.0);
    check.beta_hat_ok = c.beta_hat(t, sigma) <= c.gamma5 * std::cbrt(t);
    check.multiplier_bound_ok = c.kappa3 * std::pow(t, -2.0 / 3.0) + c.kappa4 * std::pow(t, -1.0 / 3.0) <= 1.0;

    if (t <= check.t_min) {
        check.reason = "T = " + std::to_string(T) + " does not exceed the threshold " +
                       std::to_string(check.t_min);
    } else if (!check.beta_hat_ok) {
        check.reason = "beta_hat_T(T^{-2/3}) exceeds gamma5 T^{1/3}";
    }
    check.ok = check.reason.empty();
    return check;
}

nlohmann::json ConstantsBundle::to_json() const {
    return {{"D0", diameter},
            {"nu_g", constraint_norm},
            {"kappa_f", grad_f_bound},
            {"kappa_g", grad_g_bound},
            {"eps0", slater_margin},
            {"pad", pad},
            {"p", p},
            {"moduli", std::vector<double>(moduli.begin(), moduli.end())},
            {"kappa_h", kappa_h},
            {"c_sigma", c_sigma},
            {"gamma1", gamma1},
            {"gamma2", gamma2},
            {"gamma3", gamma3},
            {"gamma4", gamma4},
            {"gamma5", gamma5},
            {"gamma6", gamma6},
            {"rho", rho},
            {"eta", eta},
            {"kappa0_bar", kappa0_bar},
            {"kappa1", kappa1},
            {"kappa2", kappa2},
            {"kappa3", kappa3},
            {"kappa4", kappa4},
            {"M_star", multiplier_bound},
            {"kappa_sigma", kappa_sigma},
            {"kappa0_at_bound", kappa0_at_bound},
            {"T_min", t_min}};
}

} // namespace qpalm
