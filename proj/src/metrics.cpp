#include "qpalm/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace qpalm {

Vec kkt_residual(const Problem& problem, const Vec& x, const Vec& lambda, double alpha) {
    if (!(alpha > 0.0)) throw InputError("kkt_residual: alpha must be positive");
    const Vec grad = problem.grad_lagrangian(x, lambda);
    return alpha * (x - problem.box.project(x - grad / alpha));
}

bool epsilon_kkt(const Problem& problem, const Vec& x, const Vec& lambda, double alpha,
                 double eps) {
    if (!(eps > 0.0)) throw InputError("epsilon_kkt: eps must be positive");
    if (kkt_residual(problem, x, lambda, alpha).norm() > eps) return false;
    const Vec g = problem.constraint_values(x);
    if (-lambda.dot(g) > eps) return false;
    if (g.size() && g.maxCoeff() > eps) return false;
    if (lambda.size() && lambda.minCoeff() < -eps) return false;
    return true;
}

MoreauGradient moreau_gradient(const Problem& problem, const Vec& x, const Vec& lambda,
                               double alpha, ApgConfig inner) {
    if (!(alpha > 0.0)) throw InputError("moreau_gradient: alpha must be positive");
    // Weak-convexity modulus of z -> L(z, lambda); alpha must dominate it for
    // the proximal subproblem to be strongly convex.
    double modulus = problem.moduli[0];
    for (int i = 0; i < problem.p; ++i) modulus += lambda[i] * problem.moduli[i + 1];

    const auto value = [&](const Vec& z) {
        return problem.lagrangian(z, lambda) + 0.5 * alpha * (z - x).squaredNorm();
    };
    const auto gradient = [&](const Vec& z) {
        return Vec(problem.grad_lagrangian(z, lambda) + alpha * (z - x));
    };

    inner.step_tol = std::min(inner.step_tol, 1e-8);
    MoreauGradient result;
    try {
        const ApgResult apg = apg_minimize(
            value, gradient, [&](const Vec& z) { return problem.box.project(z); }, x, inner);
        result.proximal_point = apg.minimizer;
        result.converged = apg.converged;
    } catch (const NumericalError&) {
        // Non-convergence is reported, not fatal: the row is flagged instead.
        result.proximal_point = x;
        result.converged = false;
    }
    result.gradient = alpha * (x - result.proximal_point);
    result.reliable = result.converged && alpha > modulus;
    return result;
}

AveragedCurves averaged_curves(const RunTrace& trace) {
    if (trace.rows.empty()) throw InputError("averaged_curves: empty trace");

    AveragedCurves curves;
    Vec violation_sum = Vec::Zero(trace.p);
    double comp_sum = 0.0;
    double moreau_sum = 0.0;
    int moreau_count = 0;
    int t_prime = 0;
    for (const TraceRow& row : trace.rows) {
        ++t_prime;
        violation_sum += row.g;
        comp_sum += row.comp;
        if (std::isfinite(row.moreau_sq)) {
            moreau_sum += row.moreau_sq;
            ++moreau_count;
            curves.stationarity.push_back({t_prime, moreau_sum / moreau_count});
        }
        curves.violation.push_back({t_prime, violation_sum.maxCoeff() / t_prime});
        curves.complementarity.push_back({t_prime, -comp_sum / t_prime});
    }
    return curves;
}

void write_curves_csv(const AveragedCurves& curves, std::ostream& out) {
    out << "metric,T_prime,value\n";
    auto emit = [&out](const char* name, const std::vector<MetricPoint>& curve) {
        char buf[40];
        for (const MetricPoint& pt : curve) {
            std::snprintf(buf, sizeof buf, "%.17g", pt.value);
            out << name << ',' << pt.t_prime << ',' << buf << "\n";
        }
    };
    emit("stationarity", curves.stationarity);
    emit("violation", curves.violation);
    emit("complementarity", curves.complementarity);
}

void write_curves_csv(const AveragedCurves& curves, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open curves file for writing: " + path);
    write_curves_csv(curves, out);
}

} // namespace qpalm
