#include "qpalm/apg.hpp"

#include <cmath>

namespace qpalm {

void ApgConfig::validate() const {
    if (!(growth > 1.0)) throw InputError("ApgConfig: growth factor must exceed 1");
    if (!(step_init > 0.0) || !(step_tol > 0.0))
        throw InputError("ApgConfig: step_init and step_tol must be positive");
    if (max_iter < 1 || max_backtracks < 1)
        throw InputError("ApgConfig: iteration caps must be >= 1");
}

ApgResult apg_minimize(const ValueOracle& value, const GradOracle& gradient,
                       const Projection& project, const Vec& x0, const ApgConfig& config) {
    config.validate();

    ApgResult result;
    Vec x = project(x0);
    Vec y = x;
    Vec x_prev = x;

    double best_value = value(x);
    if (!std::isfinite(best_value)) throw NumericalError("apg: objective not finite at start");
    Vec best_point = x;

    double step_length = config.step_init;
    for (int k = 0; k < config.max_iter; ++k) {
        const double value_y = value(y);
        const Vec grad_y = gradient(y);
        if (!std::isfinite(value_y) || !grad_y.allFinite())
            throw NumericalError("apg: oracle returned a non-finite value at iteration " +
                                 std::to_string(k));

        // Smallest power of the growth factor passing the quadratic upper bound.
        Vec candidate;
        double candidate_value = 0.0;
        int backtracks = 0;
        for (;; ++backtracks) {
            candidate = project(y - grad_y / step_length);
            candidate_value = value(candidate);
            if (std::isnan(candidate_value))
                throw NumericalError("apg: objective returned NaN during backtracking");
            const Vec diff = candidate - y;
            const double bound =
                value_y + grad_y.dot(diff) + 0.5 * step_length * diff.squaredNorm();
            if (candidate_value <= bound) break;
            if (backtracks >= config.max_backtracks)
                throw NumericalError("apg: backtracking cap reached at step length " +
                                     std::to_string(step_length));
            step_length *= config.growth;
        }
        result.backtracks += backtracks;

        x_prev.swap(x);
        x = candidate;
        if (config.record_audit)
            result.audit.push_back({y, x, step_length});
        if (candidate_value < best_value) {
            best_value = candidate_value;
            best_point = x;
        }

        result.iterations = k + 1;
        result.final_step_norm = (x - x_prev).norm();
        if (result.final_step_norm < config.step_tol) {
            result.converged = true;
            break;
        }
        const double momentum = static_cast<double>(k) / static_cast<double>(k + 3);
        y = x + momentum * (x - x_prev);
    }

    result.minimizer = best_point;
    result.value = best_value;
    return result;
}

bool apg_audit_holds(const ApgAuditEntry& entry, const ValueOracle& value,
                     const GradOracle& gradient, double slack) {
    const Vec diff = entry.x_next - entry.y;
    const double lhs = value(entry.x_next);
    const double rhs = value(entry.y) + gradient(entry.y).dot(diff) +
                       0.5 * entry.step_length * diff.squaredNorm();
    return lhs <= rhs + slack * (1.0 + std::abs(rhs));
}

} // namespace qpalm
