#pragma once

#include <functional>
#include <vector>

#include "qpalm/types.hpp"

namespace qpalm {

using Projection = std::function<Vec(const Vec&)>;

struct ApgConfig {
    double growth = 2.0;       // backtracking growth factor, > 1
    double step_init = 1.0;    // initial step-length estimate L_{-1}
    double step_tol = 1e-6;    // stop when ||x^{k+1} - x^k|| < step_tol
    int max_iter = 5000;
    int max_backtracks = 60;
    bool record_audit = false; // keep per-iteration acceptance certificates

    void validate() const;
};

// Acceptance certificate for one accelerated step: the sufficient-decrease
// inequality can be re-checked from these fields alone.
struct ApgAuditEntry {
    Vec y;
    Vec x_next;
    double step_length; // accepted L_k
};

struct ApgResult {
    Vec minimizer;           // best-so-far point, always inside the feasible set
    int iterations = 0;
    double final_step_norm = 0.0;
    int backtracks = 0;      // total backtracking increments across the run
    bool converged = false;  // step-norm criterion met before the iteration cap
    double value = 0.0;      // objective at the minimizer
    std::vector<ApgAuditEntry> audit;
};

// Accelerated projected gradient with backtracking: x^{k+1} = P[y^k - grad(y^k)/L_k],
// momentum y^{k+1} = x^{k+1} + k/(k+3) (x^{k+1} - x^k), L never decreased.
// Callers are responsible for convexity; on nonconvex problems this acts as a
// local method. The returned point never has a larger value than x0.
ApgResult apg_minimize(const ValueOracle& value, const GradOracle& gradient,
                       const Projection& project, const Vec& x0, const ApgConfig& config);

// Re-check the sufficient-decrease inequality of one accepted step.
bool apg_audit_holds(const ApgAuditEntry& entry, const ValueOracle& value,
                     const GradOracle& gradient, double slack = 1e-10);

} // namespace qpalm
