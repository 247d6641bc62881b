#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpalm/metrics.hpp"

namespace qpalm {

enum class FitMode {
    FreeInBand, // least-squares log-log slope clamped to [-2/3, -1/3]
    FixedThird, // exponent pinned at -1/3 (constraint-violation fits)
};

// Power-law upper envelope a * T^exponent of a metric trajectory: the
// exponent from the band rule, the coefficient as the smallest constant that
// majorizes every observed point.
struct FitResult {
    double exponent = 0.0;
    double coefficient = 0.0;
    double residual = 0.0;        // rms log-space residual of the fit line
    bool majorizes = false;       // re-verified pointwise after construction
    int points_used = 0;
    double dropped_fraction = 0.0; // share of non-positive values excluded
};

// Returns nothing when fewer than 10 positive points are available.
std::optional<FitResult> envelope_fit(const std::vector<MetricPoint>& curve, FitMode mode);

// Least-squares slope of log(value) vs log(t) over t in [t_min, t_max].
// NaN when fewer than two positive points fall in the window.
double loglog_slope(const std::vector<MetricPoint>& curve, double t_min, double t_max);

// One (solver, instance) outcome for the data profile.
struct RunOutcome {
    std::string solver;
    std::string instance_id;
    double initial_objective = 0.0;
    double best_objective = 0.0;   // min_t f(x^t)
    // Cumulative solver time and best-so-far objective per outer iteration.
    std::vector<double> cpu_s;
    std::vector<double> best_so_far;
};

struct ProfilePoint {
    double budget_s;
    double solved_fraction;
};

struct SolverProfile {
    std::string solver;
    std::vector<ProfilePoint> points;
};

// Success on an instance: reaching at least `decrease_fraction` of the best
// objective decrease any solver achieved there. profile(t) is the fraction of
// instances whose success time is <= t.
std::vector<SolverProfile> data_profile(const std::vector<RunOutcome>& outcomes,
                                        const std::vector<double>& time_grid,
                                        double decrease_fraction = 0.8);

// Smallest cpu time at which solver reached the fraction; +inf when never.
double time_to_success(const RunOutcome& outcome, double target_decrease);

struct TargetPoint {
    double theta;
    double time_s; // +inf when the target level is never reached
};

// Time-to-target curve: for each theta, the first cumulative time with
// (f(x^0) - best so far) / (f(x^0) - f_ref) >= theta.
std::vector<TargetPoint> time_to_target(const RunOutcome& outcome, double f_ref,
                                        const std::vector<double>& theta_grid);

RunOutcome outcome_from_trace(const RunTrace& trace, const std::string& solver,
                              const std::string& instance_id);

} // namespace qpalm
