#pragma once

#include <optional>

#include "qpalm/apg.hpp"
#include "qpalm/constants.hpp"
#include "qpalm/surrogate.hpp"
#include "qpalm/trace.hpp"

namespace qpalm {

enum class ScheduleMode { Theory, Practical };

// Penalty and proximal parameters for a T-iteration run: sigma = T^{-2/3} in
// both modes, alpha = 16 gamma5 T^{1/3} under the theory schedule and
// c_alpha T^{1/3} in practical mode.
struct Schedule {
    double sigma = 0.0;
    double alpha = 0.0;
};

Schedule make_schedule(int T, ScheduleMode mode, const ConstantsBundle* constants,
                       double c_alpha);

struct QpalmConfig {
    int T = 1000;
    ScheduleMode mode = ScheduleMode::Practical;
    double c_alpha = 10.0; // practical-mode step scale
    double pad = 0.1;      // curvature pad
    ApgConfig inner;
    std::uint64_t seed = 0;
    bool record_moreau = false;
    int moreau_every = 10;
    bool record_kkt_residual = true;
    bool timing = false;            // measured cpu_s per row when true
    double budget_s = 0.0;          // wall-clock cap per run; 0 disables
    std::optional<Vec> initial_point; // defaults to the Slater point

    void validate() const;
};

struct SolverState {
    int t = 1;
    Vec x;
    Vec lambda;
};

// One outer iteration: build the surrogate at (x^t, lambda^t), minimize it
// with APG started at x^t, then the clipped multiplier update. Returns the
// new state together with the metric row for iteration t.
std::pair<SolverState, TraceRow> qpalm_step(const SolverState& state, const Problem& problem,
                                            double sigma, double alpha, double pad,
                                            const ApgConfig& inner);

// Full run from (x^1, lambda^1 = 0). `bounds` provides the default start point
// and, in theory mode, the constants for the schedule.
RunTrace qpalm_run(const Problem& problem, const BoundsBundle& bounds, const QpalmConfig& config);

} // namespace qpalm
