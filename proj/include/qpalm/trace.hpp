#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpalm/types.hpp"

namespace qpalm {

// One outer iteration of any solver in this project. Optional diagnostics are
// NaN when not recorded. cpu_s is cumulative solver-loop time and stays zero
// when timing is disabled, which keeps traces byte-reproducible.
struct TraceRow {
    int t = 0;
    double f = 0.0;
    Vec g;
    double comp = 0.0;      // <lambda^t, g(x^t)>
    double lam_norm = 0.0;
    double step_norm = 0.0;
    int inner_iters = 0;
    double cpu_s = 0.0;
    double moreau_sq = std::numeric_limits<double>::quiet_NaN();
    double r_alpha = std::numeric_limits<double>::quiet_NaN();

    double max_violation() const { return g.size() ? g.maxCoeff() : 0.0; }
};

struct RunTrace {
    int p = 0;
    std::vector<TraceRow> rows;
    std::vector<Vec> multipliers; // lambda^t per row; in-memory only
    Vec final_x;
    Vec final_lambda;
    nlohmann::json config_echo;
    double wall_time_s = 0.0; // measured, never part of the CSV
    bool truncated_by_budget = false;

    // Aggregates recorded while the run had the full multiplier vectors.
    double min_multiplier = 0.0;
    double max_component_drift = 0.0;
    double max_norm_drift = 0.0;
    double max_step_norm = 0.0;

    int size() const { return static_cast<int>(rows.size()); }
};

// Fixed schema: t,f,g_1..g_p,g_max,comp,lam_norm,step_norm,inner_iters,cpu_s,
// moreau_sq,r_alpha. A single leading '#' line carries the config echo.
void write_trace_csv(const RunTrace& trace, std::ostream& out);
void write_trace_csv(const RunTrace& trace, const std::string& path);
RunTrace read_trace_csv(const std::string& path);

nlohmann::json trace_summary_json(const RunTrace& trace);

// Deterministic content digest (FNV-1a, hex) used to tie outputs to inputs.
std::string content_digest(const std::string& bytes);

} // namespace qpalm
