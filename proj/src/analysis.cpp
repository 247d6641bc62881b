#include "qpalm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace qpalm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::optional<FitResult> envelope_fit(const std::vector<MetricPoint>& curve, FitMode mode) {
    std::vector<MetricPoint> positive;
    for (const MetricPoint& pt : curve)
        if (pt.value > 0.0 && pt.t_prime >= 1) positive.push_back(pt);
    if (positive.size() < 10) return std::nullopt;

    FitResult fit;
    fit.points_used = static_cast<int>(positive.size());
    fit.dropped_fraction =
        1.0 - static_cast<double>(positive.size()) / static_cast<double>(curve.size());

    if (mode == FitMode::FixedThird) {
        fit.exponent = -1.0 / 3.0;
    } else {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const MetricPoint& pt : positive) {
            const double lx = std::log(static_cast<double>(pt.t_prime));
            const double ly = std::log(pt.value);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        const double n = static_cast<double>(positive.size());
        const double denom = n * sxx - sx * sx;
        const double slope = denom > 0.0 ? (n * sxy - sx * sy) / denom : -1.0 / 3.0;
        fit.exponent = std::clamp(slope, -2.0 / 3.0, -1.0 / 3.0);
    }

    // Smallest majorizing constant.
    double coeff = 0.0;
    for (const MetricPoint& pt : positive)
        coeff = std::max(coeff, pt.value / std::pow(static_cast<double>(pt.t_prime), fit.exponent));
    fit.coefficient = coeff;

    double sq_sum = 0.0;
    for (const MetricPoint& pt : positive) {
        const double fitted =
            std::log(coeff) + fit.exponent * std::log(static_cast<double>(pt.t_prime));
        const double diff = std::log(pt.value) - fitted;
        sq_sum += diff * diff;
    }
    fit.residual = std::sqrt(sq_sum / positive.size());

    fit.majorizes = true;
    for (const MetricPoint& pt : curve)
        if (pt.value > coeff * std::pow(static_cast<double>(pt.t_prime), fit.exponent)) {
            fit.majorizes = false;
            break;
        }
    return fit;
}

double loglog_slope(const std::vector<MetricPoint>& curve, double t_min, double t_max) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const MetricPoint& pt : curve) {
        if (pt.t_prime < t_min || pt.t_prime > t_max || pt.value <= 0.0) continue;
        const double lx = std::log(static_cast<double>(pt.t_prime));
        const double ly = std::log(pt.value);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    const double denom = n * sxx - sx * sx;
    if (denom <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (n * sxy - sx * sy) / denom;
}

double time_to_success(const RunOutcome& outcome, double target_decrease) {
    if (target_decrease <= 0.0) return 0.0;
    for (std::size_t k = 0; k < outcome.best_so_far.size(); ++k)
        if (outcome.initial_objective - outcome.best_so_far[k] >= target_decrease)
            return outcome.cpu_s[k];
    return kInf;
}

std::vector<SolverProfile> data_profile(const std::vector<RunOutcome>& outcomes,
                                        const std::vector<double>& time_grid,
                                        double decrease_fraction) {
    std::set<std::string> solvers;
    std::set<std::string> instances;
    for (const RunOutcome& o : outcomes) {
        solvers.insert(o.solver);
        instances.insert(o.instance_id);
    }
    if (solvers.size() < 2 || instances.empty())
        throw InputError("data_profile: need at least two solvers and one instance");

    // Best decrease per instance across all solvers.
    std::map<std::string, double> best_decrease;
    for (const RunOutcome& o : outcomes) {
        const double decrease = o.initial_objective - o.best_objective;
        auto [it, inserted] = best_decrease.try_emplace(o.instance_id, decrease);
        if (!inserted) it->second = std::max(it->second, decrease);
    }

    std::map<std::string, std::vector<double>> success_times;
    for (const RunOutcome& o : outcomes)
        success_times[o.solver].push_back(
            time_to_success(o, decrease_fraction * best_decrease.at(o.instance_id)));

    std::vector<SolverProfile> profiles;
    const double count = static_cast<double>(instances.size());
    for (const auto& [solver, times] : success_times) {
        SolverProfile profile;
        profile.solver = solver;
        for (double budget : time_grid) {
            const auto solved = std::count_if(times.begin(), times.end(),
                                              [budget](double t) { return t <= budget; });
            profile.points.push_back({budget, static_cast<double>(solved) / count});
        }
        profiles.push_back(std::move(profile));
    }
    return profiles;
}

std::vector<TargetPoint> time_to_target(const RunOutcome& outcome, double f_ref,
                                        const std::vector<double>& theta_grid) {
    const double span = outcome.initial_objective - f_ref;
    if (!(span > 0.0))
        throw InputError("time_to_target: f(x^0) must exceed the reference value");

    std::vector<TargetPoint> points;
    for (double theta : theta_grid) {
        if (theta <= 0.0) {
            points.push_back({theta, 0.0});
            continue;
        }
        double when = kInf;
        for (std::size_t k = 0; k < outcome.best_so_far.size(); ++k) {
            const double progress = (outcome.initial_objective - outcome.best_so_far[k]) / span;
            if (progress >= theta) {
                when = outcome.cpu_s[k];
                break;
            }
        }
        points.push_back({theta, when});
    }
    return points;
}

RunOutcome outcome_from_trace(const RunTrace& trace, const std::string& solver,
                              const std::string& instance_id) {
    if (trace.rows.empty()) throw InputError("outcome_from_trace: empty trace");
    RunOutcome outcome;
    outcome.solver = solver;
    outcome.instance_id = instance_id;
    outcome.initial_objective = trace.rows.front().f;
    double best = kInf;
    for (const TraceRow& row : trace.rows) {
        best = std::min(best, row.f);
        outcome.best_so_far.push_back(best);
        outcome.cpu_s.push_back(row.cpu_s);
    }
    outcome.best_objective = best;
    return outcome;
}

} // namespace qpalm
