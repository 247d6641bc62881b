#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>

namespace qpalm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

using ValueOracle = std::function<double(const Vec&)>;
using GradOracle = std::function<Vec(const Vec&)>;

// Bad user input: dimensions, malformed files, invalid configuration.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Failure inside a numerical routine (NaN oracle, backtracking cap, ...).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A schedule precondition does not hold (e.g. the strict regularity ratio >= 1).
struct ScheduleError : std::runtime_error {
    double rho;
    explicit ScheduleError(const std::string& msg, double rho_value)
        : std::runtime_error(msg), rho(rho_value) {}
};

} // namespace qpalm
