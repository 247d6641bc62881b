#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "qpalm/problem.hpp"

namespace qpalm {

// Largest value of |phi''| for the sigmoid phi(u) = 1/(1+exp(u)); equals
// sqrt(3)/18, attained at u = +-log(2+sqrt(3)). The unit test re-derives it by
// dense grid search.
inline constexpr double kSigmoidCurvatureBound = 0.09622504486493762;

// Numerically stable sigmoid and its first derivative.
double sigmoid(double u);
double sigmoid_derivative(double u);

// Binary classification with a false-positive budget:
//   min  f(x) = mean_i phi(x . a0_i)      (false negatives)
//   s.t. g(x) = mean_i phi(-x . a1_i) - tau <= 0   (false positives)
// over the box [-R_box, R_box]^d.
struct NpInstance {
    Mat positives;  // A0, one sample per row
    Mat negatives;  // A1
    double tau = 0.2;
    double box_half_width = 10.0;
    nlohmann::json provenance; // synth spec or dataset path, echoed into JSON

    int dim() const { return static_cast<int>(positives.cols()); }

    double eval_objective(const Vec& x) const;
    Vec grad_objective(const Vec& x) const;
    double eval_constraint(const Vec& x) const;
    Vec grad_constraint(const Vec& x) const;

    // (L_0, L_1) = curvature bound times the largest squared row norm per class.
    std::pair<double, double> moduli() const;
};

enum class LabelRule {
    Sign,    // label > 0 -> positive class
    OddEven, // odd integer label -> positive class
};

// Parses "label idx:val ..." lines (1-based indices) into dense rows. Rows
// beyond max_rows are thinned by seeded reservoir sampling.
NpInstance np_load_dataset(const std::string& path, LabelRule rule, double tau,
                           double box_half_width, int max_rows = 5000,
                           std::uint64_t seed = 0);

// Two Gaussian clusters with means +-(separation/sqrt(d)) * 1.
NpInstance np_synth_generate(int n_pos, int n_neg, int dim, double separation,
                             std::uint64_t seed, double tau = 0.2,
                             double box_half_width = 10.0);

Problem np_make_problem(const NpInstance& inst);

// Norm-based bounds; the strictly feasible point is found by a projected
// gradient run on g and must reach g < 0 for the bundle to be valid.
BoundsBundle np_bounds(const NpInstance& inst);

nlohmann::json np_payload_json(const NpInstance& inst);
NpInstance np_from_payload_json(const nlohmann::json& payload);

} // namespace qpalm
