#include "qpalm/surrogate.hpp"

namespace qpalm {

double SurrogateModel::eval_q(int i, const Vec& x) const {
    const Vec diff = x - anchor;
    const double sq = diff.squaredNorm();
    if (i == 0)
        return f_anchor + grad_f_anchor.dot(diff) + 0.5 * curvature.objective_curvature * sq;
    return g_anchor[i - 1] + grad_g_anchor.col(i - 1).dot(diff) +
           0.5 * curvature.constraint_curvature[i - 1] * sq;
}

Vec SurrogateModel::grad_q(int i, const Vec& x) const {
    const Vec diff = x - anchor;
    if (i == 0) return grad_f_anchor + curvature.objective_curvature * diff;
    return grad_g_anchor.col(i - 1) + curvature.constraint_curvature[i - 1] * diff;
}

double SurrogateModel::subproblem_value(const Vec& x) const {
    const Vec diff = x - anchor;
    const double sq = diff.squaredNorm();
    double value = f_anchor + grad_f_anchor.dot(diff) +
                   0.5 * curvature.objective_curvature * sq + 0.5 * alpha * sq;
    double penalty = 0.0;
    for (int i = 0; i < constraints(); ++i) {
        const double q_i = g_anchor[i] + grad_g_anchor.col(i).dot(diff) +
                           0.5 * curvature.constraint_curvature[i] * sq;
        const double shifted = std::max(0.0, lambda[i] + sigma * q_i);
        penalty += shifted * shifted;
    }
    value += (penalty - lambda.squaredNorm()) / (2.0 * sigma);
    return value;
}

Vec SurrogateModel::subproblem_gradient(const Vec& x) const {
    const Vec diff = x - anchor;
    const double sq = diff.squaredNorm();
    Vec grad = grad_f_anchor + (curvature.objective_curvature + alpha) * diff;
    for (int i = 0; i < constraints(); ++i) {
        const double s_i = curvature.constraint_curvature[i];
        const double q_i = g_anchor[i] + grad_g_anchor.col(i).dot(diff) + 0.5 * s_i * sq;
        const double shifted = std::max(0.0, lambda[i] + sigma * q_i);
        if (shifted > 0.0) grad += shifted * (grad_g_anchor.col(i) + s_i * diff);
    }
    return grad;
}

SurrogateModel build_surrogate(const Problem& problem, const Vec& x_t, const Vec& lambda_t,
                               double pad, double sigma, double alpha) {
    if (lambda_t.size() != problem.p)
        throw InputError("build_surrogate: multiplier length != p");
    if (lambda_t.size() > 0 && lambda_t.minCoeff() < 0.0)
        throw InputError("build_surrogate: multipliers must be nonnegative");
    if (!(pad > 0.0)) throw InputError("build_surrogate: pad must be positive");

    SurrogateModel model;
    model.anchor = x_t;
    model.lambda = lambda_t;
    model.sigma = sigma;
    model.alpha = alpha;
    model.f_anchor = problem.f(x_t);
    model.grad_f_anchor = problem.grad_f(x_t);
    model.g_anchor = Vec(problem.p);
    model.grad_g_anchor = Mat(problem.n, problem.p);
    for (int i = 0; i < problem.p; ++i) {
        model.g_anchor[i] = problem.g[i](x_t);
        model.grad_g_anchor.col(i) = problem.grad_g[i](x_t);
    }

    model.curvature.pad = pad;
    model.curvature.constraint_curvature = Vec(problem.p);
    double sigma0 = 1.0;
    for (int i = 0; i < problem.p; ++i) {
        const double depth = problem.moduli[i + 1] + pad;
        model.curvature.constraint_curvature[i] = -depth;
        sigma0 += lambda_t[i] * depth;
    }
    model.curvature.objective_curvature = sigma0;
    return model;
}

} // namespace qpalm
