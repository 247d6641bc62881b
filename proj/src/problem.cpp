#include "qpalm/problem.hpp"

#include "qpalm/rng.hpp"

namespace qpalm {

Vec Problem::constraint_values(const Vec& x) const {
    Vec values(p);
    for (int i = 0; i < p; ++i) values[i] = g[i](x);
    return values;
}

double Problem::lagrangian(const Vec& x, const Vec& lambda) const {
    if (lambda.size() != p) throw InputError("lagrangian: multiplier length != p");
    double value = f(x);
    for (int i = 0; i < p; ++i) value += lambda[i] * g[i](x);
    return value;
}

Vec Problem::grad_lagrangian(const Vec& x, const Vec& lambda) const {
    if (lambda.size() != p) throw InputError("grad_lagrangian: multiplier length != p");
    Vec grad = grad_f(x);
    for (int i = 0; i < p; ++i)
        if (lambda[i] != 0.0) grad += lambda[i] * grad_g[i](x);
    return grad;
}

void Problem::check_shapes() const {
    if (n < 1 || p < 0) throw InputError("Problem: need n >= 1, p >= 0");
    if (box.dim() != n) throw InputError("Problem: box dimension != n");
    if (static_cast<int>(g.size()) != p || static_cast<int>(grad_g.size()) != p)
        throw InputError("Problem: constraint oracle count != p");
    if (moduli.size() != p + 1) throw InputError("Problem: moduli must have length p+1");
    for (int i = 0; i <= p; ++i)
        if (moduli[i] < 0.0) throw InputError("Problem: moduli must be nonnegative");
}

void BoundsBundle::require_valid() const {
    if (!(diameter > 0.0) || !(constraint_norm > 0.0) || !(grad_f_bound > 0.0) ||
        !(grad_g_bound > 0.0) || !(slater_margin > 0.0))
        throw InputError("BoundsBundle: all entries must be strictly positive");
    if (slater_point.size() == 0) throw InputError("BoundsBundle: missing strictly feasible point");
}

BoundsAudit verify_bounds(const Problem& problem, const BoundsBundle& bounds,
                          int samples, std::uint64_t seed) {
    if (samples < 1) throw InputError("verify_bounds: samples >= 1 required");
    Rng rng(derive_seed(seed, "bounds-audit"));

    BoundsAudit audit;
    audit.samples = samples;
    for (int s = 0; s < samples; ++s) {
        Vec x(problem.n);
        for (int j = 0; j < problem.n; ++j)
            x[j] = rng.uniform(problem.box.lower[j], problem.box.upper[j]);
        audit.observed_constraint_norm =
            std::max(audit.observed_constraint_norm, problem.constraint_values(x).norm());
        audit.observed_grad_f = std::max(audit.observed_grad_f, problem.grad_f(x).norm());
        for (int i = 0; i < problem.p; ++i)
            audit.observed_grad_g = std::max(audit.observed_grad_g, problem.grad_g[i](x).norm());
    }

    audit.slater_worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < problem.p; ++i)
        audit.slater_worst = std::max(audit.slater_worst, problem.g[i](bounds.slater_point));

    audit.constraint_norm_ok = audit.observed_constraint_norm <= bounds.constraint_norm;
    audit.grad_f_ok = audit.observed_grad_f <= bounds.grad_f_bound;
    audit.grad_g_ok = audit.observed_grad_g <= bounds.grad_g_bound;
    audit.slater_ok = audit.slater_worst <= -bounds.slater_margin;
    return audit;
}

} // namespace qpalm
