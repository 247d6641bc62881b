#include "qpalm/qcqp.hpp"

#include <Eigen/Eigenvalues>
#include <memory>
#include <Eigen/QR>
#include <cmath>

#include "qpalm/rng.hpp"

namespace qpalm {

namespace {

// Orthogonal factor of a Householder QR with the sign convention that the
// diagonal of R is nonnegative, which pins the factorization uniquely.
Mat random_orthogonal(int n, Rng& rng) {
    Mat gaussian = rng.normal_mat(n, n);
    Eigen::HouseholderQR<Mat> qr(gaussian);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
        if (r(j, j) < 0.0) q.col(j) *= -1.0;
    return q;
}

Mat symmetric_from_spectrum(const Vec& eigenvalues, Rng& rng) {
    const int n = static_cast<int>(eigenvalues.size());
    Mat u = random_orthogonal(n, rng);
    Mat q = u.transpose() * eigenvalues.asDiagonal() * u;
    return 0.5 * (q + q.transpose()); // exact symmetry
}

double spectral_norm(const Mat& symmetric) {
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetric, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("qcqp: eigen-solve failed");
    return std::max(std::abs(es.eigenvalues().minCoeff()), std::abs(es.eigenvalues().maxCoeff()));
}

} // namespace

int QcqpGenSpec::resolved_indefinite(int p) const {
    if (indefinite_constraints >= 0) return indefinite_constraints;
    return static_cast<int>(std::ceil(0.2 * p));
}

double QcqpInstance::eval_objective(const Vec& x) const {
    return 0.5 * x.dot(Q[0] * x) + c[0].dot(x);
}

Vec QcqpInstance::grad_objective(const Vec& x) const { return Q[0] * x + c[0]; }

double QcqpInstance::eval_constraint(int i, const Vec& x) const {
    return 0.5 * x.dot(Q[i + 1] * x) + c[i + 1].dot(x) - r[i];
}

Vec QcqpInstance::grad_constraint(int i, const Vec& x) const { return Q[i + 1] * x + c[i + 1]; }

QcqpInstance qcqp_generate(int n, int p, double half_width, const QcqpGenSpec& spec,
                           std::uint64_t seed) {
    if (n < 1 || p < 1 || !(half_width > 0.0))
        throw InputError("qcqp_generate: need n >= 1, p >= 1, R > 0");
    if (spec.neg_fraction_obj < 0.0 || spec.neg_fraction_obj > 1.0 ||
        spec.neg_fraction_constraint < 0.0 || spec.neg_fraction_constraint > 1.0)
        throw InputError("qcqp_generate: eigenvalue fractions must lie in [0, 1]");
    if (!(spec.delta_min > 0.0) || spec.delta_max < spec.delta_min)
        throw InputError("qcqp_generate: delta range must be positive");

    const int neg_obj = static_cast<int>(std::ceil(spec.neg_fraction_obj * n));
    const int neg_con = static_cast<int>(std::ceil(spec.neg_fraction_constraint * n));
    if (neg_obj > n || neg_con > n)
        throw InputError("qcqp_generate: requested more negative eigenvalues than n");
    if (neg_obj > 0 && spec.objective_curvature < 0.1)
        throw InputError("qcqp_generate: objective curvature target below the 0.1 eigenvalue floor");
    const int indefinite = spec.resolved_indefinite(p);
    if (indefinite > p) throw InputError("qcqp_generate: indefinite constraint count exceeds p");
    if (indefinite > 0 && neg_con > 0 && spec.constraint_curvature < 0.1)
        throw InputError("qcqp_generate: constraint curvature target below the 0.1 eigenvalue floor");

    Rng rng(derive_seed(seed, "qcqp-instance"));

    QcqpInstance inst;
    inst.n = n;
    inst.p = p;
    inst.half_width = half_width;
    inst.spec = spec;
    inst.seed = seed;
    inst.Q.reserve(p + 1);
    inst.c.reserve(p + 1);

    // Objective spectrum: a prescribed share of negative eigenvalues, rest in [0.5, 3].
    {
        Vec eigs(n);
        for (int j = 0; j < neg_obj; ++j) eigs[j] = rng.uniform(-spec.objective_curvature, -0.1);
        for (int j = neg_obj; j < n; ++j) eigs[j] = rng.uniform(0.5, 3.0);
        inst.Q.push_back(symmetric_from_spectrum(eigs, rng));
        inst.c.push_back(spec.tau_obj * rng.normal_vec(n));
    }

    // The first `indefinite` constraints carry negative curvature, the rest are PSD.
    for (int i = 0; i < p; ++i) {
        Vec eigs(n);
        const int neg = (i < indefinite) ? neg_con : 0;
        for (int j = 0; j < neg; ++j) eigs[j] = rng.uniform(-spec.constraint_curvature, -0.1);
        for (int j = neg; j < n; ++j) eigs[j] = rng.uniform(0.5, 3.0);
        inst.Q.push_back(symmetric_from_spectrum(eigs, rng));
        inst.c.push_back(spec.tau_con * rng.normal_vec(n));
    }

    inst.x_star = rng.uniform_vec(n, -half_width, half_width);
    inst.delta = Vec(p);
    inst.r = Vec(p);
    for (int i = 0; i < p; ++i) {
        inst.delta[i] = rng.uniform(spec.delta_min, spec.delta_max);
        inst.r[i] = 0.5 * inst.x_star.dot(inst.Q[i + 1] * inst.x_star) +
                    inst.c[i + 1].dot(inst.x_star) + inst.delta[i];
    }
    return inst;
}

Vec qcqp_exact_moduli(const QcqpInstance& inst) {
    Vec moduli(inst.p + 1);
    for (int k = 0; k <= inst.p; ++k) {
        Eigen::SelfAdjointEigenSolver<Mat> es(inst.Q[k], Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw NumericalError("qcqp_exact_moduli: eigen-solve failed");
        moduli[k] = std::max(0.0, -es.eigenvalues().minCoeff());
    }
    return moduli;
}

BoundsBundle qcqp_analytic_bounds(const QcqpInstance& inst) {
    const double R = inst.half_width;
    const double radius = R * std::sqrt(static_cast<double>(inst.n)); // max ||x|| over the box

    BoundsBundle b;
    b.diameter = 2.0 * radius;
    b.grad_f_bound = spectral_norm(inst.Q[0]) * radius + inst.c[0].norm();

    double max_grad_g = 0.0;
    double max_abs_g = 0.0;
    for (int i = 0; i < inst.p; ++i) {
        const double q_norm = spectral_norm(inst.Q[i + 1]);
        max_grad_g = std::max(max_grad_g, q_norm * radius + inst.c[i + 1].norm());
        max_abs_g = std::max(max_abs_g, 0.5 * q_norm * inst.n * R * R +
                                            inst.c[i + 1].norm() * radius + std::abs(inst.r[i]));
    }
    b.grad_g_bound = max_grad_g;
    b.constraint_norm = std::sqrt(static_cast<double>(inst.p)) * max_abs_g;
    // min_i -g_i(x_star) evaluated through the oracles, so the margin is exact
    // in the arithmetic actually used (equals min_i delta_i up to rounding).
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < inst.p; ++i)
        margin = std::min(margin, -inst.eval_constraint(i, inst.x_star));
    b.slater_margin = margin;
    b.slater_point = inst.x_star;
    return b;
}

Problem qcqp_make_problem(const QcqpInstance& inst) {
    auto shared = std::make_shared<QcqpInstance>(inst);
    Problem problem;
    problem.n = inst.n;
    problem.p = inst.p;
    problem.box = inst.box();
    problem.f = [shared](const Vec& x) { return shared->eval_objective(x); };
    problem.grad_f = [shared](const Vec& x) { return shared->grad_objective(x); };
    for (int i = 0; i < inst.p; ++i) {
        problem.g.push_back([shared, i](const Vec& x) { return shared->eval_constraint(i, x); });
        problem.grad_g.push_back([shared, i](const Vec& x) { return shared->grad_constraint(i, x); });
    }
    problem.moduli = qcqp_exact_moduli(inst);
    problem.check_shapes();
    return problem;
}

double qcqp_objective_lower_bound(const QcqpInstance& inst) {
    Eigen::SelfAdjointEigenSolver<Mat> es(inst.Q[0], Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("qcqp lower bound: eigen-solve failed");
    const double lam_min = es.eigenvalues().minCoeff();
    const double sq_radius = inst.n * inst.half_width * inst.half_width;
    // 1/2 x^T Q x >= min(0, lam_min)/2 ||x||^2 and the linear part is bounded
    // coordinatewise on the symmetric box.
    return 0.5 * std::min(0.0, lam_min) * sq_radius -
           inst.half_width * inst.c[0].cwiseAbs().sum();
}

nlohmann::json qcqp_payload_json(const QcqpInstance& inst) {
    nlohmann::json payload;
    payload["R"] = inst.half_width;
    payload["seed"] = inst.seed;
    auto mat_flat = [](const Mat& m) {
        std::vector<double> flat;
        flat.reserve(m.size());
        for (int row = 0; row < m.rows(); ++row)
            for (int col = 0; col < m.cols(); ++col) flat.push_back(m(row, col));
        return flat;
    };
    for (const Mat& q : inst.Q) payload["Q"].push_back(mat_flat(q));
    for (const Vec& v : inst.c) payload["c"].push_back(std::vector<double>(v.begin(), v.end()));
    payload["r"] = std::vector<double>(inst.r.begin(), inst.r.end());
    payload["x_star"] = std::vector<double>(inst.x_star.begin(), inst.x_star.end());
    payload["delta"] = std::vector<double>(inst.delta.begin(), inst.delta.end());
    payload["gen_spec"] = {{"objective_curvature", inst.spec.objective_curvature},
                           {"constraint_curvature", inst.spec.constraint_curvature},
                           {"neg_fraction_obj", inst.spec.neg_fraction_obj},
                           {"indefinite_constraints", inst.spec.indefinite_constraints},
                           {"neg_fraction_constraint", inst.spec.neg_fraction_constraint},
                           {"tau_obj", inst.spec.tau_obj},
                           {"tau_con", inst.spec.tau_con},
                           {"delta_min", inst.spec.delta_min},
                           {"delta_max", inst.spec.delta_max}};
    return payload;
}

QcqpInstance qcqp_from_payload_json(const nlohmann::json& payload) {
    QcqpInstance inst;
    inst.half_width = payload.at("R").get<double>();
    inst.seed = payload.value("seed", std::uint64_t{0});

    const auto& qs = payload.at("Q");
    const auto& cs = payload.at("c");
    if (qs.empty() || qs.size() != cs.size())
        throw InputError("qcqp payload: Q and c must be nonempty and matched");
    inst.p = static_cast<int>(qs.size()) - 1;

    for (std::size_t k = 0; k < qs.size(); ++k) {
        const auto flat = qs[k].get<std::vector<double>>();
        const int n = static_cast<int>(std::llround(std::sqrt(static_cast<double>(flat.size()))));
        if (static_cast<std::size_t>(n) * n != flat.size())
            throw InputError("qcqp payload: matrix is not square");
        if (k == 0) inst.n = n;
        if (n != inst.n) throw InputError("qcqp payload: inconsistent matrix sizes");
        Mat m(n, n);
        for (int row = 0; row < n; ++row)
            for (int col = 0; col < n; ++col) m(row, col) = flat[row * n + col];
        inst.Q.push_back(m);
        const auto cv = cs[k].get<std::vector<double>>();
        if (static_cast<int>(cv.size()) != n) throw InputError("qcqp payload: bad c length");
        inst.c.push_back(Eigen::Map<const Vec>(cv.data(), n));
    }

    auto load_vec = [&payload](const char* key, int expected) {
        const auto v = payload.at(key).get<std::vector<double>>();
        if (static_cast<int>(v.size()) != expected)
            throw InputError(std::string("qcqp payload: bad length for ") + key);
        return Vec(Eigen::Map<const Vec>(v.data(), expected));
    };
    inst.r = load_vec("r", inst.p);
    inst.x_star = load_vec("x_star", inst.n);
    inst.delta = load_vec("delta", inst.p);

    if (payload.contains("gen_spec")) {
        const auto& gs = payload["gen_spec"];
        inst.spec.objective_curvature = gs.value("objective_curvature", inst.spec.objective_curvature);
        inst.spec.constraint_curvature = gs.value("constraint_curvature", inst.spec.constraint_curvature);
        inst.spec.neg_fraction_obj = gs.value("neg_fraction_obj", inst.spec.neg_fraction_obj);
        inst.spec.indefinite_constraints = gs.value("indefinite_constraints", inst.spec.indefinite_constraints);
        inst.spec.neg_fraction_constraint = gs.value("neg_fraction_constraint", inst.spec.neg_fraction_constraint);
        inst.spec.tau_obj = gs.value("tau_obj", inst.spec.tau_obj);
        inst.spec.tau_con = gs.value("tau_con", inst.spec.tau_con);
        inst.spec.delta_min = gs.value("delta_min", inst.spec.delta_min);
        inst.spec.delta_max = gs.value("delta_max", inst.spec.delta_max);
    }
    return inst;
}

} // namespace qpalm
