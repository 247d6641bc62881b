#include "qpalm/np.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include "qpalm/apg.hpp"
#include "qpalm/rng.hpp"

namespace qpalm {

double sigmoid(double u) {
    if (u >= 0.0) {
        const double e = std::exp(-u);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(u));
}

double sigmoid_derivative(double u) {
    const double s = sigmoid(u);
    return -s * (1.0 - s);
}

double NpInstance::eval_objective(const Vec& x) const {
    const Vec scores = positives * x;
    double sum = 0.0;
    for (int i = 0; i < scores.size(); ++i) sum += sigmoid(scores[i]);
    return sum / static_cast<double>(positives.rows());
}

Vec NpInstance::grad_objective(const Vec& x) const {
    const Vec scores = positives * x;
    Vec weights(scores.size());
    for (int i = 0; i < scores.size(); ++i) weights[i] = sigmoid_derivative(scores[i]);
    return positives.transpose() * weights / static_cast<double>(positives.rows());
}

double NpInstance::eval_constraint(const Vec& x) const {
    const Vec scores = negatives * x;
    double sum = 0.0;
    for (int i = 0; i < scores.size(); ++i) sum += sigmoid(-scores[i]);
    return sum / static_cast<double>(negatives.rows()) - tau;
}

Vec NpInstance::grad_constraint(const Vec& x) const {
    const Vec scores = negatives * x;
    Vec weights(scores.size());
    for (int i = 0; i < scores.size(); ++i) weights[i] = -sigmoid_derivative(-scores[i]);
    return negatives.transpose() * weights / static_cast<double>(negatives.rows());
}

std::pair<double, double> NpInstance::moduli() const {
    double max_pos = 0.0, max_neg = 0.0;
    for (int i = 0; i < positives.rows(); ++i)
        max_pos = std::max(max_pos, positives.row(i).squaredNorm());
    for (int i = 0; i < negatives.rows(); ++i)
        max_neg = std::max(max_neg, negatives.row(i).squaredNorm());
    return {kSigmoidCurvatureBound * max_pos, kSigmoidCurvatureBound * max_neg};
}

NpInstance np_load_dataset(const std::string& path, LabelRule rule, double tau,
                           double box_half_width, int max_rows, std::uint64_t seed) {
    std::ifstream in(path);
    if (!in) throw InputError("np_load_dataset: cannot open " + path);

    struct RawRow {
        double label;
        std::vector<std::pair<int, double>> entries;
    };
    std::vector<RawRow> kept;
    Rng rng(derive_seed(seed, "np-reservoir"));
    int max_index = 0;
    long long seen = 0;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        RawRow row;
        if (!(ls >> row.label))
            throw InputError("np_load_dataset: missing label at line " + std::to_string(line_no));
        std::string token;
        while (ls >> token) {
            const auto colon = token.find(':');
            if (colon == std::string::npos)
                throw InputError("np_load_dataset: malformed 'idx:val' at line " +
                                 std::to_string(line_no));
            int idx = 0;
            double val = 0.0;
            try {
                idx = std::stoi(token.substr(0, colon));
                val = std::stod(token.substr(colon + 1));
            } catch (const std::exception&) {
                throw InputError("np_load_dataset: malformed 'idx:val' at line " +
                                 std::to_string(line_no));
            }
            if (idx < 1)
                throw InputError("np_load_dataset: index must be >= 1 at line " +
                                 std::to_string(line_no));
            max_index = std::max(max_index, idx);
            row.entries.emplace_back(idx - 1, val);
        }
        ++seen;
        if (static_cast<int>(kept.size()) < max_rows) {
            kept.push_back(std::move(row));
        } else {
            // Classic reservoir: replace a random slot with probability max_rows/seen.
            const std::uint64_t slot = rng.below(static_cast<std::uint64_t>(seen));
            if (slot < static_cast<std::uint64_t>(max_rows)) kept[slot] = std::move(row);
        }
    }
    if (kept.empty()) throw InputError("np_load_dataset: no data rows in " + path);

    auto is_positive = [rule](double label) {
        if (rule == LabelRule::Sign) return label > 0.0;
        return std::llabs(std::llround(label)) % 2 == 1;
    };

    int n_pos = 0;
    for (const auto& row : kept)
        if (is_positive(row.label)) ++n_pos;
    const int n_neg = static_cast<int>(kept.size()) - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw InputError("np_load_dataset: one class is empty after binarization");

    NpInstance inst;
    inst.tau = tau;
    inst.box_half_width = box_half_width;
    inst.positives = Mat::Zero(n_pos, max_index);
    inst.negatives = Mat::Zero(n_neg, max_index);
    int ip = 0, in_ = 0;
    for (const auto& row : kept) {
        auto target = is_positive(row.label) ? inst.positives.row(ip++) : inst.negatives.row(in_++);
        for (const auto& [idx, val] : row.entries) target[idx] = val;
    }
    inst.provenance = {{"source", "file"},
                       {"path", path},
                       {"rule", rule == LabelRule::Sign ? "sign" : "odd_even"},
                       {"max_rows", max_rows},
                       {"seed", seed}};
    return inst;
}

NpInstance np_synth_generate(int n_pos, int n_neg, int dim, double separation,
                             std::uint64_t seed, double tau, double box_half_width) {
    if (n_pos < 1 || n_neg < 1 || dim < 1)
        throw InputError("np_synth_generate: sizes must be >= 1");
    Rng rng(derive_seed(seed, "np-synth"));
    const double shift = separation / std::sqrt(static_cast<double>(dim));

    NpInstance inst;
    inst.tau = tau;
    inst.box_half_width = box_half_width;
    inst.positives = rng.normal_mat(n_pos, dim).array() + shift;
    inst.negatives = rng.normal_mat(n_neg, dim).array() - shift;
    inst.provenance = {{"source", "synthetic"}, {"N0", n_pos},   {"N1", n_neg},
                       {"d", dim},             {"separation", separation}, {"seed", seed}};
    return inst;
}

Problem np_make_problem(const NpInstance& inst) {
    auto shared = std::make_shared<NpInstance>(inst);
    Problem problem;
    problem.n = inst.dim();
    problem.p = 1;
    problem.box = BoxSet::cube(inst.dim(), inst.box_half_width);
    problem.f = [shared](const Vec& x) { return shared->eval_objective(x); };
    problem.grad_f = [shared](const Vec& x) { return shared->grad_objective(x); };
    problem.g.push_back([shared](const Vec& x) { return shared->eval_constraint(x); });
    problem.grad_g.push_back([shared](const Vec& x) { return shared->grad_constraint(x); });
    const auto [l0, l1] = inst.moduli();
    problem.moduli = Vec(2);
    problem.moduli << l0, l1;
    problem.check_shapes();
    return problem;
}

BoundsBundle np_bounds(const NpInstance& inst) {
    const Problem problem = np_make_problem(inst);

    double max_pos_norm = 0.0, max_neg_norm = 0.0;
    for (int i = 0; i < inst.positives.rows(); ++i)
        max_pos_norm = std::max(max_pos_norm, inst.positives.row(i).norm());
    for (int i = 0; i < inst.negatives.rows(); ++i)
        max_neg_norm = std::max(max_neg_norm, inst.negatives.row(i).norm());

    BoundsBundle b;
    b.diameter = problem.box.diameter();
    // |g| <= max(tau, 1 - tau) since the sigmoid mean stays in (0, 1).
    b.constraint_norm = std::max(inst.tau, 1.0 - inst.tau);
    // sup |phi'| = 1/4.
    b.grad_f_bound = 0.25 * max_pos_norm;
    b.grad_g_bound = 0.25 * max_neg_norm;

    // Strictly feasible point: drive g down by projected gradient from 0.
    ApgConfig cfg;
    cfg.step_tol = 1e-8;
    cfg.max_iter = 2000;
    const ApgResult res = apg_minimize(
        problem.g[0], problem.grad_g[0],
        [&problem](const Vec& z) { return problem.box.project(z); }, Vec::Zero(problem.n), cfg);
    const double g_hat = problem.g[0](res.minimizer);
    if (g_hat >= 0.0)
        throw NumericalError("np_bounds: could not certify a strictly feasible point");
    b.slater_point = res.minimizer;
    b.slater_margin = -g_hat;
    return b;
}

nlohmann::json np_payload_json(const NpInstance& inst) {
    nlohmann::json payload;
    payload["tau"] = inst.tau;
    payload["R_box"] = inst.box_half_width;
    auto rows = [](const Mat& m) {
        nlohmann::json out = nlohmann::json::array();
        for (int i = 0; i < m.rows(); ++i) {
            std::vector<double> row(m.cols());
            for (int j = 0; j < m.cols(); ++j) row[j] = m(i, j);
            out.push_back(row);
        }
        return out;
    };
    payload["A0"] = rows(inst.positives);
    payload["A1"] = rows(inst.negatives);
    payload["provenance"] = inst.provenance;
    return payload;
}

NpInstance np_from_payload_json(const nlohmann::json& payload) {
    NpInstance inst;
    inst.tau = payload.at("tau").get<double>();
    inst.box_half_width = payload.at("R_box").get<double>();
    auto mat = [](const nlohmann::json& rows) {
        if (rows.empty()) throw InputError("np payload: empty sample matrix");
        const int n = static_cast<int>(rows.size());
        const int d = static_cast<int>(rows[0].size());
        Mat m(n, d);
        for (int i = 0; i < n; ++i) {
            const auto row = rows[i].get<std::vector<double>>();
            if (static_cast<int>(row.size()) != d) throw InputError("np payload: ragged rows");
            for (int j = 0; j < d; ++j) m(i, j) = row[j];
        }
        return m;
    };
    inst.positives = mat(payload.at("A0"));
    inst.negatives = mat(payload.at("A1"));
    if (inst.positives.cols() != inst.negatives.cols())
        throw InputError("np payload: class dimensions differ");
    inst.provenance = payload.value("provenance", nlohmann::json::object());
    return inst;
}

} // namespace qpalm
