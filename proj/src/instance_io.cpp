#include "qpalm/instance_io.hpp"

#include <fstream>

#include "qpalm/trace.hpp"

namespace qpalm {

namespace {

nlohmann::json bounds_json(const BoundsBundle& b) {
    return {{"D0", b.diameter},
            {"nu_g", b.constraint_norm},
            {"kappa_f", b.grad_f_bound},
            {"kappa_g", b.grad_g_bound},
            {"eps0", b.slater_margin}};
}

BoundsBundle bounds_from_json(const nlohmann::json& j, Vec xhat) {
    BoundsBundle b;
    b.diameter = j.at("D0").get<double>();
    b.constraint_norm = j.at("nu_g").get<double>();
    b.grad_f_bound = j.at("kappa_f").get<double>();
    b.grad_g_bound = j.at("kappa_g").get<double>();
    b.slater_margin = j.at("eps0").get<double>();
    b.slater_point = std::move(xhat);
    return b;
}

} // namespace

nlohmann::json instance_document(const QcqpInstance& inst) {
    const BoundsBundle bounds = qcqp_analytic_bounds(inst);
    nlohmann::json doc;
    doc["schema"] = "qpalm-instance-v1";
    doc["family"] = "qcqp";
    doc["n"] = inst.n;
    doc["p"] = inst.p;
    doc["payload"] = qcqp_payload_json(inst);
    doc["bounds"] = bounds_json(bounds);
    doc["xhat"] = std::vector<double>(bounds.slater_point.begin(), bounds.slater_point.end());
    return doc;
}

nlohmann::json instance_document(const NpInstance& inst) {
    const BoundsBundle bounds = np_bounds(inst);
    nlohmann::json doc;
    doc["schema"] = "qpalm-instance-v1";
    doc["family"] = "np";
    doc["n"] = inst.dim();
    doc["p"] = 1;
    doc["payload"] = np_payload_json(inst);
    doc["bounds"] = bounds_json(bounds);
    doc["xhat"] = std::vector<double>(bounds.slater_point.begin(), bounds.slater_point.end());
    return doc;
}

void save_instance(const nlohmann::json& document, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open instance file for writing: " + path);
    out << document.dump(2) << "\n";
}

InstanceFile load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open instance file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& err) {
        throw InputError("instance file " + path + " is not valid JSON: " + err.what());
    }

    InstanceFile file;
    file.document = doc;
    file.digest = content_digest(doc.dump());
    file.family = doc.at("family").get<std::string>();

    const auto xhat_vec = doc.at("xhat").get<std::vector<double>>();
    Vec xhat = Eigen::Map<const Vec>(xhat_vec.data(), static_cast<int>(xhat_vec.size()));

    if (file.family == "qcqp") {
        file.qcqp = qcqp_from_payload_json(doc.at("payload"));
        file.problem = qcqp_make_problem(*file.qcqp);
    } else if (file.family == "np") {
        file.np = np_from_payload_json(doc.at("payload"));
        file.problem = np_make_problem(*file.np);
    } else {
        throw InputError("unknown instance family: " + file.family);
    }
    file.bounds = bounds_from_json(doc.at("bounds"), std::move(xhat));
    file.bounds.require_valid();
    return file;
}

} // namespace qpalm
