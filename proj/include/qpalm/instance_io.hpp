#pragma once

#include <optional>
#include <string>

#include "qpalm/np.hpp"
#include "qpalm/qcqp.hpp"

namespace qpalm {

// On-disk instance document: {"n","p","family","payload","bounds","xhat"}.
struct InstanceFile {
    std::string family;
    Problem problem;
    BoundsBundle bounds;
    nlohmann::json document;
    std::string digest; // content digest of the serialized document
    std::optional<QcqpInstance> qcqp;
    std::optional<NpInstance> np;
};

nlohmann::json instance_document(const QcqpInstance& inst);
nlohmann::json instance_document(const NpInstance& inst);

void save_instance(const nlohmann::json& document, const std::string& path);
InstanceFile load_instance(const std::string& path);

} // namespace qpalm
