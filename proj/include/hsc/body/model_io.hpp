#pragma once

#include <filesystem>

#include "hsc/body/model.hpp"

namespace hsc::body {

// Structured-text (JSON) model asset with keys: topology_name, template,
// faces, parents, regressor (sparse triplets), skin_weights (sparse
// triplets), shape_dirs, regions, bend_joints, hands (optional).
BodyModel load_body_model(const std::filesystem::path& path);
void save_body_model(const BodyModel& model, const std::filesystem::path& path);

}  // namespace hsc::body
