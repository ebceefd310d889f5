#include "hsc/camera/camera_io.hpp"

#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace hsc::camera {

using nlohmann::json;

Camera load_camera(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }

    Camera cam;
    cam.fx = doc.at("fx").get<double>();
    cam.fy = doc.at("fy").get<double>();
    cam.cx = doc.at("cx").get<double>();
    cam.cy = doc.at("cy").get<double>();
    const auto& r = doc.at("R");
    if (r.size() != 9) throw std::runtime_error(path.string() + ": R must have 9 entries");
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) cam.world_to_cam.rotation(i, j) = r[3 * i + j].get<double>();
    const auto& t = doc.at("t");
    if (t.size() != 3) throw std::runtime_error(path.string() + ": t must have 3 entries");
    for (int i = 0; i < 3; ++i) cam.world_to_cam.translation(i) = t[i].get<double>();
    cam.width = doc.at("width").get<int>();
    cam.height = doc.at("height").get<int>();
    cam.name = doc.at("name").get<std::string>();
    cam.moving = doc.value("moving", false);
    cam.validate();
    return cam;
}

void save_camera(const Camera& cam, const std::filesystem::path& path) {
    json doc;
    doc["name"] = cam.name;
    doc["fx"] = cam.fx;
    doc["fy"] = cam.fy;
    doc["cx"] = cam.cx;
    doc["cy"] = cam.cy;
    json r = json::array();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.push_back(cam.world_to_cam.rotation(i, j));
    doc["R"] = r;
    doc["t"] = {cam.world_to_cam.translation.x(), cam.world_to_cam.translation.y(),
                cam.world_to_cam.translation.z()};
    doc["width"] = cam.width;
    doc["height"] = cam.height;
    doc["moving"] = cam.moving;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << doc.dump(1) << "\n";
}

KeypointSet load_keypoints(const std::filesystem::path& path, const std::vector<Camera>& cams,
                           int joint_count) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }

    KeypointSet set;
    set.per_camera.assign(cams.size(), Eigen::MatrixXd::Zero(joint_count, 3));
    for (const auto& det : doc.at("detections")) {
        const std::string cam_name = det.at("camera").get<std::string>();
        int index = -1;
        for (size_t c = 0; c < cams.size(); ++c)
            if (cams[c].name == cam_name) index = static_cast<int>(c);
        if (index < 0)
            throw std::runtime_error(path.string() + ": unknown camera '" + cam_name + "'");
        const auto& joints = det.at("joints");
        if (static_cast<int>(joints.size()) != joint_count)
            throw std::runtime_error(path.string() + ": joint count mismatch for '" + cam_name + "'");
        for (int j = 0; j < joint_count; ++j) {
            set.per_camera[index](j, 0) = joints[j][0].get<double>();
            set.per_camera[index](j, 1) = joints[j][1].get<double>();
            set.per_camera[index](j, 2) = joints[j][2].get<double>();
        }
    }
    set.validate(static_cast<int>(cams.size()), joint_count);
    return set;
}

void save_keypoints(const std::filesystem::path& path, int frame, const std::vector<Camera>& cams,
                    const KeypointSet& keypoints) {
    json detections = json::array();
    for (size_t c = 0; c < cams.size(); ++c) {
        json joints = json::array();
        const auto& obs = keypoints.per_camera[c];
        for (Eigen::Index j = 0; j < obs.rows(); ++j)
            joints.push_back({obs(j, 0), obs(j, 1), obs(j, 2)});
        detections.push_back({{"camera", cams[c].name}, {"joints", joints}});
    }
    json doc;
    doc["frame"] = frame;
    doc["detections"] = detections;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << doc.dump(1) << "\n";
}

}  // namespace hsc::camera
