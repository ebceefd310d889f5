#pragma once

#include <filesystem>
#include <vector>

#include "hsc/camera/camera.hpp"

namespace hsc::camera {

// Camera file: fx, fy, cx, cy, R (9 numbers row-major, world->camera),
// t (3), width, height, name, moving.
Camera load_camera(const std::filesystem::path& path);
void save_camera(const Camera& cam, const std::filesystem::path& path);

// Per-frame keypoint record: {"frame": n, "detections": [{"camera": name,
// "joints": [[u, v, confidence], ...]}, ...]}. Detections are returned in
// the order of `cams`; cameras without a record get confidence-0 rows.
KeypointSet load_keypoints(const std::filesystem::path& path, const std::vector<Camera>& cams,
                           int joint_count);
void save_keypoints(const std::filesystem::path& path, int frame, const std::vector<Camera>& cams,
                    const KeypointSet& keypoints);

}  // namespace hsc::camera
