#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "hsc/geometry/rigid.hpp"

namespace hsc::camera {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// Calibrated pinhole camera, no distortion. Extrinsics map world to camera.
struct Camera {
    double fx = 0, fy = 0, cx = 0, cy = 0;
    geometry::RigidTransform world_to_cam;
    int width = 0, height = 0;
    std::string name;
    bool moving = false;

    Vec3 to_camera(const Vec3& world) const { return world_to_cam.apply(world); }
    Vec3 center() const { return world_to_cam.inverse().translation; }

    // Standard pinhole projection; throws "behind camera" for non-positive depth.
    Vec2 project(const Vec3& world) const;
    bool try_project(const Vec3& world, Vec2* pixel) const noexcept;

    // World-frame unit ray through a pixel.
    Vec3 ray_direction(const Vec2& pixel) const;

    void validate() const;  // fx,fy > 0; principal point inside the image
};

// Camera at `position` looking toward `target` (world z treated as up),
// image x right / y down.
Camera look_at(const Vec3& position, const Vec3& target, double fx, double fy, int width, int height,
               std::string name);

/// Per-camera, per-joint 2D detections (u, v, confidence). Rows align with
/// the body model's joint order; missing detections carry confidence 0.
struct KeypointSet {
    std::vector<Eigen::MatrixXd> per_camera;  // C entries of J x 3

    int camera_count() const { return static_cast<int>(per_camera.size()); }
    int joint_count() const { return per_camera.empty() ? 0 : static_cast<int>(per_camera[0].rows()); }
    void validate(int expected_cameras, int expected_joints) const;
};

}  // namespace hsc::camera
