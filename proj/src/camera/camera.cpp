#include "hsc/camera/camera.hpp"

#include <stdexcept>

namespace hsc::camera {

Vec2 Camera::project(const Vec3& world) const {
    Vec2 pixel;
    if (!try_project(world, &pixel)) throw std::runtime_error("behind camera");
    return pixel;
}

bool Camera::try_project(const Vec3& world, Vec2* pixel) const noexcept {
    Vec3 pc = to_camera(world);
    if (pc.z() <= 0.0) return false;
    (*pixel)(0) = fx * pc.x() / pc.z() + cx;
    (*pixel)(1) = fy * pc.y() / pc.z() + cy;
    return true;
}

Vec3 Camera::ray_direction(const Vec2& pixel) const {
    Vec3 dir_cam((pixel.x() - cx) / fx, (pixel.y() - cy) / fy, 1.0);
    return (world_to_cam.rotation.transpose() * dir_cam).normalized();
}

void Camera::validate() const {
    if (fx <= 0 || fy <= 0) throw std::runtime_error("camera " + name + ": focal lengths must be positive");
    if (width > 0 && height > 0) {
        if (cx < 0 || cx >= width || cy < 0 || cy >= height)
            throw std::runtime_error("camera " + name + ": principal point outside image");
    }
    if (!world_to_cam.is_valid()) throw std::runtime_error("camera " + name + ": invalid extrinsics");
}

Camera look_at(const Vec3& position, const Vec3& target, double fx, double fy, int width, int height,
               std::string name) {
    Vec3 forward = (target - position).normalized();
    Vec3 up(0, 0, 1);
    if (std::abs(forward.dot(up)) > 0.999) up = Vec3(0, 1, 0);
    Vec3 down = (-up + up.dot(forward) * forward).normalized();
    Vec3 right = down.cross(forward);

    Camera cam;
    cam.fx = fx;
    cam.fy = fy;
    cam.cx = width / 2.0;
    cam.cy = height / 2.0;
    cam.width = width;
    cam.height = height;
    cam.name = std::move(name);
    cam.world_to_cam.rotation.row(0) = right.transpose();
    cam.world_to_cam.rotation.row(1) = down.transpose();
    cam.world_to_cam.rotation.row(2) = forward.transpose();
    cam.world_to_cam.translation = -(cam.world_to_cam.rotation * position);
    return cam;
}

void KeypointSet::validate(int expected_cameras, int expected_joints) const {
    if (camera_count() != expected_cameras)
        throw std::runtime_error("keypoints: camera count mismatch");
    for (const auto& obs : per_camera) {
        if (obs.rows() != expected_joints || obs.cols() != 3)
            throw std::runtime_error("keypoints: expected J x 3 per camera");
        for (Eigen::Index j = 0; j < obs.rows(); ++j)
            if (obs(j, 2) < 0.0 || obs(j, 2) > 1.0)
                throw std::runtime_error("keypoints: confidence out of [0,1]");
    }
}

}  // namespace hsc::camera
