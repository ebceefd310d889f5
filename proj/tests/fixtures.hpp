// Shared synthetic multiview rig for the fitting and acceptance suites.
#pragma once

#include <random>
#include <vector>

#include "hsc/body/model.hpp"
#include "hsc/body/rotation.hpp"
#include "hsc/body/test_humanoid.hpp"
#include "hsc/camera/camera.hpp"
#include "hsc/camera/multiview.hpp"

namespace fixtures {

using hsc::body::BodyModel;
using hsc::body::BodyParams;
using hsc::camera::Camera;
using hsc::camera::KeypointSet;
using Vec3 = Eigen::Vector3d;

inline std::vector<Camera> ring_rig(int n_cams, double radius = 4.0, double height = 1.8,
                                    const Vec3& target = Vec3(0, 0, 1.0)) {
    std::vector<Camera> cams;
    for (int c = 0; c < n_cams; ++c) {
        double angle = 2.0 * M_PI * c / n_cams + 0.31;
        Vec3 pos(radius * std::cos(angle), radius * std::sin(angle), height);
        cams.push_back(
            hsc::camera::look_at(pos, target, 1200, 1200, 1600, 1200, "cam" + std::to_string(c)));
    }
    return cams;
}

inline BodyParams random_pose(const BodyModel& model, std::mt19937_64& rng, double pose_scale = 0.25) {
    std::normal_distribution<double> n(0.0, 1.0);
    BodyParams p = BodyParams::zero(model);
    for (Eigen::Index i = 3; i < p.pose.size(); ++i) p.pose(i) = pose_scale * n(rng) / std::sqrt(3.0);
    p.pose.segment<3>(0) = Vec3(0, 0, 0.4 * n(rng));  // heading only
    p.translation = Vec3(0.2 * n(rng), 0.2 * n(rng), 0.05 * n(rng));
    return p;
}

// Perturb each joint by a rotation of angle <= max_angle composed onto the
// base pose, plus an optional translation offset.
inline BodyParams perturb_pose(const BodyModel& model, const BodyParams& base, std::mt19937_64& rng,
                               double max_angle, double translation_scale = 0.0) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    BodyParams p = base;
    for (int j = 0; j < model.joint_count(); ++j) {
        Vec3 axis(n(rng), n(rng), n(rng));
        if (axis.norm() < 1e-9) axis = Vec3(1, 0, 0);
        axis.normalize();
        double angle = max_angle * u(rng);
        Eigen::Matrix3d r =
            hsc::body::rodrigues(angle * axis) * hsc::body::rodrigues(base.pose.segment<3>(3 * j));
        Eigen::AngleAxisd aa(r);
        p.pose.segment<3>(3 * j) = aa.angle() * aa.axis();
    }
    if (translation_scale > 0)
        p.translation += translation_scale * Vec3(n(rng), n(rng), n(rng)).normalized() * u(rng);
    return p;
}

// Project ground-truth joints into every camera; optional pixel noise and a
// single corrupted view shifted by a fixed offset on all joints.
inline KeypointSet observe(const BodyModel& model, const BodyParams& gt,
                           const std::vector<Camera>& cams, std::mt19937_64& rng,
                           double pixel_noise = 0.0, int corrupted_view = -1,
                           const Eigen::Vector2d& corruption = Eigen::Vector2d(80.0, 0.0)) {
    std::normal_distribution<double> n(0.0, 1.0);
    auto posed = pose_body(model, gt);
    KeypointSet set;
    set.per_camera.assign(cams.size(), Eigen::MatrixXd::Zero(model.joint_count(), 3));
    for (size_t c = 0; c < cams.size(); ++c)
        for (int j = 0; j < model.joint_count(); ++j) {
            Eigen::Vector2d px = cams[c].project(posed.joints.row(j).transpose());
            if (pixel_noise > 0) px += pixel_noise * Eigen::Vector2d(n(rng), n(rng));
            if (static_cast<int>(c) == corrupted_view) px += corruption;
            set.per_camera[c].row(j) << px.x(), px.y(), 1.0;
        }
    return set;
}

inline double mean_joint_error(const BodyModel& model, const BodyParams& a, const BodyParams& b) {
    auto pa = pose_body(model, a).joints;
    auto pb = pose_body(model, b).joints;
    double sum = 0;
    for (int j = 0; j < model.joint_count(); ++j) sum += (pa.row(j) - pb.row(j)).norm();
    return sum / model.joint_count();
}

}  // namespace fixtures
