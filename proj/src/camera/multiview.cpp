#include "hsc/camera/multiview.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <stdexcept>

#include "hsc/body/rotation.hpp"

namespace hsc::camera {

namespace {

Eigen::Matrix<double, 3, 4> projection_matrix(const Camera& cam) {
    Eigen::Matrix3d K;
    K << cam.fx, 0, cam.cx, 0, cam.fy, cam.cy, 0, 0, 1;
    Eigen::Matrix<double, 3, 4> rt;
    rt.leftCols<3>() = cam.world_to_cam.rotation;
    rt.col(3) = cam.world_to_cam.translation;
    return K * rt;
}

}  // namespace

Vec3 triangulate_pair(const Camera& cam_a, const Vec2& obs_a, const Camera& cam_b, const Vec2& obs_b) {
    if ((cam_a.center() - cam_b.center()).norm() < 1e-9)
        throw std::runtime_error("degenerate baseline");
    Vec3 ray_a = cam_a.ray_direction(obs_a);
    Vec3 ray_b = cam_b.ray_direction(obs_b);
    if (ray_a.cross(ray_b).norm() < 1e-6) throw std::runtime_error("degenerate baseline");

    Eigen::Matrix<double, 3, 4> pa = projection_matrix(cam_a);
    Eigen::Matrix<double, 3, 4> pb = projection_matrix(cam_b);
    Eigen::Matrix4d a;
    a.row(0) = obs_a.x() * pa.row(2) - pa.row(0);
    a.row(1) = obs_a.y() * pa.row(2) - pa.row(1);
    a.row(2) = obs_b.x() * pb.row(2) - pb.row(0);
    a.row(3) = obs_b.y() * pb.row(2) - pb.row(1);

    Eigen::JacobiSVD<Eigen::Matrix4d> svd(a, Eigen::ComputeFullV);
    Eigen::Vector4d h = svd.matrixV().col(3);
    if (std::abs(h(3)) < 1e-12) throw std::runtime_error("degenerate baseline");
    return h.head<3>() / h(3);
}

ConsensusWeights consensus_weights(const std::vector<Camera>& cams, const KeypointSet& keypoints,
                                   const ConsensusConfig& config) {
    const int nc = static_cast<int>(cams.size());
    const int nj = keypoints.joint_count();
    keypoints.validate(nc, nj);

    ConsensusWeights out;
    out.weights = Eigen::MatrixXd::Ones(nc, nj);

    for (int j = 0; j < nj; ++j) {
        std::vector<int> gated;
        for (int c = 0; c < nc; ++c)
            if (keypoints.per_camera[c](j, 2) >= config.min_confidence) gated.push_back(c);
        if (gated.size() < 3) continue;  // too few views to vote; weights stay 1

        Eigen::VectorXd accumulated = Eigen::VectorXd::Zero(nc);
        Eigen::VectorXi count = Eigen::VectorXi::Zero(nc);
        for (size_t ia = 0; ia < gated.size(); ++ia)
            for (size_t ib = ia + 1; ib < gated.size(); ++ib) {
                const int a = gated[ia], b = gated[ib];
                Vec3 point;
                try {
                    point = triangulate_pair(cams[a], keypoints.per_camera[a].row(j).head<2>(),
                                             cams[b], keypoints.per_camera[b].row(j).head<2>());
                } catch (const std::runtime_error&) {
                    continue;  // unusable pair geometry
                }
                for (int c : gated) {
                    if (c == a || c == b) continue;
                    Vec2 projected;
                    if (!cams[c].try_project(point, &projected)) continue;
                    accumulated(c) += (projected - Vec2(keypoints.per_camera[c].row(j).head<2>())).norm();
                    count(c) += 1;
                }
            }
        for (int c : gated)
            if (count(c) > 0) out.weights(c, j) = std::exp(-accumulated(c) / count(c) / config.tau);
    }
    return out;
}

body::BodyParams fuse_pose_estimates(const std::vector<body::BodyParams>& estimates) {
    if (estimates.empty()) throw std::runtime_error("fuse_pose_estimates: empty estimate list");
    const auto& first = estimates.front();
    const Eigen::Index pose_dim = first.pose.size();
    if (pose_dim % 3 != 0) throw std::runtime_error("fuse_pose_estimates: pose length not divisible by 3");
    for (const auto& e : estimates)
        if (e.pose.size() != pose_dim || e.shape.size() != first.shape.size() ||
            e.hand_pose.size() != first.hand_pose.size())
            throw std::runtime_error("fuse_pose_estimates: inconsistent estimate dimensions");

    body::BodyParams fused;
    fused.translation.setZero();
    fused.shape = Eigen::VectorXd::Zero(first.shape.size());
    fused.hand_pose = Eigen::VectorXd::Zero(first.hand_pose.size());
    for (const auto& e : estimates) {
        fused.translation += e.translation;
        fused.shape += e.shape;
        fused.hand_pose += e.hand_pose;
    }
    const double n = static_cast<double>(estimates.size());
    fused.translation /= n;
    fused.shape /= n;
    fused.hand_pose /= n;

    fused.pose = Eigen::VectorXd::Zero(pose_dim);
    const int nj = static_cast<int>(pose_dim / 3);
    for (int j = 0; j < nj; ++j) {
        Eigen::Vector4d sum = Eigen::Vector4d::Zero();
        Eigen::Quaterniond reference = Eigen::Quaterniond::Identity();
        for (size_t i = 0; i < estimates.size(); ++i) {
            Eigen::Vector3d aa = estimates[i].pose.segment<3>(3 * j);
            double angle = aa.norm();
            Eigen::Quaterniond q =
                angle < 1e-12
                    ? Eigen::Quaterniond::Identity()
                    : Eigen::Quaterniond(Eigen::AngleAxisd(angle, aa / angle));
            if (i == 0)
                reference = q;
            else if (q.coeffs().dot(reference.coeffs()) < 0.0)
                q.coeffs() = -q.coeffs();
            sum += q.coeffs();
        }
        Eigen::Quaterniond mean;
        mean.coeffs() = sum.normalized();
        Eigen::AngleAxisd aa(mean);
        fused.pose.segment<3>(3 * j) = aa.angle() * aa.axis();
    }
    return fused;
}

}  // namespace hsc::camera
