#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <array>

namespace hsc::body {

inline Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
    Eigen::Matrix3d m;
    m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
    return m;
}

// Axis-angle exponential map.
inline Eigen::Matrix3d rodrigues(const Eigen::Vector3d& aa) {
    double angle = aa.norm();
    if (angle < 1e-12) return Eigen::Matrix3d::Identity() + skew(aa);
    return Eigen::AngleAxisd(angle, aa / angle).toRotationMatrix();
}

// dR/d(aa_i), Gallego & Yezzi closed form with the small-angle limit [e_i]x.
inline std::array<Eigen::Matrix3d, 3> rodrigues_jacobian(const Eigen::Vector3d& aa) {
    std::array<Eigen::Matrix3d, 3> jac;
    double sq = aa.squaredNorm();
    if (sq < 1e-16) {
        for (int i = 0; i < 3; ++i) jac[i] = skew(Eigen::Vector3d::Unit(i));
        return jac;
    }
    Eigen::Matrix3d rot = rodrigues(aa);
    Eigen::Matrix3d eye_minus = Eigen::Matrix3d::Identity() - rot;
    for (int i = 0; i < 3; ++i) {
        Eigen::Vector3d e = Eigen::Vector3d::Unit(i);
        jac[i] = (aa(i) * skew(aa) + skew(aa.cross(eye_minus * e))) / sq * rot;
    }
    return jac;
}

}  // namespace hsc::body
