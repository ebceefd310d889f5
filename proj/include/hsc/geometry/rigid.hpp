#pragma once

#include <Eigen/Core>
#include <vector>

#include "hsc/geometry/mesh.hpp"

namespace hsc::geometry {

/// Proper rigid motion p -> R*p + t.
struct RigidTransform {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Vec3 translation = Vec3::Zero();

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

    // this ∘ other: apply other first, then this.
    RigidTransform compose(const RigidTransform& other) const {
        RigidTransform out;
        out.rotation = rotation * other.rotation;
        out.translation = rotation * other.translation + translation;
        return out;
    }

    RigidTransform inverse() const {
        RigidTransform out;
        out.rotation = rotation.transpose();
        out.translation = -(rotation.transpose() * translation);
        return out;
    }

    // det(R) = +1 and Rᵀ R = I, both within tol.
    bool is_valid(double tol = 1e-6) const;
};

struct AlignResult {
    RigidTransform transform;
    double rms = 0.0;  // residual RMS after alignment, meters
};

// Least-squares rotation + translation (no scale) minimizing
// Σ ‖R·src + t − dst‖². Throws "degenerate correspondences" for fewer than
// 3 pairs or a collinear source configuration.
AlignResult rigid_align(const std::vector<Vec3>& src, const std::vector<Vec3>& dst);

struct SimilarityResult {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Vec3 translation = Vec3::Zero();
    double scale = 1.0;
};

// Full similarity alignment (rotation, translation, scale) minimizing
// Σ ‖s·R·src + t − dst‖². Same degeneracy rules as rigid_align.
SimilarityResult similarity_align(const std::vector<Vec3>& src, const std::vector<Vec3>& dst);

}  // namespace hsc::geometry
