#include "hsc/geometry/rigid.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <stdexcept>

namespace hsc::geometry {

bool RigidTransform::is_valid(double tol) const {
    if (std::abs(rotation.determinant() - 1.0) > tol) return false;
    Eigen::Matrix3d err = rotation.transpose() * rotation - Eigen::Matrix3d::Identity();
    return err.cwiseAbs().maxCoeff() <= tol;
}

namespace {

struct CenteredPair {
    Eigen::Matrix3d cross_cov;   // Σ (dst − d̄)(src − s̄)ᵀ / n
    Vec3 src_mean, dst_mean;
    double src_var;              // mean squared deviation of src
    Eigen::Vector3d src_singular_values;
};

CenteredPair center_and_covariance(const std::vector<Vec3>& src, const std::vector<Vec3>& dst) {
    if (src.size() != dst.size())
        throw std::runtime_error("rigid_align: src/dst size mismatch");
    if (src.size() < 3) throw std::runtime_error("degenerate correspondences: need at least 3 pairs");
    const double n = static_cast<double>(src.size());

    CenteredPair out;
    out.src_mean = Vec3::Zero();
    out.dst_mean = Vec3::Zero();
    for (size_t i = 0; i < src.size(); ++i) {
        out.src_mean += src[i];
        out.dst_mean += dst[i];
    }
    out.src_mean /= n;
    out.dst_mean /= n;

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d src_scatter = Eigen::Matrix3d::Zero();
    out.src_var = 0.0;
    for (size_t i = 0; i < src.size(); ++i) {
        Vec3 s = src[i] - out.src_mean;
        Vec3 d = dst[i] - out.dst_mean;
        cov += d * s.transpose();
        src_scatter += s * s.transpose();
        out.src_var += s.squaredNorm();
    }
    cov /= n;
    src_scatter /= n;
    out.src_var /= n;
    out.cross_cov = cov;

    Eigen::JacobiSVD<Eigen::Matrix3d> scatter_svd(src_scatter);
    out.src_singular_values = scatter_svd.singularValues();
    // Collinear sources leave the rotation about the line unconstrained.
    double s0 = out.src_singular_values(0);
    if (s0 < 1e-18 || out.src_singular_values(1) < 1e-9 * s0)
        throw std::runtime_error("degenerate correspondences: collinear configuration");
    return out;
}

Eigen::Matrix3d rotation_from_covariance(const Eigen::Matrix3d& cov, Eigen::Vector3d* singular = nullptr) {
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d u = svd.matrixU();
    Eigen::Matrix3d v = svd.matrixV();
    Eigen::Vector3d d = Eigen::Vector3d::Ones();
    if ((u * v.transpose()).determinant() < 0) d(2) = -1.0;
    if (singular) *singular = svd.singularValues().cwiseProduct(d);
    return u * d.asDiagonal() * v.transpose();
}

}  // namespace

AlignResult rigid_align(const std::vector<Vec3>& src, const std::vector<Vec3>& dst) {
    CenteredPair c = center_and_covariance(src, dst);

    AlignResult out;
    out.transform.rotation = rotation_from_covariance(c.cross_cov);
    out.transform.translation = c.dst_mean - out.transform.rotation * c.src_mean;

    double ss = 0.0;
    for (size_t i = 0; i < src.size(); ++i)
        ss += (out.transform.apply(src[i]) - dst[i]).squaredNorm();
    out.rms = std::sqrt(ss / static_cast<double>(src.size()));
    return out;
}

SimilarityResult similarity_align(const std::vector<Vec3>& src, const std::vector<Vec3>& dst) {
    CenteredPair c = center_and_covariance(src, dst);

    Eigen::Vector3d signed_singular;
    SimilarityResult out;
    out.rotation = rotation_from_covariance(c.cross_cov, &signed_singular);
    out.scale = c.src_var > 0 ? signed_singular.sum() / c.src_var : 1.0;
    out.translation = c.dst_mean - out.scale * (out.rotation * c.src_mean);
    return out;
}

}  // namespace hsc::geometry
