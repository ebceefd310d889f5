#pragma once

#include <Eigen/Core>
#include <Eigen/Sparse>
#include <array>
#include <optional>
#include <string>
#include <vector>

namespace hsc::body {

using Vec3 = Eigen::Vector3d;

inline constexpr const char* kFootSoleRegion = "foot_sole";

/// One low-dimensional hand: its joint subset and the fixed linear basis
/// mapping the hand coefficient vector to those joints' axis-angle entries.
struct HandSpec {
    std::string name;
    std::vector<int> joints;
    Eigen::MatrixXd basis;  // (3 * joints.size()) x coeff_count
};

struct BendJoint {
    int joint = 0;
    int axis = 0;           // 0/1/2 axis-angle component carrying flexion
    double natural_sign = 1.0;  // sign for which bending is anatomically possible
};

/// Articulated template: shape blendshapes, joint regression, kinematic
/// tree, and linear blend skinning weights. Immutable once built.
struct BodyModel {
    std::string topology_name;
    Eigen::MatrixXd template_vertices;  // V x 3
    std::vector<std::array<int, 3>> faces;
    std::vector<int> parents;                       // J entries, root (index 0) = -1
    Eigen::SparseMatrix<double> joint_regressor;    // J x V, rows sum to 1
    Eigen::SparseMatrix<double> skin_weights;       // V x J, rows sum to 1, <=4 nonzeros
    std::vector<Eigen::MatrixXd> shape_dirs;        // B entries of V x 3
    std::vector<std::string> region_names;
    std::vector<int> vertex_region;                 // V entries, index into region_names
    std::vector<BendJoint> bend_joints;
    std::vector<HandSpec> hands;

    int vertex_count() const { return static_cast<int>(template_vertices.rows()); }
    int joint_count() const { return static_cast<int>(parents.size()); }
    int shape_count() const { return static_cast<int>(shape_dirs.size()); }
    int hand_coeff_count() const;

    int region_index(const std::string& name) const;  // -1 when absent
    std::vector<int> region_vertices(const std::string& name) const;
    std::vector<std::uint8_t> foot_sole_mask() const;

    // Axis-angle pose entries driven by hand coefficients rather than free.
    std::vector<std::uint8_t> hand_driven_pose_mask() const;

    void validate() const;  // throws on any violated invariant
};

struct BodyParams {
    Vec3 translation = Vec3::Zero();
    Eigen::VectorXd pose;       // 3J, root entry = global orientation
    Eigen::VectorXd shape;      // B
    Eigen::VectorXd hand_pose;  // total hand coefficients, may be empty

    static BodyParams zero(const BodyModel& model);
};

// Throws naming the offending field on any dimension mismatch.
void check_params(const BodyModel& model, const BodyParams& params);

struct PosedBody {
    Eigen::MatrixXd vertices;  // V x 3
    Eigen::MatrixXd joints;    // J x 3
};

// Shape offsets, joint regression, kinematic chain, linear blend skinning,
// then global translation.
PosedBody pose_body(const BodyModel& model, const BodyParams& params);

// Pose vector with hand-driven entries replaced by basis * hand_pose.
Eigen::VectorXd effective_pose(const BodyModel& model, const BodyParams& params);

/// Packed free-parameter layout used by the fitting stack:
///   x = [translation(3), pose(3J), hand_pose(zdim)]
struct ParamVector {
    static int dimension(const BodyModel& model);
    static Eigen::VectorXd pack(const BodyModel& model, const BodyParams& params);
    static BodyParams unpack(const BodyModel& model, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& shape);
};

/// Posed joints plus their analytic Jacobian in ParamVector layout.
/// Hand-driven pose columns are zero; their effect flows through the
/// hand-coefficient columns.
struct JointDerivatives {
    Eigen::MatrixXd joints;    // J x 3
    Eigen::MatrixXd jacobian;  // 3J x (3 + 3J + zdim); row order (joint, xyz)
};

JointDerivatives joint_derivatives(const BodyModel& model, const BodyParams& params);

}  // namespace hsc::body
