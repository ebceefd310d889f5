#include "hsc/body/model.hpp"

#include <stdexcept>

#include "hsc/body/rotation.hpp"

namespace hsc::body {

int BodyModel::hand_coeff_count() const {
    int n = 0;
    for (const auto& hand : hands) n += static_cast<int>(hand.basis.cols());
    return n;
}

int BodyModel::region_index(const std::string& name) const {
    for (size_t i = 0; i < region_names.size(); ++i)
        if (region_names[i] == name) return static_cast<int>(i);
    return -1;
}

std::vector<int> BodyModel::region_vertices(const std::string& name) const {
    std::vector<int> out;
    int idx = region_index(name);
    if (idx < 0) return out;
    for (int v = 0; v < vertex_count(); ++v)
        if (vertex_region[v] == idx) out.push_back(v);
    return out;
}

std::vector<std::uint8_t> BodyModel::foot_sole_mask() const {
    std::vector<std::uint8_t> mask(vertex_count(), 0);
    int idx = region_index(kFootSoleRegion);
    if (idx < 0) return mask;
    for (int v = 0; v < vertex_count(); ++v) mask[v] = vertex_region[v] == idx ? 1 : 0;
    return mask;
}

std::vector<std::uint8_t> BodyModel::hand_driven_pose_mask() const {
    std::vector<std::uint8_t> mask(3 * joint_count(), 0);
    for (const auto& hand : hands)
        for (int jt : hand.joints)
            for (int i = 0; i < 3; ++i) mask[3 * jt + i] = 1;
    return mask;
}

void BodyModel::validate() const {
    const int nv = vertex_count();
    const int nj = joint_count();
    if (nv == 0 || nj == 0) throw std::runtime_error("body model: empty template or joint set");
    if (template_vertices.cols() != 3) throw std::runtime_error("body model: template must be V x 3");

    for (const auto& f : faces)
        for (int k = 0; k < 3; ++k)
            if (f[k] < 0 || f[k] >= nv) throw std::runtime_error("body model: face index out of range");

    if (parents[0] != -1) throw std::runtime_error("body model: joint 0 must be the root");
    for (int j = 1; j < nj; ++j)
        if (parents[j] < 0 || parents[j] >= j)
            throw std::runtime_error("body model: parents must form a tree with parents before children");

    if (joint_regressor.rows() != nj || joint_regressor.cols() != nv)
        throw std::runtime_error("body model: regressor must be J x V");
    if (skin_weights.rows() != nv || skin_weights.cols() != nj)
        throw std::runtime_error("body model: skin weights must be V x J");

    Eigen::VectorXd ones = Eigen::VectorXd::Ones(nv);
    Eigen::VectorXd row_sums = joint_regressor * ones;
    for (int j = 0; j < nj; ++j)
        if (std::abs(row_sums(j) - 1.0) > 1e-6)
            throw std::runtime_error("body model: regressor row " + std::to_string(j) +
                                     " does not sum to 1");

    std::vector<int> nnz(nv, 0);
    Eigen::VectorXd skin_sums = Eigen::VectorXd::Zero(nv);
    for (int k = 0; k < skin_weights.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(skin_weights, k); it; ++it) {
            ++nnz[it.row()];
            skin_sums(it.row()) += it.value();
        }
    for (int v = 0; v < nv; ++v) {
        if (std::abs(skin_sums(v) - 1.0) > 1e-6)
            throw std::runtime_error("body model: skin row " + std::to_string(v) + " does not sum to 1");
        if (nnz[v] > 4)
            throw std::runtime_error("body model: skin row " + std::to_string(v) + " has more than 4 weights");
    }

    for (const auto& dirs : shape_dirs)
        if (dirs.rows() != nv || dirs.cols() != 3)
            throw std::runtime_error("body model: shape direction matrix must be V x 3");

    if (static_cast<int>(vertex_region.size()) != nv)
        throw std::runtime_error("body model: vertex_region size mismatch");
    for (int r : vertex_region)
        if (r < 0 || r >= static_cast<int>(region_names.size()))
            throw std::runtime_error("body model: region index out of range");

    for (const auto& bend : bend_joints) {
        if (bend.joint < 0 || bend.joint >= nj) throw std::runtime_error("body model: bend joint out of range");
        if (bend.axis < 0 || bend.axis > 2) throw std::runtime_error("body model: bend axis out of range");
    }
    for (const auto& hand : hands) {
        for (int jt : hand.joints)
            if (jt <= 0 || jt >= nj) throw std::runtime_error("body model: hand joint out of range");
        if (hand.basis.rows() != static_cast<Eigen::Index>(3 * hand.joints.size()))
            throw std::runtime_error("body model: hand basis rows must be 3 * hand joints");
    }
}

BodyParams BodyParams::zero(const BodyModel& model) {
    BodyParams p;
    p.pose = Eigen::VectorXd::Zero(3 * model.joint_count());
    p.shape = Eigen::VectorXd::Zero(model.shape_count());
    p.hand_pose = Eigen::VectorXd::Zero(model.hand_coeff_count());
    return p;
}

void check_params(const BodyModel& model, const BodyParams& params) {
    if (params.pose.size() != 3 * model.joint_count())
        throw std::runtime_error("body params: pose has " + std::to_string(params.pose.size()) +
                                 " entries, expected " + std::to_string(3 * model.joint_count()));
    if (params.shape.size() != model.shape_count())
        throw std::runtime_error("body params: shape has " + std::to_string(params.shape.size()) +
                                 " entries, expected " + std::to_string(model.shape_count()));
    if (params.hand_pose.size() != 0 && params.hand_pose.size() != model.hand_coeff_count())
        throw std::runtime_error("body params: hand_pose has " + std::to_string(params.hand_pose.size()) +
                                 " entries, expected " + std::to_string(model.hand_coeff_count()));
    if (!params.pose.allFinite() || !params.shape.allFinite() || !params.hand_pose.allFinite() ||
        !params.translation.allFinite())
        throw std::runtime_error("body params: non-finite entries");
}

Eigen::VectorXd effective_pose(const BodyModel& model, const BodyParams& params) {
    Eigen::VectorXd pose = params.pose;
    if (params.hand_pose.size() == 0) return pose;
    int offset = 0;
    for (const auto& hand : model.hands) {
        const int coeffs = static_cast<int>(hand.basis.cols());
        Eigen::VectorXd entries = hand.basis * params.hand_pose.segment(offset, coeffs);
        for (size_t k = 0; k < hand.joints.size(); ++k)
            pose.segment<3>(3 * hand.joints[k]) = entries.segment<3>(3 * static_cast<int>(k));
        offset += coeffs;
    }
    return pose;
}

namespace {

struct Kinematics {
    Eigen::MatrixXd shaped;         // V x 3
    Eigen::MatrixXd rest_joints;    // J x 3
    std::vector<Eigen::Matrix3d> local_rot;
    std::vector<Eigen::Matrix3d> world_rot;
    Eigen::MatrixXd world_joints;   // J x 3, before global translation
};

Kinematics forward_kinematics(const BodyModel& model, const BodyParams& params) {
    check_params(model, params);
    const int nj = model.joint_count();

    Kinematics kin;
    kin.shaped = model.template_vertices;
    for (int b = 0; b < model.shape_count(); ++b) kin.shaped += params.shape(b) * model.shape_dirs[b];
    kin.rest_joints = model.joint_regressor * kin.shaped;

    Eigen::VectorXd pose = effective_pose(model, params);
    kin.local_rot.resize(nj);
    kin.world_rot.resize(nj);
    kin.world_joints.resize(nj, 3);
    for (int j = 0; j < nj; ++j) {
        kin.local_rot[j] = rodrigues(pose.segment<3>(3 * j));
        if (j == 0) {
            kin.world_rot[j] = kin.local_rot[j];
            kin.world_joints.row(j) = kin.rest_joints.row(j);
        } else {
            const int p = model.parents[j];
            kin.world_rot[j] = kin.world_rot[p] * kin.local_rot[j];
            kin.world_joints.row(j) =
                kin.world_joints.row(p) +
                (kin.world_rot[p] * (kin.rest_joints.row(j) - kin.rest_joints.row(p)).transpose())
                    .transpose();
        }
    }
    return kin;
}

}  // namespace

PosedBody pose_body(const BodyModel& model, const BodyParams& params) {
    Kinematics kin = forward_kinematics(model, params);
    const int nv = model.vertex_count();

    PosedBody out;
    out.joints = kin.world_joints;
    out.vertices.setZero(nv, 3);

    // v' = sum_k w_vk (A_k (t_v - j_k) + p_k)
    for (int col = 0; col < model.skin_weights.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(model.skin_weights, col); it; ++it) {
            const int v = static_cast<int>(it.row());
            const int k = static_cast<int>(it.col());
            Vec3 rest = kin.shaped.row(v).transpose() - kin.rest_joints.row(k).transpose();
            out.vertices.row(v) +=
                it.value() *
                (kin.world_rot[k] * rest + kin.world_joints.row(k).transpose()).transpose();
        }

    out.vertices.rowwise() += params.translation.transpose();
    out.joints.rowwise() += params.translation.transpose();
    return out;
}

int ParamVector::dimension(const BodyModel& model) {
    return 3 + 3 * model.joint_count() + model.hand_coeff_count();
}

Eigen::VectorXd ParamVector::pack(const BodyModel& model, const BodyParams& params) {
    Eigen::VectorXd x(dimension(model));
    x.segment<3>(0) = params.translation;
    x.segment(3, 3 * model.joint_count()) = params.pose;
    if (model.hand_coeff_count() > 0) {
        if (params.hand_pose.size() == model.hand_coeff_count())
            x.tail(model.hand_coeff_count()) = params.hand_pose;
        else
            x.tail(model.hand_coeff_count()).setZero();
    }
    return x;
}

BodyParams ParamVector::unpack(const BodyModel& model, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& shape) {
    if (x.size() != dimension(model)) throw std::runtime_error("param vector: wrong dimension");
    BodyParams p;
    p.translation = x.segment<3>(0);
    p.pose = x.segment(3, 3 * model.joint_count());
    p.shape = shape;
    p.hand_pose = x.tail(model.hand_coeff_count());
    return p;
}

JointDerivatives joint_derivatives(const BodyModel& model, const BodyParams& params) {
    Kinematics kin = forward_kinematics(model, params);
    const int nj = model.joint_count();
    const int dim = ParamVector::dimension(model);
    const Eigen::VectorXd pose = effective_pose(model, params);

    JointDerivatives out;
    out.joints = kin.world_joints;
    out.joints.rowwise() += params.translation.transpose();
    out.jacobian.setZero(3 * nj, dim);

    // Translation moves every joint identically.
    for (int j = 0; j < nj; ++j) out.jacobian.block<3, 3>(3 * j, 0).setIdentity();

    // d(world joints)/d(effective pose), propagated down the subtree of the
    // perturbed joint: dA_j = dA_parent * L_j, dp_j = dp_parent + dA_parent * offset_j.
    Eigen::MatrixXd pose_jac = Eigen::MatrixXd::Zero(3 * nj, 3 * nj);
    std::vector<Eigen::Matrix3d> dA(nj);
    std::vector<Vec3> dp(nj);
    std::vector<char> affected(nj);
    for (int m = 0; m < nj; ++m) {
        auto local_jac = rodrigues_jacobian(pose.segment<3>(3 * m));
        for (int i = 0; i < 3; ++i) {
            std::fill(affected.begin(), affected.end(), 0);
            affected[m] = 1;
            dA[m] = m == 0 ? local_jac[i] : Eigen::Matrix3d(kin.world_rot[model.parents[m]] * local_jac[i]);
            dp[m].setZero();
            for (int j = m + 1; j < nj; ++j) {
                const int p = model.parents[j];
                if (!affected[p]) continue;
                affected[j] = 1;
                dA[j] = dA[p] * kin.local_rot[j];
                Vec3 offset = (kin.rest_joints.row(j) - kin.rest_joints.row(p)).transpose();
                dp[j] = dp[p] + dA[p] * offset;
            }
            for (int j = 0; j < nj; ++j)
                if (affected[j]) pose_jac.block<3, 1>(3 * j, 3 * m + i) = dp[j];
        }
    }

    // Free pose columns; hand-driven entries route through hand coefficients.
    std::vector<std::uint8_t> driven = model.hand_driven_pose_mask();
    for (int e = 0; e < 3 * nj; ++e)
        if (!driven[e]) out.jacobian.col(3 + e) = pose_jac.col(e);

    if (model.hand_coeff_count() > 0) {
        int coeff_base = 3 + 3 * nj;
        int offset = 0;
        for (const auto& hand : model.hands) {
            const int coeffs = static_cast<int>(hand.basis.cols());
            for (int c = 0; c < coeffs; ++c) {
                Eigen::VectorXd col = Eigen::VectorXd::Zero(3 * nj);
                for (size_t k = 0; k < hand.joints.size(); ++k)
                    for (int i = 0; i < 3; ++i)
                        col += hand.basis(3 * k + i, c) * pose_jac.col(3 * hand.joints[k] + i);
                out.jacobian.col(coeff_base + offset + c) = col;
            }
            offset += coeffs;
        }
    }
    return out;
}

}  // namespace hsc::body
