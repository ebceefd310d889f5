#include "hsc/fitting/energy.hpp"

#include <stdexcept>

namespace hsc::fitting {

using body::BodyModel;
using body::BodyParams;
using camera::Camera;
using camera::KeypointSet;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

void EnergyConfig::validate() const {
    if (sigma_gm <= 0) throw std::runtime_error("energy config: sigma_gm must be positive");
    for (double l : {lambda_pose, lambda_bend, lambda_shape, lambda_bone, lambda_sm_body, lambda_sm_hand,
                     lambda_collision, lambda_expression})
        if (l < 0) throw std::runtime_error("energy config: lambdas must be non-negative");
    if (consensus_tau <= 0) throw std::runtime_error("energy config: consensus_tau must be positive");
    if (window < 1) throw std::runtime_error("energy config: window must be >= 1");
    if (max_iterations < 1) throw std::runtime_error("energy config: max_iterations must be >= 1");
    if (tolerance < 0) throw std::runtime_error("energy config: tolerance must be non-negative");
}

double gm_loss(double r, double sigma) {
    double s2 = sigma * sigma, r2 = r * r;
    return s2 * r2 / (s2 + r2);
}

double gm_loss_derivative(double r, double sigma) {
    double s2 = sigma * sigma;
    double denom = s2 + r * r;
    return 2.0 * s2 * s2 * r / (denom * denom);
}

double gm_weight(double r, double sigma) {
    double s2 = sigma * sigma;
    double denom = s2 + r * r;
    return 2.0 * s2 * s2 / (denom * denom);
}

double EnergyBreakdown::total(const EnergyConfig& cfg) const {
    return joints + cfg.lambda_bone * bones + cfg.lambda_pose * pose_prior +
           cfg.lambda_bend * bend_prior + cfg.lambda_shape * shape_prior +
           cfg.lambda_sm_body * smooth_body + cfg.lambda_sm_hand * smooth_hand;
}

EnergyBreakdown& EnergyBreakdown::operator+=(const EnergyBreakdown& other) {
    joints += other.joints;
    bones += other.bones;
    pose_prior += other.pose_prior;
    bend_prior += other.bend_prior;
    shape_prior += other.shape_prior;
    smooth_body += other.smooth_body;
    smooth_hand += other.smooth_hand;
    return *this;
}

namespace {

// 2x3 pixel-vs-world-point derivative of the pinhole projection.
bool project_with_jacobian(const Camera& cam, const Vec3& world, Vec2* pixel,
                           Eigen::Matrix<double, 2, 3>* jac) {
    Vec3 pc = cam.to_camera(world);
    if (pc.z() <= 0.0) return false;
    const double iz = 1.0 / pc.z();
    (*pixel)(0) = cam.fx * pc.x() * iz + cam.cx;
    (*pixel)(1) = cam.fy * pc.y() * iz + cam.cy;
    if (jac) {
        Eigen::Matrix<double, 2, 3> dcam;
        dcam << cam.fx * iz, 0, -cam.fx * pc.x() * iz * iz, 0, cam.fy * iz, -cam.fy * pc.y() * iz * iz;
        *jac = dcam * cam.world_to_cam.rotation;
    }
    return true;
}

struct ReprojectionAccumulator {
    double energy = 0;
    Eigen::VectorXd* gradient = nullptr;
    Eigen::MatrixXd* hessian = nullptr;

    // factor * rho(|residual|); residual_jac is d(residual)/d(params).
    void add(double factor, const Vec2& residual, const Eigen::Matrix<double, 2, Eigen::Dynamic>& residual_jac,
             double sigma) {
        double n = residual.norm();
        energy += factor * gm_loss(n, sigma);
        if (!gradient) return;
        double irls = factor * gm_weight(n, sigma);
        gradient->noalias() += irls * (residual_jac.transpose() * residual);
        if (hessian) hessian->noalias() += irls * (residual_jac.transpose() * residual_jac);
    }

    void add_bounded_max(double factor, double sigma) { energy += factor * sigma * sigma; }
};

double joints_term(const BodyModel& model, const BodyParams& params, const std::vector<Camera>& cams,
                   const KeypointSet& keypoints, const camera::ConsensusWeights& weights,
                   const EnergyConfig& cfg, Eigen::VectorXd* gradient, Eigen::MatrixXd* hessian) {
    const int nj = model.joint_count();
    keypoints.validate(static_cast<int>(cams.size()), nj);

    body::JointDerivatives jd;
    Eigen::MatrixXd joints;
    if (gradient) {
        jd = body::joint_derivatives(model, params);
        joints = jd.joints;
    } else {
        joints = pose_body(model, params).joints;
    }

    ReprojectionAccumulator acc;
    acc.gradient = gradient;
    acc.hessian = hessian;
    for (size_t c = 0; c < cams.size(); ++c) {
        const auto& obs = keypoints.per_camera[c];
        for (int j = 0; j < nj; ++j) {
            const double conf = obs(j, 2);
            if (conf <= 0.0) continue;
            const double factor = conf * weights.weight(static_cast<int>(c), j);
            Vec2 pixel;
            Eigen::Matrix<double, 2, 3> dpix;
            if (!project_with_jacobian(cams[c], joints.row(j).transpose(), &pixel,
                                       gradient ? &dpix : nullptr)) {
                acc.add_bounded_max(factor, cfg.sigma_gm);
                continue;
            }
            Vec2 residual = pixel - Vec2(obs(j, 0), obs(j, 1));
            if (gradient) {
                Eigen::Matrix<double, 2, Eigen::Dynamic> jac = dpix * jd.jacobian.middleRows(3 * j, 3);
                acc.add(factor, residual, jac, cfg.sigma_gm);
            } else {
                acc.add(factor, residual, Eigen::Matrix<double, 2, Eigen::Dynamic>(), cfg.sigma_gm);
            }
        }
    }
    return acc.energy;
}

double bones_term(const BodyModel& model, const BodyParams& params, const std::vector<Camera>& cams,
                  const KeypointSet& keypoints, const camera::ConsensusWeights& weights,
                  const EnergyConfig& cfg, Eigen::VectorXd* gradient, Eigen::MatrixXd* hessian) {
    const int nj = model.joint_count();
    keypoints.validate(static_cast<int>(cams.size()), nj);

    body::JointDerivatives jd;
    Eigen::MatrixXd joints;
    if (gradient) {
        jd = body::joint_derivatives(model, params);
        joints = jd.joints;
    } else {
        joints = pose_body(model, params).joints;
    }

    ReprojectionAccumulator acc;
    acc.gradient = gradient;
    acc.hessian = hessian;
    for (size_t c = 0; c < cams.size(); ++c) {
        const auto& obs = keypoints.per_camera[c];
        for (int j = 1; j < nj; ++j) {
            const int p = model.parents[j];
            const double conf_j = obs(j, 2), conf_p = obs(p, 2);
            if (conf_j <= 0.0 || conf_p <= 0.0) continue;
            // A bone is only as reliable as its weaker endpoint.
            const double factor = std::min(conf_j, conf_p) *
                                  std::min(weights.weight(static_cast<int>(c), j),
                                           weights.weight(static_cast<int>(c), p));

            Vec2 pix_j, pix_p;
            Eigen::Matrix<double, 2, 3> dpix_j, dpix_p;
            bool ok_j = project_with_jacobian(cams[c], joints.row(j).transpose(), &pix_j,
                                              gradient ? &dpix_j : nullptr);
            bool ok_p = project_with_jacobian(cams[c], joints.row(p).transpose(), &pix_p,
                                              gradient ? &dpix_p : nullptr);
            if (!ok_j || !ok_p) {
                acc.add_bounded_max(factor, cfg.sigma_gm);
                continue;
            }
            Vec2 bone = pix_j - pix_p;
            Vec2 bone_detected(obs(j, 0) - obs(p, 0), obs(j, 1) - obs(p, 1));
            Vec2 residual = bone - bone_detected;
            if (gradient) {
                Eigen::Matrix<double, 2, Eigen::Dynamic> jac =
                    dpix_j * jd.jacobian.middleRows(3 * j, 3) - dpix_p * jd.jacobian.middleRows(3 * p, 3);
                acc.add(factor, residual, jac, cfg.sigma_gm);
            } else {
                acc.add(factor, residual, Eigen::Matrix<double, 2, Eigen::Dynamic>(), cfg.sigma_gm);
            }
        }
    }
    return acc.energy;
}

struct PriorEval {
    double pose_raw = 0;   // |theta_body|^2
    double bend_raw = 0;   // sum exp(kappa u) - 1
    double shape_raw = 0;  // |beta|^2
};

// Gradient/Hessian carry the lambda weights (they enter the objective that way).
PriorEval priors_term(const BodyModel& model, const BodyParams& params, const EnergyConfig& cfg,
                      Eigen::VectorXd* gradient, Eigen::MatrixXd* hessian) {
    check_params(model, params);
    PriorEval out;
    const int nj = model.joint_count();
    const auto driven = model.hand_driven_pose_mask();

    // L2 prior on body pose: root orientation and hand-driven entries excluded.
    for (int e = 3; e < 3 * nj; ++e) {
        if (driven[e]) continue;
        const double theta = params.pose(e);
        out.pose_raw += theta * theta;
        if (gradient) (*gradient)(3 + e) += cfg.lambda_pose * 2.0 * theta;
        if (hessian) (*hessian)(3 + e, 3 + e) += cfg.lambda_pose * 2.0;
    }

    // One-sided exponential on the anatomically impossible bending direction;
    // zero (and continuous) for straight or naturally bent limbs.
    for (const auto& bend : model.bend_joints) {
        const int e = 3 * bend.joint + bend.axis;
        const double u = -bend.natural_sign * params.pose(e);
        if (u <= 0.0) continue;
        const double ex = std::exp(cfg.bend_kappa * u);
        out.bend_raw += ex - 1.0;
        if (gradient) (*gradient)(3 + e) += cfg.lambda_bend * cfg.bend_kappa * ex * (-bend.natural_sign);
        if (hessian) (*hessian)(3 + e, 3 + e) += cfg.lambda_bend * cfg.bend_kappa * cfg.bend_kappa * ex;
    }

    out.shape_raw = params.shape.squaredNorm();  // beta is fixed, no gradient
    return out;
}

}  // namespace

double energy_joints(const BodyModel& model, const BodyParams& params, const std::vector<Camera>& cams,
                     const KeypointSet& keypoints, const camera::ConsensusWeights& weights,
                     const EnergyConfig& cfg, Eigen::VectorXd* gradient) {
    if (gradient) gradient->setZero(body::ParamVector::dimension(model));
    return joints_term(model, params, cams, keypoints, weights, cfg, gradient, nullptr);
}

double energy_bones(const BodyModel& model, const BodyParams& params, const std::vector<Camera>& cams,
                    const KeypointSet& keypoints, const camera::ConsensusWeights& weights,
                    const EnergyConfig& cfg, Eigen::VectorXd* gradient) {
    if (gradient) gradient->setZero(body::ParamVector::dimension(model));
    return bones_term(model, params, cams, keypoints, weights, cfg, gradient, nullptr);
}

double energy_priors(const BodyModel& model, const BodyParams& params, const EnergyConfig& cfg,
                     Eigen::VectorXd* gradient) {
    if (gradient) gradient->setZero(body::ParamVector::dimension(model));
    PriorEval pe = priors_term(model, params, cfg, gradient, nullptr);
    return cfg.lambda_pose * pe.pose_raw + cfg.lambda_bend * pe.bend_raw + cfg.lambda_shape * pe.shape_raw;
}

double energy_smoothness(const BodyModel& model, const BodyParams& frame_a, const BodyParams& frame_b,
                         const EnergyConfig& cfg, Eigen::VectorXd* gradient_a,
                         Eigen::VectorXd* gradient_b) {
    const int nj = model.joint_count();
    const int dim = body::ParamVector::dimension(model);

    Eigen::VectorXd joints_a(3 * nj), joints_b(3 * nj);
    Eigen::MatrixXd jac_a, jac_b;
    if (gradient_a || gradient_b) {
        auto da = body::joint_derivatives(model, frame_a);
        auto db = body::joint_derivatives(model, frame_b);
        jac_a = da.jacobian;
        jac_b = db.jacobian;
        for (int j = 0; j < nj; ++j) {
            joints_a.segment<3>(3 * j) = da.joints.row(j).transpose();
            joints_b.segment<3>(3 * j) = db.joints.row(j).transpose();
        }
    } else {
        auto pa = pose_body(model, frame_a).joints;
        auto pb = pose_body(model, frame_b).joints;
        for (int j = 0; j < nj; ++j) {
            joints_a.segment<3>(3 * j) = pa.row(j).transpose();
            joints_b.segment<3>(3 * j) = pb.row(j).transpose();
        }
    }

    Eigen::VectorXd dj = joints_b - joints_a;
    double energy = cfg.lambda_sm_body * dj.squaredNorm();

    Eigen::VectorXd dz;
    if (frame_a.hand_pose.size() > 0 && frame_b.hand_pose.size() == frame_a.hand_pose.size()) {
        dz = frame_b.hand_pose - frame_a.hand_pose;
        energy += cfg.lambda_sm_hand * dz.squaredNorm();
    }

    if (gradient_a) {
        gradient_a->setZero(dim);
        gradient_a->noalias() -= cfg.lambda_sm_body * 2.0 * (jac_a.transpose() * dj);
        if (dz.size() > 0) gradient_a->tail(dz.size()) -= cfg.lambda_sm_hand * 2.0 * dz;
    }
    if (gradient_b) {
        gradient_b->setZero(dim);
        gradient_b->noalias() += cfg.lambda_sm_body * 2.0 * (jac_b.transpose() * dj);
        if (dz.size() > 0) gradient_b->tail(dz.size()) += cfg.lambda_sm_hand * 2.0 * dz;
    }
    return energy;
}

FrameEval evaluate_frame(const BodyModel& model, const BodyParams& params,
                         const std::vector<Camera>& cams, const KeypointSet& keypoints,
                         const camera::ConsensusWeights& weights, const EnergyConfig& cfg,
                         bool with_derivatives) {
    const int dim = body::ParamVector::dimension(model);
    FrameEval out;

    Eigen::VectorXd* grad = nullptr;
    Eigen::MatrixXd* hess = nullptr;
    if (with_derivatives) {
        out.gradient.setZero(dim);
        out.hessian.setZero(dim, dim);
        grad = &out.gradient;
        hess = &out.hessian;

        auto jd = body::joint_derivatives(model, params);
        out.joint_jacobian = jd.jacobian;
        out.joints.resize(3 * model.joint_count());
        for (int j = 0; j < model.joint_count(); ++j)
            out.joints.segment<3>(3 * j) = jd.joints.row(j).transpose();
    }

    // Data terms accumulate raw, then get their lambda applied here so the
    // breakdown keeps unweighted values.
    Eigen::VectorXd term_grad;
    Eigen::MatrixXd term_hess;
    if (with_derivatives) {
        term_grad.setZero(dim);
        term_hess.setZero(dim, dim);
    }
    out.breakdown.joints =
        joints_term(model, params, cams, keypoints, weights, cfg, with_derivatives ? &term_grad : nullptr,
                    with_derivatives ? &term_hess : nullptr);
    if (with_derivatives) {
        *grad += term_grad;
        *hess += term_hess;
        term_grad.setZero();
        term_hess.setZero();
    }
    out.breakdown.bones =
        bones_term(model, params, cams, keypoints, weights, cfg, with_derivatives ? &term_grad : nullptr,
                   with_derivatives ? &term_hess : nullptr);
    if (with_derivatives) {
        *grad += cfg.lambda_bone * term_grad;
        *hess += cfg.lambda_bone * term_hess;
    }

    PriorEval pe = priors_term(model, params, cfg, grad, hess);
    out.breakdown.pose_prior = pe.pose_raw;
    out.breakdown.bend_prior = pe.bend_raw;
    out.breakdown.shape_prior = pe.shape_raw;

    out.energy = out.breakdown.total(cfg);
    return out;
}

}  // namespace hsc::fitting
