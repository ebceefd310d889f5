#pragma once

#include <Eigen/Core>
#include <vector>

#include "hsc/body/model.hpp"
#include "hsc/camera/camera.hpp"
#include "hsc/camera/multiview.hpp"

namespace hsc::fitting {

/// Weights, robustifier scale, and solver knobs for the multiview objective.
struct EnergyConfig {
    double sigma_gm = 100.0;     // pixels
    double lambda_pose = 1e-3;   // L2 body-pose prior
    double lambda_bend = 10.0;   // one-sided elbow/knee hyperextension penalty
    double lambda_shape = 0.0;   // shape comes from the model file
    double lambda_bone = 0.5;    // bone-orientation term
    double lambda_sm_body = 100.0;
    double lambda_sm_hand = 1.0;
    double consensus_tau = 20.0;  // pixels
    int window = 30;              // batch refinement length T
    int max_iterations = 100;     // per solver stage
    double tolerance = 1e-10;     // relative energy decrease
    double bend_kappa = 1.0;

    // Reserved for terms outside this implementation's scope; must stay 0.
    double lambda_collision = 0.0;
    double lambda_expression = 0.0;

    void validate() const;  // throws on sigma<=0, negative lambdas, window<1
};

// Geman-McClure: rho(r; sigma) = sigma^2 r^2 / (sigma^2 + r^2).
double gm_loss(double r, double sigma);
double gm_loss_derivative(double r, double sigma);
// rho'(r)/r, finite at r=0; the IRLS weight.
double gm_weight(double r, double sigma);

/// Unweighted per-term values; total() applies the lambda weights.
struct EnergyBreakdown {
    double joints = 0;       // sum_c E_J^c (confidence/consensus already inside)
    double bones = 0;        // sum_c E_O^c
    double pose_prior = 0;   // |theta_body|^2
    double bend_prior = 0;   // sum exp(kappa u) - 1 over impossible-side bends
    double shape_prior = 0;  // |beta|^2
    double smooth_body = 0;  // sum_t |joints(t+1)-joints(t)|^2
    double smooth_hand = 0;  // sum_t |z(t+1)-z(t)|^2

    double total(const EnergyConfig& cfg) const;
    EnergyBreakdown& operator+=(const EnergyBreakdown& other);
};

/// Per-frame evaluation products. Gradient/Hessian use the ParamVector
/// layout [translation, pose, hand coefficients]; the Hessian is the
/// IRLS Gauss-Newton approximation.
struct FrameEval {
    double energy = 0;  // weighted total, smoothness excluded
    EnergyBreakdown breakdown;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
    Eigen::MatrixXd joint_jacobian;  // 3J x P, cached for smoothness coupling
    Eigen::VectorXd joints;          // 3J flattened posed joints
};

FrameEval evaluate_frame(const body::BodyModel& model, const body::BodyParams& params,
                         const std::vector<camera::Camera>& cams, const camera::KeypointSet& keypoints,
                         const camera::ConsensusWeights& weights, const EnergyConfig& cfg,
                         bool with_derivatives);

// The spec-level term evaluators. Gradients (optional) are w.r.t. the
// ParamVector layout and include the term's lambda weight exactly as it
// enters the total objective.
double energy_joints(const body::BodyModel& model, const body::BodyParams& params,
                     const std::vector<camera::Camera>& cams, const camera::KeypointSet& keypoints,
                     const camera::ConsensusWeights& weights, const EnergyConfig& cfg,
                     Eigen::VectorXd* gradient = nullptr);

double energy_bones(const body::BodyModel& model, const body::BodyParams& params,
                    const std::vector<camera::Camera>& cams, const camera::KeypointSet& keypoints,
                    const camera::ConsensusWeights& weights, const EnergyConfig& cfg,
                    Eigen::VectorXd* gradient = nullptr);

// lambda_pose |theta_body|^2 + lambda_bend sum(exp(kappa u)-1) + lambda_shape |beta|^2.
double energy_priors(const body::BodyModel& model, const body::BodyParams& params,
                     const EnergyConfig& cfg, Eigen::VectorXd* gradient = nullptr);

// lambda_sm_body |joints(b)-joints(a)|^2 + lambda_sm_hand |z(b)-z(a)|^2 for one
// consecutive frame pair; gradients per frame when requested.
double energy_smoothness(const body::BodyModel& model, const body::BodyParams& frame_a,
                         const body::BodyParams& frame_b, const EnergyConfig& cfg,
                         Eigen::VectorXd* gradient_a = nullptr, Eigen::VectorXd* gradient_b = nullptr);

}  // namespace hsc::fitting
