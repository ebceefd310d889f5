#include "hsc/fitting/fit.hpp"

#include <numeric>
#include <stdexcept>

namespace hsc::fitting {

using body::BodyModel;
using body::BodyParams;
using body::ParamVector;
using camera::Camera;
using camera::KeypointSet;

namespace {

std::vector<int> stage1_free(const BodyModel&) {
    return {0, 1, 2, 3, 4, 5};  // translation + global orientation
}

std::vector<int> stage2_free(const BodyModel& model) {
    std::vector<int> free = {0, 1, 2};
    const auto driven = model.hand_driven_pose_mask();
    for (int e = 0; e < 3 * model.joint_count(); ++e)
        if (!driven[e]) free.push_back(3 + e);
    const int dim = ParamVector::dimension(model);
    for (int i = 3 + 3 * model.joint_count(); i < dim; ++i) free.push_back(i);  // hand coefficients
    return free;
}

camera::ConsensusWeights uniform_weights(int cams, int joints) {
    camera::ConsensusWeights w;
    w.weights = Eigen::MatrixXd::Ones(cams, joints);
    return w;
}

// Reduction between the full ParamVector layout and a free-index subset.
struct Reduction {
    std::vector<int> free;
    Eigen::VectorXd base;  // full vector holding the frozen entries

    Eigen::VectorXd reduce(const Eigen::VectorXd& full) const {
        Eigen::VectorXd r(free.size());
        for (size_t i = 0; i < free.size(); ++i) r(i) = full(free[i]);
        return r;
    }
    Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const {
        Eigen::VectorXd full = base;
        for (size_t i = 0; i < free.size(); ++i) full(free[i]) = reduced(i);
        return full;
    }
};

SolveOptions solve_options(const EnergyConfig& cfg) {
    SolveOptions opt;
    opt.max_iterations = cfg.max_iterations;
    opt.tolerance = cfg.tolerance;
    return opt;
}

SolveReport solve_stage(const BodyModel& model, const std::vector<Camera>& cams,
                        const KeypointSet& keypoints, const camera::ConsensusWeights& weights,
                        const EnergyConfig& cfg, const std::vector<int>& free, BodyParams& params) {
    Reduction red;
    red.free = free;
    red.base = ParamVector::pack(model, params);
    const Eigen::VectorXd shape = params.shape;

    auto eval = [&](const Eigen::VectorXd& xr, Eigen::VectorXd* grad, Eigen::MatrixXd* hess) {
        BodyParams p = ParamVector::unpack(model, red.expand(xr), shape);
        FrameEval fe = evaluate_frame(model, p, cams, keypoints, weights, cfg, grad != nullptr);
        if (grad) {
            grad->resize(red.free.size());
            for (size_t i = 0; i < red.free.size(); ++i) (*grad)(i) = fe.gradient(red.free[i]);
        }
        if (hess) {
            hess->resize(red.free.size(), red.free.size());
            for (size_t i = 0; i < red.free.size(); ++i)
                for (size_t k = 0; k < red.free.size(); ++k)
                    (*hess)(i, k) = fe.hessian(red.free[i], red.free[k]);
        }
        return fe.energy;
    };

    Eigen::VectorXd xr = red.reduce(red.base);
    SolveReport report = levenberg_marquardt<Eigen::MatrixXd>(eval, lm_step_dense, xr, solve_options(cfg));
    params = ParamVector::unpack(model, red.expand(xr), shape);
    return report;
}

void require_observations(const KeypointSet& keypoints) {
    for (const auto& obs : keypoints.per_camera)
        if ((obs.col(2).array() > 0.0).any()) return;
    throw std::runtime_error("no observations");
}

}  // namespace

FitResult fit_frame(const BodyModel& model, const std::vector<Camera>& cams,
                    const KeypointSet& keypoints, const BodyParams& init, const EnergyConfig& cfg,
                    const camera::ConsensusWeights* weights_override) {
    cfg.validate();
    check_params(model, init);
    require_observations(keypoints);

    camera::ConsensusWeights weights =
        weights_override ? *weights_override
                         : consensus_weights(cams, keypoints, {cfg.consensus_tau, 0.3});

    BodyParams params = init;
    if (params.hand_pose.size() == 0) params.hand_pose = Eigen::VectorXd::Zero(model.hand_coeff_count());

    SolveReport stage1 = solve_stage(model, cams, keypoints, weights, cfg, stage1_free(model), params);
    SolveReport stage2 = solve_stage(model, cams, keypoints, weights, cfg, stage2_free(model), params);

    FrameFit frame;
    frame.params = params;
    FrameEval fe = evaluate_frame(model, params, cams, keypoints, weights, cfg, false);
    frame.breakdown = fe.breakdown;
    frame.total_energy = fe.energy;
    frame.consensus = weights.weights;
    frame.converged = stage2.converged;
    frame.iterations = stage1.iterations + stage2.iterations;
    frame.energy_history = stage1.energy_history;
    frame.energy_history.insert(frame.energy_history.end(), stage2.energy_history.begin(),
                                stage2.energy_history.end());

    FitResult result;
    result.frames.push_back(std::move(frame));
    return result;
}

FitResult fit_batch(const BodyModel& model, const std::vector<Camera>& cams,
                    const std::vector<KeypointSet>& keypoints_per_frame,
                    const std::vector<BodyParams>& inits, const EnergyConfig& cfg) {
    cfg.validate();
    if (keypoints_per_frame.empty()) throw std::runtime_error("fit_batch: no frames");
    if (keypoints_per_frame.size() != inits.size())
        throw std::runtime_error("fit_batch: init count does not match frame count");
    if (keypoints_per_frame.size() == 1)
        return fit_frame(model, cams, keypoints_per_frame[0], inits[0], cfg);

    const int T = static_cast<int>(keypoints_per_frame.size());
    const int dim = ParamVector::dimension(model);
    const int zdim = model.hand_coeff_count();

    std::vector<camera::ConsensusWeights> weights;
    weights.reserve(T);
    for (int t = 0; t < T; ++t) {
        require_observations(keypoints_per_frame[t]);
        weights.push_back(consensus_weights(cams, keypoints_per_frame[t], {cfg.consensus_tau, 0.3}));
    }

    Reduction red;
    red.free = stage2_free(model);
    const int fdim = static_cast<int>(red.free.size());
    const Eigen::VectorXd shape = inits[0].shape;

    Eigen::VectorXd x(T * fdim);
    std::vector<Eigen::VectorXd> bases(T);
    for (int t = 0; t < T; ++t) {
        check_params(model, inits[t]);
        BodyParams p = inits[t];
        if (p.hand_pose.size() == 0) p.hand_pose = Eigen::VectorXd::Zero(zdim);
        bases[t] = ParamVector::pack(model, p);
        red.base = bases[t];
        x.segment(t * fdim, fdim) = red.reduce(bases[t]);
    }

    // Reduced z-coefficient positions (the layout tail is always free).
    std::vector<int> z_red;
    for (int i = 0; i < fdim; ++i)
        if (red.free[i] >= dim - zdim) z_red.push_back(i);

    auto unpack_frame = [&](const Eigen::VectorXd& xall, int t) {
        red.base = bases[t];
        return ParamVector::unpack(model, red.expand(xall.segment(t * fdim, fdim)), shape);
    };

    auto eval = [&](const Eigen::VectorXd& xall, Eigen::VectorXd* grad,
                    Eigen::SparseMatrix<double>* hess) {
        const bool with_derivs = grad != nullptr;
        std::vector<FrameEval> evals(T);
        double energy = 0;
        for (int t = 0; t < T; ++t) {
            BodyParams p = unpack_frame(xall, t);
            evals[t] = evaluate_frame(model, p, cams, keypoints_per_frame[t], weights[t], cfg, with_derivs);
            energy += evals[t].energy;
            if (!with_derivs && t > 0) {
                BodyParams prev = unpack_frame(xall, t - 1);
                energy += energy_smoothness(model, prev, p, cfg);
            }
        }
        if (!with_derivs) return energy;

        grad->setZero(T * fdim);
        std::vector<Eigen::Triplet<double>> triplets;
        for (int t = 0; t < T; ++t) {
            for (int i = 0; i < fdim; ++i) {
                (*grad)(t * fdim + i) += evals[t].gradient(red.free[i]);
                for (int k = 0; k < fdim; ++k) {
                    double v = evals[t].hessian(red.free[i], red.free[k]);
                    if (v != 0.0) triplets.emplace_back(t * fdim + i, t * fdim + k, v);
                }
            }
        }

        // Smoothness coupling between consecutive frames.
        for (int t = 0; t + 1 < T; ++t) {
            Eigen::VectorXd dj = evals[t + 1].joints - evals[t].joints;
            energy += cfg.lambda_sm_body * dj.squaredNorm();

            Eigen::MatrixXd ja(3 * model.joint_count(), fdim), jb(3 * model.joint_count(), fdim);
            for (int i = 0; i < fdim; ++i) {
                ja.col(i) = evals[t].joint_jacobian.col(red.free[i]);
                jb.col(i) = evals[t + 1].joint_jacobian.col(red.free[i]);
            }
            const double w = 2.0 * cfg.lambda_sm_body;
            grad->segment(t * fdim, fdim) -= w * (ja.transpose() * dj);
            grad->segment((t + 1) * fdim, fdim) += w * (jb.transpose() * dj);

            Eigen::MatrixXd haa = w * (ja.transpose() * ja);
            Eigen::MatrixXd hbb = w * (jb.transpose() * jb);
            Eigen::MatrixXd hab = -w * (ja.transpose() * jb);
            for (int i = 0; i < fdim; ++i)
                for (int k = 0; k < fdim; ++k) {
                    if (haa(i, k) != 0.0) triplets.emplace_back(t * fdim + i, t * fdim + k, haa(i, k));
                    if (hbb(i, k) != 0.0)
                        triplets.emplace_back((t + 1) * fdim + i, (t + 1) * fdim + k, hbb(i, k));
                    if (hab(i, k) != 0.0) {
                        triplets.emplace_back(t * fdim + i, (t + 1) * fdim + k, hab(i, k));
                        triplets.emplace_back((t + 1) * fdim + k, t * fdim + i, hab(i, k));
                    }
                }

            if (zdim > 0) {
                Eigen::VectorXd za(z_red.size()), zb(z_red.size());
                for (size_t i = 0; i < z_red.size(); ++i) {
                    za(i) = xall(t * fdim + z_red[i]);
                    zb(i) = xall((t + 1) * fdim + z_red[i]);
                }
                Eigen::VectorXd dz = zb - za;
                energy += cfg.lambda_sm_hand * dz.squaredNorm();
                const double wh = 2.0 * cfg.lambda_sm_hand;
                for (size_t i = 0; i < z_red.size(); ++i) {
                    (*grad)(t * fdim + z_red[i]) -= wh * dz(i);
                    (*grad)((t + 1) * fdim + z_red[i]) += wh * dz(i);
                    triplets.emplace_back(t * fdim + z_red[i], t * fdim + z_red[i], wh);
                    triplets.emplace_back((t + 1) * fdim + z_red[i], (t + 1) * fdim + z_red[i], wh);
                    triplets.emplace_back(t * fdim + z_red[i], (t + 1) * fdim + z_red[i], -wh);
                    triplets.emplace_back((t + 1) * fdim + z_red[i], t * fdim + z_red[i], -wh);
                }
            }
        }

        hess->resize(T * fdim, T * fdim);
        hess->setFromTriplets(triplets.begin(), triplets.end());
        return energy;
    };

    SolveReport report =
        levenberg_marquardt<Eigen::SparseMatrix<double>>(eval, lm_step_sparse, x, solve_options(cfg));

    FitResult result;
    result.frames.resize(T);
    for (int t = 0; t < T; ++t) {
        FrameFit& frame = result.frames[t];
        frame.params = unpack_frame(x, t);
        FrameEval fe =
            evaluate_frame(model, frame.params, cams, keypoints_per_frame[t], weights[t], cfg, false);
        frame.breakdown = fe.breakdown;
        if (t > 0) {
            BodyParams prev = unpack_frame(x, t - 1);
            PosedBody pa = pose_body(model, prev);
            PosedBody pb = pose_body(model, frame.params);
            frame.breakdown.smooth_body = (pb.joints - pa.joints).squaredNorm();
            if (zdim > 0)
                frame.breakdown.smooth_hand =
                    (frame.params.hand_pose - prev.hand_pose).squaredNorm();
        }
        frame.total_energy = frame.breakdown.total(cfg);
        frame.consensus = weights[t].weights;
        frame.converged = report.converged;
        frame.iterations = report.iterations;
        frame.energy_history = report.energy_history;
    }
    return result;
}

}  // namespace hsc::fitting
