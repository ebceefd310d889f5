#pragma once

#include <vector>

#include "hsc/fitting/energy.hpp"
#include "hsc/fitting/solver.hpp"

namespace hsc::fitting {

struct FrameFit {
    body::BodyParams params;
    EnergyBreakdown breakdown;      // unweighted terms; breakdown.total(cfg) = total_energy
    double total_energy = 0;
    Eigen::MatrixXd consensus;      // C x J weights used for this frame
    bool converged = false;
    int iterations = 0;
    std::vector<double> energy_history;  // per accepted solver step, non-increasing
};

struct FitResult {
    std::vector<FrameFit> frames;
};

/// Single-frame solve of sum_c E_J^c + lambda_bone sum_c E_O^c + E_reg.
/// Stage 1 frees global orientation + translation, stage 2 all pose (hand
/// coefficients included, shape fixed). Consensus weights are computed from
/// the detections unless an override is supplied (pass uniform weights to
/// reproduce an unweighted fit).
FitResult fit_frame(const body::BodyModel& model, const std::vector<camera::Camera>& cams,
                    const camera::KeypointSet& keypoints, const body::BodyParams& init,
                    const EnergyConfig& cfg, const camera::ConsensusWeights* weights_override = nullptr);

/// Joint refinement of T frames with temporal smoothness on 3D joints and
/// hand coefficients. For each consecutive pair the smoothness contribution
/// is booked on the later frame's breakdown, so per-frame totals sum to the
/// batch objective. T = 1 falls back to fit_frame.
FitResult fit_batch(const body::BodyModel& model, const std::vector<camera::Camera>& cams,
                    const std::vector<camera::KeypointSet>& keypoints_per_frame,
                    const std::vector<body::BodyParams>& inits, const EnergyConfig& cfg);

}  // namespace hsc::fitting
