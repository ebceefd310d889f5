#pragma once

#include <vector>

#include "hsc/body/model.hpp"
#include "hsc/camera/camera.hpp"

namespace hsc::camera {

// Linear (DLT) triangulation from two views, minimizing algebraic error.
// Throws "degenerate baseline" when the rays are near-parallel (identical
// cameras included).
Vec3 triangulate_pair(const Camera& cam_a, const Vec2& obs_a, const Camera& cam_b, const Vec2& obs_b);

/// Per-camera, per-joint weights in [0,1] from triplet triangulate-and-
/// reproject voting.
struct ConsensusWeights {
    Eigen::MatrixXd weights;  // C x J
    double weight(int cam, int joint) const { return weights(cam, joint); }
};

struct ConsensusConfig {
    double tau = 20.0;      // pixels; weight = exp(-mean_error / tau)
    double min_confidence = 0.3;  // detections below this do not join triplets
};

// For every joint with >= 3 sufficiently confident views: triangulate each
// view pair, reproject into each third view, accumulate that view's
// reprojection error, and map the mean error e to weight exp(-e/tau).
// Joints with fewer observing views keep weight 1 everywhere.
ConsensusWeights consensus_weights(const std::vector<Camera>& cams, const KeypointSet& keypoints,
                                   const ConsensusConfig& config = {});

// Chordal-mean fusion of several pose estimates: per-joint quaternion
// averaging with sign alignment; translation, shape, and hand coefficients
// are arithmetic means. Throws on an empty list.
body::BodyParams fuse_pose_estimates(const std::vector<body::BodyParams>& estimates);

}  // namespace hsc::camera
