#include "hsc/body/test_humanoid.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace hsc::body {

const int kHumanoidParents[24] = {-1, 0, 0,  0,  1,  2,  3,  4,  5,  6,  7,  8,
                                  9,  9, 9, 12, 13, 14, 16, 17, 18, 19, 20, 21};

namespace {

constexpr int kRadial = 9;
constexpr int kAxialRings = 3;  // rings per capsule (>= 2)

struct Builder {
    std::vector<Vec3> verts;
    std::vector<std::array<int, 3>> faces;
    std::vector<Eigen::Triplet<double>> skin;
    std::vector<int> region;

    int add_vertex(const Vec3& p, int region_id) {
        verts.push_back(p);
        region.push_back(region_id);
        return static_cast<int>(verts.size()) - 1;
    }

    void weight(int v, int joint, int blend_parent) {
        if (blend_parent >= 0) {
            skin.emplace_back(v, joint, 0.5);
            skin.emplace_back(v, blend_parent, 0.5);
        } else {
            skin.emplace_back(v, joint, 1.0);
        }
    }

    // Cylinder with cone caps between p0 and p1. All vertices skin to
    // `joint`; the ring and pole nearest p0 blend with `blend_parent`.
    void add_capsule(const Vec3& p0, const Vec3& p1, double radius, int joint, int blend_parent,
                     int region_id) {
        Vec3 axis = p1 - p0;
        Vec3 axisn = axis.normalized();
        int ref = 0;
        for (int k = 1; k < 3; ++k)
            if (std::abs(axisn[k]) < std::abs(axisn[ref])) ref = k;
        Vec3 u = Vec3::Unit(ref).cross(axisn).normalized();
        Vec3 v = axisn.cross(u);

        std::vector<std::vector<int>> rings(kAxialRings);
        for (int i = 0; i < kAxialRings; ++i) {
            double t = static_cast<double>(i) / (kAxialRings - 1);
            Vec3 center = p0 + t * axis;
            for (int k = 0; k < kRadial; ++k) {
                double phi = 2.0 * M_PI * k / kRadial;
                int idx = add_vertex(center + radius * (std::cos(phi) * u + std::sin(phi) * v), region_id);
                weight(idx, joint, i == 0 ? blend_parent : -1);
                rings[i].push_back(idx);
            }
        }
        int pole_lo = add_vertex(p0 - radius * axisn, region_id);
        weight(pole_lo, joint, blend_parent);
        int pole_hi = add_vertex(p1 + radius * axisn, region_id);
        weight(pole_hi, joint, -1);

        for (int i = 0; i + 1 < kAxialRings; ++i)
            for (int k = 0; k < kRadial; ++k) {
                int kn = (k + 1) % kRadial;
                faces.push_back({rings[i][k], rings[i][kn], rings[i + 1][kn]});
                faces.push_back({rings[i][k], rings[i + 1][kn], rings[i + 1][k]});
            }
        for (int k = 0; k < kRadial; ++k) {
            int kn = (k + 1) % kRadial;
            faces.push_back({rings[kAxialRings - 1][k], rings[kAxialRings - 1][kn], pole_hi});
            faces.push_back({rings[0][kn], rings[0][k], pole_lo});
        }
    }

    void add_sphere(const Vec3& center, double radius, int joint, int region_id, int n_lat = 5) {
        std::vector<std::vector<int>> rings;
        for (int i = 1; i < n_lat; ++i) {
            double theta = M_PI * i / n_lat;  // from +z pole downward
            rings.emplace_back();
            for (int k = 0; k < kRadial; ++k) {
                double phi = 2.0 * M_PI * k / kRadial;
                Vec3 p = center + radius * Vec3(std::sin(theta) * std::cos(phi),
                                                std::sin(theta) * std::sin(phi), std::cos(theta));
                int idx = add_vertex(p, region_id);
                weight(idx, joint, -1);
                rings.back().push_back(idx);
            }
        }
        int pole_top = add_vertex(center + radius * Vec3(0, 0, 1), region_id);
        weight(pole_top, joint, -1);
        int pole_bot = add_vertex(center - radius * Vec3(0, 0, 1), region_id);
        weight(pole_bot, joint, -1);

        // With x = cos(phi)*u convention above, increasing phi is CCW seen
        // from +z, so downward band quads wind (k+1, k, ...) for outward normals.
        for (size_t i = 0; i + 1 < rings.size(); ++i)
            for (int k = 0; k < kRadial; ++k) {
                int kn = (k + 1) % kRadial;
                faces.push_back({rings[i][kn], rings[i][k], rings[i + 1][k]});
                faces.push_back({rings[i][kn], rings[i + 1][k], rings[i + 1][kn]});
            }
        for (int k = 0; k < kRadial; ++k) {
            int kn = (k + 1) % kRadial;
            faces.push_back({rings.front()[k], rings.front()[kn], pole_top});
            faces.push_back({rings.back()[kn], rings.back()[k], pole_bot});
        }
    }
};

}  // namespace

BodyModel make_test_humanoid(std::uint64_t seed) {
    const int nj = 24;
    Eigen::MatrixXd joints(nj, 3);
    joints << 0.00, 0.00, 0.95,   // pelvis
        0.09, 0.00, 0.91,         // l_hip
        -0.09, 0.00, 0.91,        // r_hip
        0.00, 0.00, 1.05,         // spine1
        0.10, 0.00, 0.52,         // l_knee
        -0.10, 0.00, 0.52,        // r_knee
        0.00, 0.00, 1.16,         // spine2
        0.10, 0.00, 0.08,         // l_ankle
        -0.10, 0.00, 0.08,        // r_ankle
        0.00, 0.00, 1.27,         // spine3
        0.10, 0.13, 0.045,        // l_foot (toe)
        -0.10, 0.13, 0.045,       // r_foot (toe)
        0.00, 0.00, 1.43,         // neck
        0.07, 0.00, 1.39,         // l_collar
        -0.07, 0.00, 1.39,        // r_collar
        0.00, 0.00, 1.55,         // head
        0.19, 0.00, 1.42,         // l_shoulder
        -0.19, 0.00, 1.42,        // r_shoulder
        0.45, 0.00, 1.42,         // l_elbow
        -0.45, 0.00, 1.42,        // r_elbow
        0.70, 0.00, 1.42,         // l_wrist
        -0.70, 0.00, 1.42,        // r_wrist
        0.78, 0.00, 1.42,         // l_hand
        -0.78, 0.00, 1.42;        // r_hand

    enum Region {
        kTorso = 0,
        kHeadRegion,
        kLeftArm,
        kRightArm,
        kLeftLeg,
        kRightLeg,
        kLeftFootRegion,
        kRightFootRegion,
        kFootSole,
    };
    std::vector<std::string> region_names = {"torso",    "head",      "left_arm",  "right_arm", "left_leg",
                                             "right_leg", "left_foot", "right_foot", kFootSoleRegion};

    Builder b;
    auto J = [&](int j) { return Vec3(joints.row(j)); };

    struct Segment {
        int from, to;
        double radius;
        int joint, blend_parent, region;
    };
    const std::vector<Segment> segments = {
        {kPelvis, kSpine1, 0.130, kPelvis, -1, kTorso},
        {kSpine1, kSpine2, 0.125, kSpine1, kPelvis, kTorso},
        {kSpine2, kSpine3, 0.120, kSpine2, kSpine1, kTorso},
        {kSpine3, kNeck, 0.100, kSpine3, kSpine2, kTorso},
        {kNeck, kHead, 0.055, kNeck, kSpine3, kHeadRegion},
        {kLeftCollar, kLeftShoulder, 0.055, kLeftCollar, kSpine3, kTorso},
        {kRightCollar, kRightShoulder, 0.055, kRightCollar, kSpine3, kTorso},
        {kLeftShoulder, kLeftElbow, 0.045, kLeftShoulder, kLeftCollar, kLeftArm},
        {kRightShoulder, kRightElbow, 0.045, kRightShoulder, kRightCollar, kRightArm},
        {kLeftElbow, kLeftWrist, 0.040, kLeftElbow, kLeftShoulder, kLeftArm},
        {kRightElbow, kRightWrist, 0.040, kRightElbow, kRightShoulder, kRightArm},
        {kLeftWrist, kLeftHand, 0.035, kLeftWrist, kLeftElbow, kLeftArm},
        {kRightWrist, kRightHand, 0.035, kRightWrist, kRightElbow, kRightArm},
        {kLeftHip, kLeftKnee, 0.075, kLeftHip, kPelvis, kLeftLeg},
        {kRightHip, kRightKnee, 0.075, kRightHip, kPelvis, kRightLeg},
        {kLeftKnee, kLeftAnkle, 0.055, kLeftKnee, kLeftHip, kLeftLeg},
        {kRightKnee, kRightAnkle, 0.055, kRightKnee, kRightHip, kRightLeg},
        {kLeftAnkle, kLeftFoot, 0.042, kLeftAnkle, kLeftKnee, kLeftFootRegion},
        {kRightAnkle, kRightFoot, 0.042, kRightAnkle, kRightKnee, kRightFootRegion},
    };
    for (const auto& s : segments) b.add_capsule(J(s.from), J(s.to), s.radius, s.joint, s.blend_parent, s.region);
    b.add_sphere(J(kHead) + Vec3(0, 0.01, 0.07), 0.095, kHead, kHeadRegion);

    // Small seeded surface jitter keeps the asset free of perfectly
    // coplanar/symmetric configurations.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-5e-4, 5e-4);
    for (auto& v : b.verts)
        for (int k = 0; k < 3; ++k) v[k] += jitter(rng);

    // Foot-region vertices near the ground become the sole set.
    for (size_t i = 0; i < b.verts.size(); ++i)
        if ((b.region[i] == kLeftFootRegion || b.region[i] == kRightFootRegion) && b.verts[i].z() < 0.02)
            b.region[i] = kFootSole;

    BodyModel model;
    model.topology_name = "test_humanoid_v1";
    const int nv = static_cast<int>(b.verts.size());
    model.template_vertices.resize(nv, 3);
    for (int i = 0; i < nv; ++i) model.template_vertices.row(i) = b.verts[i].transpose();
    model.faces = b.faces;
    model.parents.assign(kHumanoidParents, kHumanoidParents + nj);
    model.region_names = region_names;
    model.vertex_region = b.region;

    model.skin_weights.resize(nv, nj);
    model.skin_weights.setFromTriplets(b.skin.begin(), b.skin.end());

    // Joint regressor: uniform weights over the 8 template vertices nearest
    // each design joint.
    const int k_nearest = 8;
    std::vector<Eigen::Triplet<double>> reg;
    for (int j = 0; j < nj; ++j) {
        std::vector<std::pair<double, int>> dist(nv);
        for (int i = 0; i < nv; ++i) dist[i] = {(b.verts[i] - J(j)).squaredNorm(), i};
        std::partial_sort(dist.begin(), dist.begin() + k_nearest, dist.end());
        for (int k = 0; k < k_nearest; ++k) reg.emplace_back(j, dist[k].second, 1.0 / k_nearest);
    }
    model.joint_regressor.resize(nj, nv);
    model.joint_regressor.setFromTriplets(reg.begin(), reg.end());

    // Shape dims: 0 = uniform stature scaling about the pelvis,
    // 1 = radial girth away from the vertical axis through the pelvis.
    Eigen::MatrixXd stature(nv, 3), girth(nv, 3);
    for (int i = 0; i < nv; ++i) {
        Vec3 rel = b.verts[i] - J(kPelvis);
        stature.row(i) = (0.05 * rel).transpose();
        Vec3 radial(rel.x(), rel.y(), 0.0);
        double len = radial.norm();
        girth.row(i) = (len > 1e-9 ? Vec3(0.03 * radial / len) : Vec3::Zero()).transpose();
    }
    model.shape_dirs = {stature, girth};

    model.bend_joints = {
        {kLeftKnee, 0, 1.0},
        {kRightKnee, 0, 1.0},
        {kLeftElbow, 2, 1.0},
        {kRightElbow, 2, -1.0},
    };

    model.validate();
    return model;
}

}  // namespace hsc::body
