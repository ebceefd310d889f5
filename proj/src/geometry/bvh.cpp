#include "hsc/geometry/bvh.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hsc::geometry {

namespace {

Vec3 closest_point_on_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
    Vec3 ab = b - a;
    double len2 = ab.squaredNorm();
    if (len2 < 1e-28) return a;
    double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return a + t * ab;
}

}  // namespace

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    // Ericson, Real-Time Collision Detection, 5.1.5.
    Vec3 ab = b - a, ac = c - a, ap = p - a;
    double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;

    Vec3 bp = p - b;
    double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return b;

    double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        double v = d1 / (d1 - d3);
        return a + v * ab;
    }

    Vec3 cp = p - c;
    double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return c;

    double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        double w = d2 / (d2 - d6);
        return a + w * ac;
    }

    double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return b + w * (c - b);
    }

    double denom = va + vb + vc;
    if (denom < 1e-28) {
        // Sliver triangle: interior solution is ill-defined, use edges.
        Vec3 best = closest_point_on_segment(p, a, b);
        double best_sq = (p - best).squaredNorm();
        for (const Vec3& q : {closest_point_on_segment(p, b, c), closest_point_on_segment(p, c, a)}) {
            double sq = (p - q).squaredNorm();
            if (sq < best_sq) {
                best_sq = sq;
                best = q;
            }
        }
        return best;
    }
    double v = vb / denom, w = vc / denom;
    return a + ab * v + ac * w;
}

double Bvh::Box::sq_distance(const Vec3& p) const {
    double sq = 0.0;
    for (int k = 0; k < 3; ++k) {
        double d = 0.0;
        if (p[k] < lo[k])
            d = lo[k] - p[k];
        else if (p[k] > hi[k])
            d = p[k] - hi[k];
        sq += d * d;
    }
    return sq;
}

Bvh::Bvh(const Mesh& mesh, int leaf_size) {
    if (mesh.faces.empty() || mesh.vertices.empty()) throw std::runtime_error("empty geometry");
    if (leaf_size < 1) leaf_size = 1;
    mesh.validate_indices();

    tris_.resize(mesh.faces.size());
    for (int f = 0; f < mesh.face_count(); ++f) {
        Triangle& t = tris_[f];
        t.a = mesh.vertices[mesh.faces[f][0]];
        t.b = mesh.vertices[mesh.faces[f][1]];
        t.c = mesh.vertices[mesh.faces[f][2]];
        t.unit_normal = mesh.face_normal(f);
        t.face = f;
    }

    std::vector<int> order(tris_.size());
    std::iota(order.begin(), order.end(), 0);
    nodes_.reserve(2 * tris_.size());
    build(order, 0, static_cast<int>(order.size()), leaf_size);

    // Reorder triangles to match leaf ranges.
    std::vector<Triangle> sorted(tris_.size());
    for (size_t i = 0; i < order.size(); ++i) sorted[i] = tris_[order[i]];
    tris_ = std::move(sorted);
}

int Bvh::build(std::vector<int>& order, int begin, int end, int leaf_size) {
    Node node;
    node.box.lo = Vec3::Constant(std::numeric_limits<double>::max());
    node.box.hi = Vec3::Constant(std::numeric_limits<double>::lowest());
    for (int i = begin; i < end; ++i) {
        const Triangle& t = tris_[order[i]];
        node.box.lo = node.box.lo.cwiseMin(t.a).cwiseMin(t.b).cwiseMin(t.c);
        node.box.hi = node.box.hi.cwiseMax(t.a).cwiseMax(t.b).cwiseMax(t.c);
    }

    int index = static_cast<int>(nodes_.size());
    nodes_.push_back(node);

    if (end - begin <= leaf_size) {
        nodes_[index].begin = begin;
        nodes_[index].count = end - begin;
        return index;
    }

    Vec3 extent = node.box.hi - node.box.lo;
    int axis = 0;
    if (extent[1] > extent[axis]) axis = 1;
    if (extent[2] > extent[axis]) axis = 2;

    // Median split on centroid; ties broken by triangle index so the build
    // is deterministic.
    int mid = begin + (end - begin) / 2;
    std::sort(order.begin() + begin, order.begin() + end, [&](int lhs, int rhs) {
        double cl = (tris_[lhs].a[axis] + tris_[lhs].b[axis] + tris_[lhs].c[axis]);
        double cr = (tris_[rhs].a[axis] + tris_[rhs].b[axis] + tris_[rhs].c[axis]);
        if (cl != cr) return cl < cr;
        return lhs < rhs;
    });

    int left = build(order, begin, mid, leaf_size);
    int right = build(order, mid, end, leaf_size);
    nodes_[index].left = left;
    nodes_[index].right = right;
    return index;
}

void Bvh::query(int node_index, const Vec3& p, ClosestHit& best, double& best_sq, QueryStats* stats) const {
    const Node& node = nodes_[node_index];
    if (stats) ++stats->nodes_visited;

    if (node.is_leaf()) {
        for (int i = node.begin; i < node.begin + node.count; ++i) {
            const Triangle& t = tris_[i];
            if (stats) ++stats->triangles_tested;
            Vec3 q = closest_point_on_triangle(p, t.a, t.b, t.c);
            double sq = (p - q).squaredNorm();
            if (sq < best_sq) {
                best_sq = sq;
                best.point = q;
                best.face = t.face;
                best.normal = t.unit_normal;
            }
        }
        return;
    }

    double dl = nodes_[node.left].box.sq_distance(p);
    double dr = nodes_[node.right].box.sq_distance(p);
    int first = node.left, second = node.right;
    if (dr < dl) {
        std::swap(first, second);
        std::swap(dl, dr);
    }
    if (dl < best_sq) query(first, p, best, best_sq, stats);
    if (dr < best_sq) query(second, p, best, best_sq, stats);
}

ClosestHit Bvh::closest_point(const Vec3& p, QueryStats* stats) const {
    ClosestHit best;
    double best_sq = std::numeric_limits<double>::max();
    query(0, p, best, best_sq, stats);
    best.distance = std::sqrt(best_sq);
    return best;
}

}  // namespace hsc::geometry
