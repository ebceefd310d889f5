#pragma once

#include <cstddef>
#include <vector>

#include "hsc/geometry/mesh.hpp"

namespace hsc::geometry {

struct ClosestHit {
    double distance = 0.0;
    Vec3 point = Vec3::Zero();
    int face = -1;
    Vec3 normal = Vec3::Zero();  // unit geometric normal of the hit face
};

struct QueryStats {
    std::size_t nodes_visited = 0;
    std::size_t triangles_tested = 0;
};

// Closest point on triangle (a,b,c) to p. Falls back to edge distances for
// degenerate (zero-area) triangles.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Median-split AABB tree over a mesh's triangles. Triangle data is copied
/// at build time; the tree is immutable afterwards and safe for concurrent
/// queries. Pass a per-thread QueryStats to instrument a query.
class Bvh {
   public:
    explicit Bvh(const Mesh& mesh, int leaf_size = 4);

    ClosestHit closest_point(const Vec3& p, QueryStats* stats = nullptr) const;

    std::size_t triangle_count() const { return tris_.size(); }

   private:
    struct Box {
        Vec3 lo, hi;
        double sq_distance(const Vec3& p) const;
    };
    struct Node {
        Box box;
        int left = -1, right = -1;  // internal nodes
        int begin = 0, count = 0;   // leaves
        bool is_leaf() const { return count > 0; }
    };
    struct Triangle {
        Vec3 a, b, c;
        Vec3 unit_normal;
        int face = -1;
    };

    int build(std::vector<int>& order, int begin, int end, int leaf_size);
    void query(int node, const Vec3& p, ClosestHit& best, double& best_sq, QueryStats* stats) const;

    std::vector<Node> nodes_;
    std::vector<Triangle> tris_;
};

}  // namespace hsc::geometry
