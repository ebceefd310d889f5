#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <array>
#include <string>
#include <vector>

namespace hsc::geometry {

using Vec3 = Eigen::Vector3d;

/// Indexed triangle surface. Units are meters throughout.
/// Vertex normals are area-weighted face-normal averages and must be
/// recomputed (compute_vertex_normals) after any vertex edit.
struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;
    std::vector<Vec3> vertex_normals;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int face_count() const { return static_cast<int>(faces.size()); }

    // Unnormalized face normal; norm is twice the triangle area.
    Vec3 face_normal_raw(int f) const;
    // Unit geometric normal. Zero-area faces return (0,0,0).
    Vec3 face_normal(int f) const;
    double face_area(int f) const;

    // Area-weighted average of incident face normals, normalized.
    // Vertices with no non-degenerate incident face get (0,0,1).
    void compute_vertex_normals();

    // Throws std::runtime_error if any face index is out of range.
    void validate_indices() const;

    // True when every interior edge is traversed in opposite directions by
    // its two incident faces, checked per connected component.
    bool orientation_consistent() const;
};

// Applies R*v + t to every vertex; normals are rotated.
Mesh transformed(const Mesh& mesh, const Eigen::Matrix3d& rotation, const Vec3& translation);

}  // namespace hsc::geometry
