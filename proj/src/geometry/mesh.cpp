#include "hsc/geometry/mesh.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace hsc::geometry {

Vec3 Mesh::face_normal_raw(int f) const {
    const auto& tri = faces[f];
    const Vec3& a = vertices[tri[0]];
    const Vec3& b = vertices[tri[1]];
    const Vec3& c = vertices[tri[2]];
    return (b - a).cross(c - a);
}

Vec3 Mesh::face_normal(int f) const {
    Vec3 n = face_normal_raw(f);
    double len = n.norm();
    if (len < 1e-14) return Vec3::Zero();
    return n / len;
}

double Mesh::face_area(int f) const { return 0.5 * face_normal_raw(f).norm(); }

void Mesh::compute_vertex_normals() {
    vertex_normals.assign(vertices.size(), Vec3::Zero());
    for (int f = 0; f < face_count(); ++f) {
        Vec3 n = face_normal_raw(f);  // area-weighted by construction
        if (n.squaredNorm() < 1e-28) continue;
        for (int k = 0; k < 3; ++k) vertex_normals[faces[f][k]] += n;
    }
    for (auto& n : vertex_normals) {
        double len = n.norm();
        if (len < 1e-14)
            n = Vec3(0, 0, 1);
        else
            n /= len;
    }
}

void Mesh::validate_indices() const {
    const int nv = vertex_count();
    for (int f = 0; f < face_count(); ++f) {
        for (int k = 0; k < 3; ++k) {
            int idx = faces[f][k];
            if (idx < 0 || idx >= nv)
                throw std::runtime_error("mesh face " + std::to_string(f) +
                                         " references invalid vertex index " + std::to_string(idx));
        }
    }
}

bool Mesh::orientation_consistent() const {
    // Each directed edge must appear at most once; an undirected edge shared
    // by two faces must be traversed in opposite directions.
    std::map<std::pair<int, int>, int> directed;
    for (int f = 0; f < face_count(); ++f) {
        const auto& tri = faces[f];
        for (int k = 0; k < 3; ++k) {
            int u = tri[k], v = tri[(k + 1) % 3];
            if (u == v) continue;
            if (++directed[{u, v}] > 1) return false;
        }
    }
    return true;
}

Mesh transformed(const Mesh& mesh, const Eigen::Matrix3d& rotation, const Vec3& translation) {
    Mesh out;
    out.vertices.reserve(mesh.vertices.size());
    for (const auto& v : mesh.vertices) out.vertices.push_back(rotation * v + translation);
    out.faces = mesh.faces;
    out.vertex_normals.reserve(mesh.vertex_normals.size());
    for (const auto& n : mesh.vertex_normals) out.vertex_normals.push_back(rotation * n);
    return out;
}

}  // namespace hsc::geometry
