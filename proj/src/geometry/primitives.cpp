#include "hsc/geometry/primitives.hpp"

namespace hsc::geometry {

Mesh make_grid(int nx, int ny, double size_x, double size_y) {
    Mesh mesh;
    const double dx = size_x / nx, dy = size_y / ny;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            mesh.vertices.emplace_back(-0.5 * size_x + i * dx, -0.5 * size_y + j * dy, 0.0);
    auto vid = [&](int i, int j) { return j * (nx + 1) + i; };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            // CCW seen from +z so normals point up
            mesh.faces.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            mesh.faces.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    mesh.compute_vertex_normals();
    return mesh;
}

Mesh make_box(const Vec3& center, const Vec3& half_extent) {
    Mesh mesh;
    for (int corner = 0; corner < 8; ++corner) {
        Vec3 sign((corner & 1) ? 1 : -1, (corner & 2) ? 1 : -1, (corner & 4) ? 1 : -1);
        mesh.vertices.push_back(center + sign.cwiseProduct(half_extent));
    }
    // Each quad split into two CCW triangles, outward normals.
    const int quads[6][4] = {
        {0, 2, 3, 1},  // -z
        {4, 5, 7, 6},  // +z
        {0, 1, 5, 4},  // -y
        {2, 6, 7, 3},  // +y
        {0, 4, 6, 2},  // -x
        {1, 3, 7, 5},  // +x
    };
    for (const auto& q : quads) {
        mesh.faces.push_back({q[0], q[1], q[2]});
        mesh.faces.push_back({q[0], q[2], q[3]});
    }
    mesh.compute_vertex_normals();
    return mesh;
}

void append(Mesh& mesh, const Mesh& other) {
    const int base = mesh.vertex_count();
    mesh.vertices.insert(mesh.vertices.end(), other.vertices.begin(), other.vertices.end());
    for (const auto& f : other.faces) mesh.faces.push_back({f[0] + base, f[1] + base, f[2] + base});
    mesh.compute_vertex_normals();
}

}  // namespace hsc::geometry
