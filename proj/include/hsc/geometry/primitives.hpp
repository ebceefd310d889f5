#pragma once

#include "hsc/geometry/mesh.hpp"

namespace hsc::geometry {

// Planar grid in the z=0 plane, (nx+1)*(ny+1) vertices, 2*nx*ny upward-facing
// triangles, centered at the origin.
Mesh make_grid(int nx, int ny, double size_x, double size_y);

// Axis-aligned box with outward-facing triangles.
Mesh make_box(const Vec3& center, const Vec3& half_extent);

// Appends other's geometry to mesh (indices re-based).
void append(Mesh& mesh, const Mesh& other);

}  // namespace hsc::geometry
