#pragma once

#include <vector>

#include "hsc/geometry/mesh.hpp"

namespace hsc::geometry {

// Multi-source shortest-path distance on the mesh edge graph with Euclidean
// edge lengths. Vertices unreachable from every source get +infinity.
// Throws "no sources" when the source set is empty.
std::vector<double> geodesic_distances(const Mesh& mesh, const std::vector<int>& sources);

}  // namespace hsc::geometry
