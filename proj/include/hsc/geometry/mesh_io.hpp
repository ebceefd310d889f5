#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "hsc/geometry/mesh.hpp"

namespace hsc::geometry {

enum class MeshFormat { Obj, Ply };

using VertexColors = std::vector<std::array<std::uint8_t, 3>>;

MeshFormat format_from_path(const std::filesystem::path& path);

// Loads an OBJ (vertices/faces) or PLY (ascii or binary_little_endian) mesh.
// Face indices are validated and vertex normals computed; inconsistent
// orientation only warns. Malformed input throws with the offending line.
Mesh load_mesh(const std::filesystem::path& path);
Mesh load_mesh(const std::filesystem::path& path, MeshFormat format);

// When colors are given (PLY only) they are written as uchar RGB.
void save_mesh(const Mesh& mesh, const std::filesystem::path& path, MeshFormat format,
               const VertexColors* colors = nullptr, bool binary_ply = false);
void save_mesh(const Mesh& mesh, const std::filesystem::path& path);

// Contact visualization convention: labeled vertices green (0,255,0),
// the rest gray (128,128,128).
VertexColors contact_colors(const std::vector<std::uint8_t>& labels);

}  // namespace hsc::geometry
