#include "hsc/geometry/mesh_io.hpp"

#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "hsc/log.hpp"

namespace hsc::geometry {

namespace {

[[noreturn]] void parse_error(const std::filesystem::path& path, int line, const std::string& what) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + what);
}

void finalize_loaded(Mesh& mesh, const std::filesystem::path& path) {
    mesh.validate_indices();
    mesh.compute_vertex_normals();
    if (!mesh.orientation_consistent())
        warn(path.string() + ": face orientation is not consistent");
}

// ---------------------------------------------------------------- OBJ

Mesh load_obj(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    Mesh mesh;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag.empty() || tag[0] == '#') continue;

        if (tag == "v") {
            Vec3 v;
            if (!(ls >> v.x() >> v.y() >> v.z())) parse_error(path, line_no, "malformed vertex");
            mesh.vertices.push_back(v);
        } else if (tag == "f") {
            std::vector<int> poly;
            std::string item;
            while (ls >> item) {
                // "i", "i/t", "i/t/n", "i//n" — only the vertex index matters.
                size_t slash = item.find('/');
                std::string head = slash == std::string::npos ? item : item.substr(0, slash);
                int idx = 0;
                try {
                    idx = std::stoi(head);
                } catch (const std::exception&) {
                    parse_error(path, line_no, "bad face index '" + item + "'");
                }
                if (idx <= 0) parse_error(path, line_no, "non-positive face index " + std::to_string(idx));
                if (idx > mesh.vertex_count())
                    parse_error(path, line_no, "face index " + std::to_string(idx) + " out of range");
                poly.push_back(idx - 1);
            }
            if (poly.size() < 3) parse_error(path, line_no, "face with fewer than 3 vertices");
            for (size_t k = 2; k < poly.size(); ++k)
                mesh.faces.push_back({poly[0], poly[k - 1], poly[k]});
        }
        // vn / vt / usemtl / o / g / s: ignored
    }
    finalize_loaded(mesh, path);
    return mesh;
}

void save_obj(const Mesh& mesh, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << std::setprecision(17);
    for (const auto& v : mesh.vertices) out << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
    for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
}

// ---------------------------------------------------------------- PLY

struct PlyProperty {
    std::string type;   // scalar type, or the index type for lists
    std::string count_type;  // non-empty for lists
    std::string name;
    bool is_list = false;
};

struct PlyElement {
    std::string name;
    size_t count = 0;
    std::vector<PlyProperty> properties;
};

size_t scalar_size(const std::string& type) {
    if (type == "char" || type == "uchar" || type == "int8" || type == "uint8") return 1;
    if (type == "short" || type == "ushort" || type == "int16" || type == "uint16") return 2;
    if (type == "int" || type == "uint" || type == "int32" || type == "uint32" || type == "float" ||
        type == "float32")
        return 4;
    if (type == "double" || type == "float64") return 8;
    throw std::runtime_error("unsupported ply type '" + type + "'");
}

double read_binary_scalar(std::istream& in, const std::string& type) {
    char buf[8];
    size_t n = scalar_size(type);
    in.read(buf, static_cast<std::streamsize>(n));
    if (!in) throw std::runtime_error("truncated ply payload");
    if (type == "char" || type == "int8") return *reinterpret_cast<int8_t*>(buf);
    if (type == "uchar" || type == "uint8") return *reinterpret_cast<uint8_t*>(buf);
    if (type == "short" || type == "int16") return *reinterpret_cast<int16_t*>(buf);
    if (type == "ushort" || type == "uint16") return *reinterpret_cast<uint16_t*>(buf);
    if (type == "int" || type == "int32") return *reinterpret_cast<int32_t*>(buf);
    if (type == "uint" || type == "uint32") return *reinterpret_cast<uint32_t*>(buf);
    if (type == "float" || type == "float32") {
        float f;
        std::memcpy(&f, buf, 4);
        return f;
    }
    double d;
    std::memcpy(&d, buf, 8);
    return d;
}

Mesh load_ply(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    std::string line;
    int line_no = 0;
    auto next_line = [&]() -> std::string {
        if (!std::getline(in, line)) parse_error(path, line_no, "unexpected end of header");
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };

    if (next_line() != "ply") parse_error(path, line_no, "missing ply magic");
    bool binary = false;
    std::vector<PlyElement> elements;
    while (true) {
        std::istringstream ls(next_line());
        std::string tag;
        ls >> tag;
        if (tag == "comment") continue;
        if (tag == "format") {
            std::string fmt;
            ls >> fmt;
            if (fmt == "ascii")
                binary = false;
            else if (fmt == "binary_little_endian")
                binary = true;
            else
                parse_error(path, line_no, "unsupported ply format '" + fmt + "'");
        } else if (tag == "element") {
            PlyElement el;
            if (!(ls >> el.name >> el.count)) parse_error(path, line_no, "malformed element");
            elements.push_back(el);
        } else if (tag == "property") {
            if (elements.empty()) parse_error(path, line_no, "property before element");
            PlyProperty prop;
            std::string first;
            ls >> first;
            if (first == "list") {
                prop.is_list = true;
                if (!(ls >> prop.count_type >> prop.type >> prop.name))
                    parse_error(path, line_no, "malformed list property");
            } else {
                prop.type = first;
                if (!(ls >> prop.name)) parse_error(path, line_no, "malformed property");
            }
            elements.back().properties.push_back(prop);
        } else if (tag == "end_header") {
            break;
        } else {
            parse_error(path, line_no, "unknown header entry '" + tag + "'");
        }
    }

    Mesh mesh;
    auto read_scalar = [&](const std::string& type) -> double {
        if (binary) return read_binary_scalar(in, type);
        double v;
        if (!(in >> v)) parse_error(path, line_no, "malformed ply payload");
        return v;
    };

    for (const auto& el : elements) {
        if (el.name == "vertex") {
            mesh.vertices.reserve(el.count);
            for (size_t i = 0; i < el.count; ++i) {
                Vec3 v = Vec3::Zero();
                for (const auto& prop : el.properties) {
                    if (prop.is_list) parse_error(path, line_no, "list property on vertex element");
                    double value = read_scalar(prop.type);
                    if (prop.name == "x") v.x() = value;
                    else if (prop.name == "y") v.y() = value;
                    else if (prop.name == "z") v.z() = value;
                    // normals/colors/extras are skipped on load
                }
                mesh.vertices.push_back(v);
            }
        } else if (el.name == "face") {
            mesh.faces.reserve(el.count);
            for (size_t i = 0; i < el.count; ++i) {
                for (const auto& prop : el.properties) {
                    if (!prop.is_list) {
                        read_scalar(prop.type);
                        continue;
                    }
                    int n = static_cast<int>(read_scalar(prop.count_type));
                    if (n < 3) parse_error(path, line_no, "face with fewer than 3 vertices");
                    std::vector<int> poly(n);
                    for (int k = 0; k < n; ++k) poly[k] = static_cast<int>(read_scalar(prop.type));
                    for (int k = 2; k < n; ++k) mesh.faces.push_back({poly[0], poly[k - 1], poly[k]});
                }
            }
        } else {
            // Skip unknown elements.
            for (size_t i = 0; i < el.count; ++i)
                for (const auto& prop : el.properties) {
                    if (prop.is_list) {
                        int n = static_cast<int>(read_scalar(prop.count_type));
                        for (int k = 0; k < n; ++k) read_scalar(prop.type);
                    } else {
                        read_scalar(prop.type);
                    }
                }
        }
    }
    finalize_loaded(mesh, path);
    return mesh;
}

void save_ply(const Mesh& mesh, const std::filesystem::path& path, const VertexColors* colors,
              bool binary) {
    if (colors && colors->size() != mesh.vertices.size())
        throw std::runtime_error("vertex color count does not match vertex count");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());

    out << "ply\n";
    out << (binary ? "format binary_little_endian 1.0\n" : "format ascii 1.0\n");
    out << "element vertex " << mesh.vertices.size() << "\n";
    out << "property double x\nproperty double y\nproperty double z\n";
    if (colors) out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    out << "element face " << mesh.faces.size() << "\n";
    out << "property list uchar int vertex_indices\n";
    out << "end_header\n";

    if (binary) {
        for (size_t i = 0; i < mesh.vertices.size(); ++i) {
            double xyz[3] = {mesh.vertices[i].x(), mesh.vertices[i].y(), mesh.vertices[i].z()};
            out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
            if (colors) out.write(reinterpret_cast<const char*>((*colors)[i].data()), 3);
        }
        for (const auto& f : mesh.faces) {
            uint8_t n = 3;
            int32_t idx[3] = {f[0], f[1], f[2]};
            out.write(reinterpret_cast<const char*>(&n), 1);
            out.write(reinterpret_cast<const char*>(idx), sizeof(idx));
        }
    } else {
        out << std::setprecision(17);
        for (size_t i = 0; i < mesh.vertices.size(); ++i) {
            out << mesh.vertices[i].x() << " " << mesh.vertices[i].y() << " " << mesh.vertices[i].z();
            if (colors)
                out << " " << int((*colors)[i][0]) << " " << int((*colors)[i][1]) << " "
                    << int((*colors)[i][2]);
            out << "\n";
        }
        for (const auto& f : mesh.faces) out << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
    }
}

}  // namespace

MeshFormat format_from_path(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    for (auto& c : ext) c = static_cast<char>(std::tolower(c));
    if (ext == ".obj") return MeshFormat::Obj;
    if (ext == ".ply") return MeshFormat::Ply;
    throw std::runtime_error("unknown mesh extension '" + ext + "' for " + path.string());
}

Mesh load_mesh(const std::filesystem::path& path) { return load_mesh(path, format_from_path(path)); }

Mesh load_mesh(const std::filesystem::path& path, MeshFormat format) {
    return format == MeshFormat::Obj ? load_obj(path) : load_ply(path);
}

void save_mesh(const Mesh& mesh, const std::filesystem::path& path, MeshFormat format,
               const VertexColors* colors, bool binary_ply) {
    if (format == MeshFormat::Obj) {
        if (colors) throw std::runtime_error("obj export does not support vertex colors");
        save_obj(mesh, path);
    } else {
        save_ply(mesh, path, colors, binary_ply);
    }
}

void save_mesh(const Mesh& mesh, const std::filesystem::path& path) {
    save_mesh(mesh, path, format_from_path(path));
}

VertexColors contact_colors(const std::vector<std::uint8_t>& labels) {
    VertexColors colors(labels.size());
    for (size_t i = 0; i < labels.size(); ++i)
        colors[i] = labels[i] ? std::array<std::uint8_t, 3>{0, 255, 0}
                              : std::array<std::uint8_t, 3>{128, 128, 128};
    return colors;
}

}  // namespace hsc::geometry
