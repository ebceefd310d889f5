#include "hsc/body/model_io.hpp"

#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace hsc::body {

using nlohmann::json;

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows, int cols_expected = -1) {
    if (!rows.is_array()) throw std::runtime_error("model file: expected array of rows");
    Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (static_cast<Eigen::Index>(row.size()) != m.cols())
            throw std::runtime_error("model file: ragged matrix rows");
        for (size_t c = 0; c < row.size(); ++c) m(r, c) = row[c].get<double>();
    }
    if (cols_expected >= 0 && m.cols() != cols_expected)
        throw std::runtime_error("model file: matrix has wrong column count");
    return m;
}

Eigen::SparseMatrix<double> sparse_from_json(const json& triplets, int rows, int cols) {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(triplets.size());
    for (const auto& entry : triplets) {
        if (!entry.is_array() || entry.size() != 3)
            throw std::runtime_error("model file: sparse entries must be [row, col, value]");
        t.emplace_back(entry[0].get<int>(), entry[1].get<int>(), entry[2].get<double>());
    }
    Eigen::SparseMatrix<double> m(rows, cols);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

json sparse_to_json(const Eigen::SparseMatrix<double>& m) {
    json out = json::array();
    for (int k = 0; k < m.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
            out.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()), it.value()});
    return out;
}

}  // namespace

BodyModel load_body_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }

    BodyModel model;
    model.topology_name = doc.at("topology_name").get<std::string>();
    model.template_vertices = matrix_from_json(doc.at("template"), 3);
    for (const auto& f : doc.at("faces"))
        model.faces.push_back({f[0].get<int>(), f[1].get<int>(), f[2].get<int>()});
    model.parents = doc.at("parents").get<std::vector<int>>();

    const int nv = model.vertex_count();
    const int nj = model.joint_count();
    model.joint_regressor = sparse_from_json(doc.at("regressor"), nj, nv);
    model.skin_weights = sparse_from_json(doc.at("skin_weights"), nv, nj);

    for (const auto& dirs : doc.at("shape_dirs")) model.shape_dirs.push_back(matrix_from_json(dirs, 3));

    const auto& regions = doc.at("regions");
    model.region_names = regions.at("names").get<std::vector<std::string>>();
    model.vertex_region = regions.at("vertex_region").get<std::vector<int>>();

    if (doc.contains("bend_joints"))
        for (const auto& bj : doc["bend_joints"])
            model.bend_joints.push_back(
                {bj.at("joint").get<int>(), bj.at("axis").get<int>(), bj.at("natural_sign").get<double>()});

    if (doc.contains("hands"))
        for (const auto& h : doc["hands"]) {
            HandSpec hand;
            hand.name = h.at("name").get<std::string>();
            hand.joints = h.at("joints").get<std::vector<int>>();
            hand.basis = matrix_from_json(h.at("basis"));
            model.hands.push_back(std::move(hand));
        }

    model.validate();
    return model;
}

void save_body_model(const BodyModel& model, const std::filesystem::path& path) {
    json doc;
    doc["topology_name"] = model.topology_name;
    doc["template"] = matrix_to_json(model.template_vertices);
    json faces = json::array();
    for (const auto& f : model.faces) faces.push_back({f[0], f[1], f[2]});
    doc["faces"] = faces;
    doc["parents"] = model.parents;
    doc["regressor"] = sparse_to_json(model.joint_regressor);
    doc["skin_weights"] = sparse_to_json(model.skin_weights);
    json dirs = json::array();
    for (const auto& d : model.shape_dirs) dirs.push_back(matrix_to_json(d));
    doc["shape_dirs"] = dirs;
    doc["regions"] = {{"names", model.region_names}, {"vertex_region", model.vertex_region}};
    json bends = json::array();
    for (const auto& bj : model.bend_joints)
        bends.push_back({{"joint", bj.joint}, {"axis", bj.axis}, {"natural_sign", bj.natural_sign}});
    doc["bend_joints"] = bends;
    if (!model.hands.empty()) {
        json hands = json::array();
        for (const auto& h : model.hands)
            hands.push_back({{"name", h.name}, {"joints", h.joints}, {"basis", matrix_to_json(h.basis)}});
        doc["hands"] = hands;
    }

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << doc.dump(1) << "\n";
}

}  // namespace hsc::body
