#include "hsc/body/topology_map.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hsc::body {

void TopologyMap::validate() const {
    std::set<int> seen_src, seen_dst;
    for (const auto& [s, d] : pairs) {
        if (s < 0 || s >= src_size)
            throw std::runtime_error("topology map: src index " + std::to_string(s) + " out of range");
        if (d < 0 || d >= dst_size)
            throw std::runtime_error("topology map: dst index " + std::to_string(d) + " out of range");
        if (!seen_src.insert(s).second || !seen_dst.insert(d).second)
            throw std::runtime_error("topology map: mapping is not injective");
    }
}

TopologyMap TopologyMap::inverse() const {
    TopologyMap out;
    out.src_topology = dst_topology;
    out.dst_topology = src_topology;
    out.src_size = dst_size;
    out.dst_size = src_size;
    out.pairs.reserve(pairs.size());
    for (const auto& [s, d] : pairs) out.pairs.emplace_back(d, s);
    return out;
}

contact::ContactVector map_contact_labels(const contact::ContactVector& labels, const TopologyMap& map) {
    map.validate();
    if (labels.size() != map.src_size)
        throw std::runtime_error("map_contact_labels: labels have " + std::to_string(labels.size()) +
                                 " entries, map expects " + std::to_string(map.src_size));

    contact::ContactVector out;
    out.topology = map.dst_topology;
    out.labels.assign(map.dst_size, 0);
    if (labels.has_probabilities()) out.probabilities.assign(map.dst_size, 0.0);
    for (const auto& [s, d] : map.pairs) {
        out.labels[d] = labels.labels[s];
        if (labels.has_probabilities()) out.probabilities[d] = labels.probabilities[s];
    }
    return out;
}

TopologyMap load_topology_map(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    TopologyMap map;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first) || first.empty() || first[0] == '#') continue;
        if (first == "topology_map") {
            if (!(ls >> map.src_topology >> map.src_size >> map.dst_topology >> map.dst_size))
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                         ": malformed header");
            continue;
        }
        int s = std::stoi(first), d = 0;
        if (!(ls >> d))
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": malformed pair");
        map.pairs.emplace_back(s, d);
    }
    map.validate();
    return map;
}

void save_topology_map(const TopologyMap& map, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "topology_map " << map.src_topology << " " << map.src_size << " " << map.dst_topology << " "
        << map.dst_size << "\n";
    for (const auto& [s, d] : map.pairs) out << s << " " << d << "\n";
}

}  // namespace hsc::body
