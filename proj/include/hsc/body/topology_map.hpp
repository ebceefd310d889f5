#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hsc/contact/contact_vector.hpp"

namespace hsc::body {

/// Injective vertex correspondence between two mesh topologies
/// (e.g. the below-the-neck match between two body templates).
struct TopologyMap {
    std::string src_topology;
    std::string dst_topology;
    int src_size = 0;
    int dst_size = 0;
    std::vector<std::pair<int, int>> pairs;  // (src -> dst)

    void validate() const;  // throws on out-of-range or non-injective pairs
    TopologyMap inverse() const;
};

// dst label =  src label for each pair; unmapped dst vertices are 0 (not in
// contact). Probabilities, when present, map the same way.
contact::ContactVector map_contact_labels(const contact::ContactVector& labels, const TopologyMap& map);

// Two-column text file of index pairs, with a header line
// "topology_map <src> <src_size> <dst> <dst_size>".
TopologyMap load_topology_map(const std::filesystem::path& path);
void save_topology_map(const TopologyMap& map, const std::filesystem::path& path);

}  // namespace hsc::body
