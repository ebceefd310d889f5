#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hsc::contact {

/// Per-vertex binary contact labels on a named topology, with optional
/// per-vertex probabilities (label = probability >= 0.5 when present).
struct ContactVector {
    std::string topology;
    std::vector<std::uint8_t> labels;
    std::vector<double> probabilities;  // empty unless produced by a predictor

    int size() const { return static_cast<int>(labels.size()); }
    bool has_probabilities() const { return !probabilities.empty(); }
    int count() const {
        int n = 0;
        for (auto l : labels) n += l ? 1 : 0;
        return n;
    }

    static ContactVector from_probabilities(std::string topology, std::vector<double> p);
    void validate() const;  // checks the 0.5 thresholding invariant
};

}  // namespace hsc::contact
