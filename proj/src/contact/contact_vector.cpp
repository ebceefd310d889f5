#include "hsc/contact/contact_vector.hpp"

#include <stdexcept>

namespace hsc::contact {

ContactVector ContactVector::from_probabilities(std::string topology, std::vector<double> p) {
    ContactVector out;
    out.topology = std::move(topology);
    out.labels.resize(p.size());
    for (size_t i = 0; i < p.size(); ++i) out.labels[i] = p[i] >= 0.5 ? 1 : 0;
    out.probabilities = std::move(p);
    return out;
}

void ContactVector::validate() const {
    if (!probabilities.empty()) {
        if (probabilities.size() != labels.size())
            throw std::runtime_error("contact vector: probability/label size mismatch");
        for (size_t i = 0; i < labels.size(); ++i) {
            if (probabilities[i] < 0.0 || probabilities[i] > 1.0)
                throw std::runtime_error("contact vector: probability out of [0,1]");
            if ((probabilities[i] >= 0.5) != (labels[i] != 0))
                throw std::runtime_error("contact vector: label disagrees with 0.5 threshold");
        }
    }
    for (auto l : labels)
        if (l != 0 && l != 1) throw std::runtime_error("contact vector: label not in {0,1}");
}

}  // namespace hsc::contact
