#include "hsc/geometry/geodesic.hpp"

#include <limits>
#include <queue>
#include <stdexcept>

namespace hsc::geometry {

std::vector<double> geodesic_distances(const Mesh& mesh, const std::vector<int>& sources) {
    if (sources.empty()) throw std::runtime_error("no sources");
    mesh.validate_indices();
    const int nv = mesh.vertex_count();

    // Adjacency in CSR form from face edges (both directions; duplicates
    // from shared edges are harmless for Dijkstra).
    std::vector<int> degree(nv, 0);
    for (const auto& tri : mesh.faces)
        for (int k = 0; k < 3; ++k) {
            ++degree[tri[k]];
            ++degree[tri[(k + 1) % 3]];
        }
    std::vector<int> offset(nv + 1, 0);
    for (int v = 0; v < nv; ++v) offset[v + 1] = offset[v] + degree[v];
    std::vector<int> neighbor(offset[nv]);
    std::vector<double> length(offset[nv]);
    std::vector<int> cursor(offset.begin(), offset.end() - 1);
    for (const auto& tri : mesh.faces)
        for (int k = 0; k < 3; ++k) {
            int u = tri[k], v = tri[(k + 1) % 3];
            double len = (mesh.vertices[u] - mesh.vertices[v]).norm();
            neighbor[cursor[u]] = v;
            length[cursor[u]++] = len;
            neighbor[cursor[v]] = u;
            length[cursor[v]++] = len;
        }

    std::vector<double> dist(nv, std::numeric_limits<double>::infinity());
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
    for (int s : sources) {
        if (s < 0 || s >= nv) throw std::runtime_error("geodesic source index out of range");
        dist[s] = 0.0;
        queue.push({0.0, s});
    }

    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (d > dist[u]) continue;
        for (int i = offset[u]; i < offset[u + 1]; ++i) {
            int v = neighbor[i];
            double nd = d + length[i];
            if (nd < dist[v]) {
                dist[v] = nd;
                queue.push({nd, v});
            }
        }
    }
    return dist;
}

}  // namespace hsc::geometry
