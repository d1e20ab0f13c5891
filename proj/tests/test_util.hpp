#pragma once

#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "vdb/graph.hpp"

namespace testutil {

inline vdb::Graph random_graph(std::mt19937_64& rng, int n, double p = 0.3) {
    vdb::GraphBuilder b(n);
    std::bernoulli_distribution coin(p);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng)) b.add_edge(u, v);
    return b.build();
}

/// Random spanning tree plus coin-flip extra edges; always connected.
inline vdb::Graph random_connected_graph(std::mt19937_64& rng, int n, double extra_p = 0.15) {
    vdb::GraphBuilder b(n);
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> parent(0, v - 1);
        b.add_edge(parent(rng), v);
    }
    std::bernoulli_distribution coin(extra_p);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (!b.has_edge(u, v) && coin(rng)) b.add_edge(u, v);
    return b.build();
}

inline vdb::Graph relabeled(const vdb::Graph& g, const std::vector<int>& perm) {
    vdb::GraphBuilder b(g.vertex_count());
    for (auto [u, v] : g.edges()) b.add_edge(perm[u], perm[v]);
    return b.build();
}

inline std::vector<int> random_permutation(std::mt19937_64& rng, int n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    return perm;
}

/// Two triangles {0,1,2} and {3,4,5} joined by the paths 2-6-3 and 0-7-5.
/// Connected, n = 8, m = 10, k = 3, degree set {2,3}; the swap
/// (u,x,v,y) = (2,6,7,5) trades two (2,3)-edges for a (3,3) and a (2,2)
/// edge while keeping the graph connected.
inline vdb::Graph two_triangle_fixture() {
    return vdb::Graph::from_edge_list(
        8, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {2, 6}, {6, 3}, {0, 7}, {7, 5}});
}

}  // namespace testutil
