#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vdb/errors.hpp"

namespace vdb {

class GraphBuilder;

/// Simple undirected graph on at most 64 vertices.
///
/// Adjacency is one 64-bit row per vertex, so degrees are popcounts and
/// connectivity is a handful of word operations. Instances are immutable;
/// structural edits go through GraphBuilder and produce fresh values, which
/// makes graphs safe to share across threads by value or const reference.
class Graph {
public:
    static constexpr int max_vertices = 64;

    /// Single isolated vertex.
    Graph() = default;

    static Graph from_edge_list(int n, const std::vector<std::pair<int, int>>& edges);

    int vertex_count() const { return n_; }
    int edge_count() const { return m_; }

    bool has_edge(int u, int v) const {
        check_vertex(u);
        check_vertex(v);
        return rows_[u] >> v & 1u;
    }

    int degree(int v) const {
        check_vertex(v);
        return std::popcount(rows_[v]);
    }

    std::uint64_t row(int v) const {
        check_vertex(v);
        return rows_[v];
    }

    /// Edges as (min,max) pairs in lexicographic order.
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        out.reserve(static_cast<std::size_t>(m_));
        for (int u = 0; u < n_; ++u) {
            std::uint64_t later = rows_[u] & ~low_bits(u + 1);
            while (later) {
                int v = std::countr_zero(later);
                later &= later - 1;
                out.emplace_back(u, v);
            }
        }
        return out;
    }

    bool operator==(const Graph& other) const = default;

private:
    friend class GraphBuilder;

    static std::uint64_t low_bits(int k) {
        return k >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
    }

    void check_vertex(int v) const {
        if (v < 0 || v >= n_)
            fail(errc::index_out_of_range,
                 "vertex " + std::to_string(v) + " outside 0.." + std::to_string(n_ - 1));
    }

    int n_ = 1;
    int m_ = 0;
    std::array<std::uint64_t, max_vertices> rows_{};
};

/// Mutable edit buffer for Graph; validates every edit.
class GraphBuilder {
public:
    explicit GraphBuilder(int n) : n_(n) {
        if (n < 1 || n > Graph::max_vertices)
            fail(errc::index_out_of_range,
                 "vertex count must be in 1.." + std::to_string(Graph::max_vertices) +
                     ", got " + std::to_string(n));
    }

    explicit GraphBuilder(const Graph& g) : n_(g.n_), m_(g.m_), rows_(g.rows_) {}

    int vertex_count() const { return n_; }

    bool has_edge(int u, int v) const {
        check_vertex(u);
        check_vertex(v);
        return rows_[u] >> v & 1u;
    }

    GraphBuilder& add_edge(int u, int v) {
        check_vertex(u);
        check_vertex(v);
        if (u == v)
            fail(errc::self_loop, "loop at vertex " + std::to_string(u));
        if (rows_[u] >> v & 1u)
            fail(errc::duplicate_edge,
                 "edge {" + std::to_string(u) + "," + std::to_string(v) + "} already present");
        rows_[u] |= std::uint64_t{1} << v;
        rows_[v] |= std::uint64_t{1} << u;
        ++m_;
        return *this;
    }

    GraphBuilder& remove_edge(int u, int v) {
        check_vertex(u);
        check_vertex(v);
        if (!(rows_[u] >> v & 1u))
            fail(errc::domain_error,
                 "edge {" + std::to_string(u) + "," + std::to_string(v) + "} not present");
        rows_[u] &= ~(std::uint64_t{1} << v);
        rows_[v] &= ~(std::uint64_t{1} << u);
        --m_;
        return *this;
    }

    Graph build() const {
        Graph g;
        g.n_ = n_;
        g.m_ = m_;
        g.rows_ = rows_;
        return g;
    }

private:
    void check_vertex(int v) const {
        if (v < 0 || v >= n_)
            fail(errc::index_out_of_range,
                 "vertex " + std::to_string(v) + " outside 0.." + std::to_string(n_ - 1));
    }

    int n_;
    int m_ = 0;
    std::array<std::uint64_t, Graph::max_vertices> rows_{};
};

inline Graph Graph::from_edge_list(int n, const std::vector<std::pair<int, int>>& edges) {
    GraphBuilder b(n);
    for (auto [u, v] : edges) b.add_edge(u, v);
    return b.build();
}

inline bool is_connected(const Graph& g) {
    const int n = g.vertex_count();
    if (n == 1) return true;
    const std::uint64_t all = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    std::uint64_t visited = 1;
    std::uint64_t frontier = 1;
    while (frontier) {
        std::uint64_t next = 0;
        std::uint64_t f = frontier;
        while (f) {
            int v = std::countr_zero(f);
            f &= f - 1;
            next |= g.row(v);
        }
        frontier = next & ~visited;
        visited |= frontier;
    }
    return visited == all;
}

/// k = m - n + 1 for a connected graph.
inline int cyclomatic_number(const Graph& g) {
    if (!is_connected(g))
        fail(errc::not_connected, "cyclomatic number requires a connected graph");
    return g.edge_count() - g.vertex_count() + 1;
}

/// Vertex counts per degree: counts[i] = n_i, plus the degree extremes.
struct DegreeProfile {
    std::map<int, int> counts;
    int max_degree = 0;
    int min_degree = 0;

    int at(int degree) const {
        auto it = counts.find(degree);
        return it == counts.end() ? 0 : it->second;
    }

    bool operator==(const DegreeProfile&) const = default;
};

inline DegreeProfile degree_profile(const Graph& g) {
    DegreeProfile p;
    for (int v = 0; v < g.vertex_count(); ++v) ++p.counts[g.degree(v)];
    p.min_degree = p.counts.begin()->first;
    p.max_degree = p.counts.rbegin()->first;
    return p;
}

/// Edge counts per unordered degree pair: counts[{i,j}] = m_{i,j} with i <= j.
struct EdgeClassCounts {
    std::map<std::pair<int, int>, int> counts;

    int at(int i, int j) const {
        if (i > j) std::swap(i, j);
        auto it = counts.find({i, j});
        return it == counts.end() ? 0 : it->second;
    }

    int total() const {
        int t = 0;
        for (const auto& [cls, c] : counts) t += c;
        return t;
    }

    bool operator==(const EdgeClassCounts&) const = default;
};

inline EdgeClassCounts edge_class_counts(const Graph& g) {
    EdgeClassCounts ec;
    for (auto [u, v] : g.edges()) {
        int du = g.degree(u), dv = g.degree(v);
        if (du > dv) std::swap(du, dv);
        ++ec.counts[{du, dv}];
    }
    return ec;
}

inline bool is_chemical(const Graph& g) {
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.degree(v) > 4) return false;
    return true;
}

/// Two-edge rewiring {ux, vy} -> {uy, vx} on four distinct vertices.
struct SwapMove {
    int u, x, v, y;
};

struct SwapCheck {
    enum class Reason {
        valid,
        vertices_not_distinct,
        not_edge,
        already_edge,
        degree_order_violated,
        disconnects,
    };

    Reason reason = Reason::valid;

    bool valid() const { return reason == Reason::valid; }

    static const char* reason_name(Reason r) {
        switch (r) {
            case Reason::valid:                 return "valid";
            case Reason::vertices_not_distinct: return "vertices_not_distinct";
            case Reason::not_edge:              return "not_edge";
            case Reason::already_edge:          return "already_edge";
            case Reason::degree_order_violated: return "degree_order_violated";
            case Reason::disconnects:           return "disconnects";
        }
        return "unknown";
    }
};

namespace detail {

inline Graph swapped(const Graph& g, const SwapMove& s) {
    GraphBuilder b(g);
    b.remove_edge(s.u, s.x);
    b.remove_edge(s.v, s.y);
    b.add_edge(s.u, s.y);
    b.add_edge(s.v, s.x);
    return b.build();
}

}  // namespace detail

/// Checks, in order: distinctness, that ux and vy are edges, that uy and vx
/// are not, the degree ordering d_u >= d_v and d_y >= d_x, and finally that
/// the rewired graph stays connected. The first failed check is reported.
inline SwapCheck validate_swap(const Graph& g, const SwapMove& s) {
    using R = SwapCheck::Reason;
    if (s.u == s.x || s.u == s.v || s.u == s.y || s.x == s.v || s.x == s.y || s.v == s.y)
        return {R::vertices_not_distinct};
    if (!g.has_edge(s.u, s.x) || !g.has_edge(s.v, s.y)) return {R::not_edge};
    if (g.has_edge(s.u, s.y) || g.has_edge(s.v, s.x)) return {R::already_edge};
    if (g.degree(s.u) < g.degree(s.v) || g.degree(s.y) < g.degree(s.x))
        return {R::degree_order_violated};
    if (!is_connected(detail::swapped(g, s))) return {R::disconnects};
    return {R::valid};
}

/// Applies a validated move; every vertex keeps its degree, so n, m and the
/// cyclomatic number are untouched.
inline Graph apply_swap(const Graph& g, const SwapMove& s) {
    SwapCheck check = validate_swap(g, s);
    if (!check.valid())
        fail(errc::invalid_move, SwapCheck::reason_name(check.reason));
    return detail::swapped(g, s);
}

}  // namespace vdb
