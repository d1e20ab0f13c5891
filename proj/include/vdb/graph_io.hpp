#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>

#include "vdb/graph.hpp"

namespace vdb {

// graph6: printable encoding of a simple undirected graph. A size header
// N(n) is followed by the upper-triangle adjacency bits x(0,1), x(0,2),
// x(1,2), x(0,3), ... packed big-endian into 6-bit groups, each group +63.
// Unused bits of the last group must be zero.

inline std::string encode_graph6(const Graph& g) {
    const int n = g.vertex_count();
    std::string out;
    if (n <= 62) {
        out.push_back(static_cast<char>(63 + n));
    } else {
        // 3-group header for 63 <= n <= 258047
        out.push_back(126);
        out.push_back(static_cast<char>(63 + (n >> 12 & 63)));
        out.push_back(static_cast<char>(63 + (n >> 6 & 63)));
        out.push_back(static_cast<char>(63 + (n & 63)));
    }
    int group = 0;
    int bits = 0;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            group = group << 1 | (g.has_edge(i, j) ? 1 : 0);
            if (++bits == 6) {
                out.push_back(static_cast<char>(63 + group));
                group = 0;
                bits = 0;
            }
        }
    }
    if (bits > 0) out.push_back(static_cast<char>(63 + (group << (6 - bits))));
    return out;
}

inline Graph decode_graph6(std::string_view text) {
    // tolerate one trailing newline, as produced by line-oriented files
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r'))
        text.remove_suffix(1);
    if (text.empty()) fail(errc::malformed_header, "empty graph6 string");
    for (char c : text)
        if (c < 63 || c > 126)
            fail(errc::malformed_header,
                 "byte " + std::to_string(static_cast<int>(static_cast<unsigned char>(c))) +
                     " outside graph6 alphabet");

    std::size_t pos = 0;
    long n = 0;
    if (text[0] != 126) {
        n = text[0] - 63;
        pos = 1;
    } else {
        if (text.size() >= 2 && text[1] == 126)
            fail(errc::cap_exceeded, "8-group size header implies n > 64");
        if (text.size() < 4) fail(errc::malformed_header, "truncated size header");
        n = (long(text[1] - 63) << 12) | (long(text[2] - 63) << 6) | long(text[3] - 63);
        pos = 4;
    }
    if (n == 0) fail(errc::cap_exceeded, "graph on 0 vertices is not representable here");
    if (n > Graph::max_vertices)
        fail(errc::cap_exceeded,
             "n = " + std::to_string(n) + " exceeds the supported " +
                 std::to_string(Graph::max_vertices));

    const long nbits = n * (n - 1) / 2;
    const std::size_t body = static_cast<std::size_t>((nbits + 5) / 6);
    if (text.size() - pos < body) fail(errc::malformed_header, "truncated adjacency bits");
    if (text.size() - pos > body) fail(errc::trailing_garbage, "bytes beyond adjacency bits");

    GraphBuilder b(static_cast<int>(n));
    long i = 0, j = 1;
    for (std::size_t t = 0; t < body; ++t) {
        int group = text[pos + t] - 63;
        for (int s = 5; s >= 0; --s) {
            if (j >= n) {
                if (group >> s & 1)
                    fail(errc::non_canonical_padding, "nonzero padding bit");
                continue;
            }
            if (group >> s & 1) b.add_edge(static_cast<int>(i), static_cast<int>(j));
            if (++i == j) {
                i = 0;
                ++j;
            }
        }
    }
    return b.build();
}

// Plain text edge list: first line "n m", then m lines "a b" (0-based).

inline std::string to_edge_list_text(const Graph& g) {
    std::ostringstream out;
    out << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
    return out.str();
}

inline Graph parse_edge_list_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    long n = 0, m = 0;
    if (!(in >> n >> m)) fail(errc::parse_error, "expected header line \"n m\"");
    if (n < 1 || n > Graph::max_vertices)
        fail(errc::parse_error, "vertex count " + std::to_string(n) + " outside 1..64");
    if (m < 0) fail(errc::parse_error, "negative edge count");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long i = 0; i < m; ++i) {
        long a = 0, b = 0;
        if (!(in >> a >> b))
            fail(errc::parse_error, "expected " + std::to_string(m) + " edge lines, got " +
                                        std::to_string(i));
        edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
    std::string rest;
    if (in >> rest) fail(errc::parse_error, "unexpected trailing token \"" + rest + "\"");
    return Graph::from_edge_list(static_cast<int>(n), edges);
}

}  // namespace vdb
