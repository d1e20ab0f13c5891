#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "vdb/errors.hpp"
#include "vdb/graph.hpp"
#include "vdb/weights.hpp"

namespace vdb {

/// Builds one minimum-family member for k >= 3, n >= 5(k-1): a cubic
/// Moebius ladder on 2(k-1) vertices (a cycle plus its k-1 diameters; K4
/// when k = 3) with one diameter replaced by a path through the n-2k+2
/// remaining vertices. The result is connected with n vertices, n+k-1
/// edges, degree set {2,3} and edge classes
/// (m22, m23, m33) = (n-2k+1, 2, 3k-4).
inline Graph construct_minimizer(int n, int k) {
    if (k < 3 || n < 5 * (k - 1))
        fail(errc::hypothesis_violated,
             "construction requires k >= 3 and n >= 5(k-1); got n = " + std::to_string(n) +
                 ", k = " + std::to_string(k));
    if (n > Graph::max_vertices)
        fail(errc::cap_exceeded, "n exceeds " + std::to_string(Graph::max_vertices));

    const int ladder = 2 * (k - 1);
    GraphBuilder b(n);
    for (int i = 0; i < ladder; ++i) b.add_edge(i, (i + 1) % ladder);
    for (int i = 1; i <= k - 2; ++i) b.add_edge(i, i + k - 1);  // diameters, minus i = 0

    // path 0 .. ladder, ladder+1, ..., n-1 .. k-1 closing the removed diameter
    b.add_edge(0, ladder);
    for (int v = ladder; v + 1 < n; ++v) b.add_edge(v, v + 1);
    b.add_edge(n - 1, k - 1);
    return b.build();
}

/// Structural facts a minimum graph must satisfy, as checkable predicates.
struct ExtremalCertificate {
    int n = 0;
    int k = 0;
    bool degree_set_ok = false;  // degree set equals {2,3}
    int m22 = 0, m23 = 0, m33 = 0;
    bool counts_ok = false;  // (m22, m23, m33) = (n-2k+1, 2, 3k-4), nothing else
    bool connected_ok = false;
    bool chemical_ok = false;
    bool hypotheses_ok = false;  // k >= 3 and n >= 5(k-1)
    std::map<std::string, bool> ti_matches_closed_form;

    bool pass() const {
        if (!(degree_set_ok && counts_ok && connected_ok && chemical_ok && hypotheses_ok))
            return false;
        for (const auto& [_, ok] : ti_matches_closed_form)
            if (!ok) return false;
        return true;
    }
};

inline ExtremalCertificate check_certificate(const Graph& g,
                                             const std::vector<WeightFunction>& weights) {
    if (!is_connected(g)) fail(errc::not_connected, "certificate requires a connected graph");

    ExtremalCertificate cert;
    cert.n = g.vertex_count();
    cert.k = cyclomatic_number(g);
    cert.connected_ok = true;
    cert.chemical_ok = is_chemical(g);
    cert.hypotheses_ok = cert.k >= 3 && cert.n >= 5 * (cert.k - 1);

    DegreeProfile prof = degree_profile(g);
    cert.degree_set_ok = prof.counts.size() == 2 && prof.counts.count(2) == 1 &&
                         prof.counts.count(3) == 1;

    EdgeClassCounts classes = edge_class_counts(g);
    cert.m22 = classes.at(2, 2);
    cert.m23 = classes.at(2, 3);
    cert.m33 = classes.at(3, 3);
    cert.counts_ok = cert.m23 == 2 && cert.m22 == cert.n - 2 * cert.k + 1 &&
                     cert.m33 == 3 * cert.k - 4 &&
                     cert.m22 + cert.m23 + cert.m33 == g.edge_count();

    for (const auto& w : weights) {
        bool ok = false;
        if (cert.hypotheses_ok) {
            double ti = compute_ti(g, w).value;
            double closed = closed_form_min(cert.n, cert.k, w);
            ok = std::abs(ti - closed) <= 1e-9 * std::max(1.0, std::abs(closed));
        }
        cert.ti_matches_closed_form[w.name()] = ok;
    }
    return cert;
}

/// TI(G*) - TI(G) for a valid move, from the four incident terms only
/// (degrees are unchanged by the move, so the rest of the sum cancels).
inline double swap_delta(const Graph& g, const SwapMove& s, const WeightFunction& w) {
    SwapCheck check = validate_swap(g, s);
    if (!check.valid()) fail(errc::invalid_move, SwapCheck::reason_name(check.reason));
    double du = g.degree(s.u), dx = g.degree(s.x);
    double dv = g.degree(s.v), dy = g.degree(s.y);
    return (w.eval(du, dy) + w.eval(dv, dx)) - (w.eval(du, dx) + w.eval(dv, dy));
}

struct DescentStep {
    int step = 0;
    SwapMove move{};
    double delta = 0.0;
    double ti = 0.0;  // index value after the move
};

struct DescentResult {
    Graph final_graph;
    double initial_ti = 0.0;
    std::vector<DescentStep> steps;

    double final_ti() const { return steps.empty() ? initial_ti : steps.back().ti; }
};

enum class TieBreak { lexicographic };

struct DescentOptions {
    double improvement_eps = 1e-9;
    TieBreak tie_break = TieBreak::lexicographic;
    std::uint64_t max_steps = 1u << 20;
};

/// Steepest-descent rewiring: at every step applies the valid move with the
/// most negative swap_delta (ties broken lexicographically on (u,x,v,y)),
/// stopping when no valid move improves by more than improvement_eps.
inline DescentResult greedy_descent(const Graph& start, const WeightFunction& w,
                                    const DescentOptions& opt = {}) {
    if (!is_connected(start)) fail(errc::not_connected, "descent requires a connected start");

    DescentResult out{start, compute_ti(start, w).value, {}};
    Graph g = start;

    struct Candidate {
        double delta;
        SwapMove move;
    };

    for (std::uint64_t step = 0; step < opt.max_steps; ++step) {
        const auto edges = g.edges();
        std::vector<Candidate> candidates;

        for (const auto& e1 : edges) {
            for (const auto& e2 : edges) {
                if (e1 == e2) continue;
                const int ends1[2] = {e1.first, e1.second};
                const int ends2[2] = {e2.first, e2.second};
                for (int o1 = 0; o1 < 2; ++o1) {
                    for (int o2 = 0; o2 < 2; ++o2) {
                        SwapMove s{ends1[o1], ends1[1 - o1], ends2[o2], ends2[1 - o2]};
                        if (s.u == s.v || s.u == s.y || s.x == s.v || s.x == s.y) continue;
                        if (g.has_edge(s.u, s.y) || g.has_edge(s.v, s.x)) continue;
                        if (g.degree(s.u) < g.degree(s.v) ||
                            g.degree(s.y) < g.degree(s.x))
                            continue;
                        double du = g.degree(s.u), dx = g.degree(s.x);
                        double dv = g.degree(s.v), dy = g.degree(s.y);
                        double delta = (w.eval(du, dy) + w.eval(dv, dx)) -
                                       (w.eval(du, dx) + w.eval(dv, dy));
                        if (delta < -opt.improvement_eps) candidates.push_back({delta, s});
                    }
                }
            }
        }

        std::sort(candidates.begin(), candidates.end(),
                  [](const Candidate& a, const Candidate& b) {
                      if (a.delta != b.delta) return a.delta < b.delta;
                      auto ka = std::array<int, 4>{a.move.u, a.move.x, a.move.v, a.move.y};
                      auto kb = std::array<int, 4>{b.move.u, b.move.x, b.move.v, b.move.y};
                      return ka < kb;
                  });

        // steepest valid move: connectivity is the expensive check, so it
        // runs lazily down the sorted list
        bool moved = false;
        for (const Candidate& c : candidates) {
            Graph h = detail::swapped(g, c.move);
            if (!is_connected(h)) continue;
            g = h;
            out.steps.push_back({static_cast<int>(step), c.move, c.delta,
                                 compute_ti(g, w).value});
            moved = true;
            break;
        }
        if (!moved) break;
    }
    out.final_graph = g;
    return out;
}

/// Random connected graph with n vertices and n+k-1 edges: a uniform Pruefer
/// tree plus k distinct extra non-edges by rejection. Not exactly uniform
/// over connected graphs; descent only needs diverse starts.
inline Graph random_k_cyclic(int n, int k, std::uint64_t seed, bool chemical) {
    if (n < 3) fail(errc::infeasible, "need n >= 3");
    if (k < 0) fail(errc::infeasible, "need k >= 0");
    const long m = static_cast<long>(n) + k - 1;
    if (n > Graph::max_vertices)
        fail(errc::cap_exceeded, "n exceeds " + std::to_string(Graph::max_vertices));
    if (m > static_cast<long>(n) * (n - 1) / 2)
        fail(errc::infeasible, "m = n+k-1 = " + std::to_string(m) +
                                   " exceeds the simple-graph capacity of n = " +
                                   std::to_string(n));
    if (chemical && 2 * m > 4L * n)
        fail(errc::infeasible, "no chemical graph: 2(n+k-1) > 4n");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> vertex(0, n - 1);

    for (int attempt = 0; attempt < 1000; ++attempt) {
        // decode a uniform Pruefer sequence into a labeled tree
        std::vector<int> pruefer(static_cast<std::size_t>(n - 2));
        for (int& p : pruefer) p = vertex(rng);
        std::vector<int> deg(static_cast<std::size_t>(n), 1);
        for (int p : pruefer) ++deg[static_cast<std::size_t>(p)];

        GraphBuilder b(n);
        std::vector<bool> used(static_cast<std::size_t>(n), false);
        for (int p : pruefer) {
            for (int leaf = 0; leaf < n; ++leaf) {
                if (deg[static_cast<std::size_t>(leaf)] == 1 &&
                    !used[static_cast<std::size_t>(leaf)]) {
                    b.add_edge(leaf, p);
                    used[static_cast<std::size_t>(leaf)] = true;
                    --deg[static_cast<std::size_t>(p)];
                    break;
                }
            }
        }
        int last1 = -1, last2 = -1;
        for (int v = 0; v < n; ++v)
            if (deg[static_cast<std::size_t>(v)] == 1 && !used[static_cast<std::size_t>(v)]) {
                if (last1 < 0)
                    last1 = v;
                else
                    last2 = v;
            }
        b.add_edge(last1, last2);

        // k extra edges, uniform over current non-edges via rejection
        bool stuck = false;
        for (int added = 0; added < k && !stuck; ++added) {
            int tries = 0;
            for (;; ++tries) {
                if (tries > 100000) {
                    stuck = true;
                    break;
                }
                int u = vertex(rng), v = vertex(rng);
                if (u == v || b.has_edge(u, v)) continue;
                b.add_edge(u, v);
                break;
            }
        }
        if (stuck) continue;

        Graph g = b.build();
        if (chemical && !is_chemical(g)) continue;
        return g;
    }
    fail(errc::retries_exhausted, "no admissible graph after 1000 attempts");
}

// -- JSON serialization --------------------------------------------------

inline void to_json(nlohmann::json& j, const ExtremalCertificate& c) {
    j = {{"n", c.n},
         {"k", c.k},
         {"degree_set_ok", c.degree_set_ok},
         {"m22", c.m22},
         {"m23", c.m23},
         {"m33", c.m33},
         {"counts_ok", c.counts_ok},
         {"connected_ok", c.connected_ok},
         {"chemical_ok", c.chemical_ok},
         {"hypotheses_ok", c.hypotheses_ok},
         {"ti_matches_closed_form", c.ti_matches_closed_form},
         {"pass", c.pass()}};
}

inline void to_json(nlohmann::json& j, const DescentStep& s) {
    j = {{"step", s.step},
         {"move", {s.move.u, s.move.x, s.move.v, s.move.y}},
         {"delta", s.delta},
         {"ti", s.ti}};
}

}  // namespace vdb
