#include <doctest.h>

#include <random>

#include "test_util.hpp"
#include "vdb/graph.hpp"

using namespace vdb;

namespace {

Graph c4() { return Graph::from_edge_list(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}); }

Graph k4() {
    return Graph::from_edge_list(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
}

Graph star(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < n; ++v) edges.emplace_back(0, v);
    return Graph::from_edge_list(n, edges);
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("from_edge_list builds C4") {
    Graph g = c4();
    CHECK(g.vertex_count() == 4);
    CHECK(g.edge_count() == 4);
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(1, 0));
    CHECK(!g.has_edge(0, 2));
    CHECK(g.edges() == std::vector<std::pair<int, int>>{{0, 1}, {0, 3}, {1, 2}, {2, 3}});
}

TEST_CASE("from_edge_list degenerate and error cases") {
    Graph single = Graph::from_edge_list(1, {});
    CHECK(single.vertex_count() == 1);
    CHECK(single.edge_count() == 0);

    CHECK_THROWS_WITH_AS(Graph::from_edge_list(4, {{0, 0}}), doctest::Contains("self_loop"),
                         error);
    CHECK_THROWS_WITH_AS(Graph::from_edge_list(4, {{0, 1}, {1, 0}}),
                         doctest::Contains("duplicate_edge"), error);
    CHECK_THROWS_WITH_AS(Graph::from_edge_list(4, {{0, 4}}),
                         doctest::Contains("index_out_of_range"), error);
    CHECK_THROWS_AS(Graph::from_edge_list(0, {}), error);
    CHECK_THROWS_AS(Graph::from_edge_list(65, {}), error);
}

TEST_CASE("is_connected") {
    CHECK(is_connected(c4()));
    CHECK(is_connected(k4()));
    CHECK(is_connected(Graph::from_edge_list(1, {})));
    CHECK(!is_connected(Graph::from_edge_list(4, {{0, 1}, {2, 3}})));
    CHECK(!is_connected(Graph::from_edge_list(2, {})));
}

TEST_CASE("cyclomatic_number") {
    CHECK(cyclomatic_number(c4()) == 1);
    CHECK(cyclomatic_number(k4()) == 3);
    CHECK(cyclomatic_number(Graph::from_edge_list(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}})) == 0);
    CHECK_THROWS_WITH_AS(cyclomatic_number(Graph::from_edge_list(4, {{0, 1}, {2, 3}})),
                         doctest::Contains("not_connected"), error);
}

TEST_CASE("degree_profile fixtures") {
    DegreeProfile pk4 = degree_profile(k4());
    CHECK(pk4.counts == std::map<int, int>{{3, 4}});
    CHECK(pk4.max_degree == 3);
    CHECK(pk4.min_degree == 3);

    DegreeProfile ps = degree_profile(star(5));
    CHECK(ps.counts == std::map<int, int>{{1, 4}, {4, 1}});
    CHECK(ps.max_degree == 4);
    CHECK(ps.min_degree == 1);
}

TEST_CASE("edge_class_counts fixtures") {
    CHECK(edge_class_counts(c4()).counts ==
          std::map<std::pair<int, int>, int>{{{2, 2}, 4}});
    CHECK(edge_class_counts(Graph::from_edge_list(3, {{0, 1}, {1, 2}})).counts ==
          std::map<std::pair<int, int>, int>{{{1, 2}, 2}});
}

TEST_CASE("counting identities on random graphs") {
    std::mt19937_64 rng(20240801);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + static_cast<int>(rng() % 16);
        Graph g = testutil::random_graph(rng, n, 0.35);
        DegreeProfile prof = degree_profile(g);
        EdgeClassCounts classes = edge_class_counts(g);

        int vertex_total = 0, degree_total = 0;
        for (auto [d, cnt] : prof.counts) {
            vertex_total += cnt;
            degree_total += d * cnt;
        }
        CHECK(vertex_total == g.vertex_count());
        CHECK(degree_total == 2 * g.edge_count());
        CHECK(classes.total() == g.edge_count());

        // sum_{j != i} m_{i,j} + 2 m_{i,i} = i * n_i for every degree i
        for (auto [i, ni] : prof.counts) {
            int incidences = 2 * classes.at(i, i);
            for (auto [j, nj] : prof.counts)
                if (j != i) incidences += classes.at(i, j);
            CHECK(incidences == i * ni);
        }
    }
}

TEST_CASE("is_chemical") {
    CHECK(is_chemical(k4()));
    CHECK(!is_chemical(star(6)));
    CHECK(is_chemical(star(5)));
}

TEST_CASE("validate_swap reasons") {
    Graph g = testutil::two_triangle_fixture();

    CHECK(validate_swap(g, {2, 6, 7, 5}).valid());

    CHECK(validate_swap(g, {2, 2, 7, 5}).reason ==
          SwapCheck::Reason::vertices_not_distinct);
    CHECK(validate_swap(g, {2, 4, 7, 5}).reason == SwapCheck::Reason::not_edge);

    // C4: the would-be edge uy = {0,3} already exists
    CHECK(validate_swap(c4(), {0, 1, 2, 3}).reason == SwapCheck::Reason::already_edge);

    // orient the move so d_u < d_v: u = 6 (deg 2), v = 0 (deg 3)
    CHECK(validate_swap(g, {6, 3, 0, 7}).reason ==
          SwapCheck::Reason::degree_order_violated);

    // C6: removing two opposite edges and re-linking splits into two triangles
    Graph c6 = Graph::from_edge_list(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
    CHECK(validate_swap(c6, {0, 1, 3, 4}).reason == SwapCheck::Reason::disconnects);

    CHECK_THROWS_WITH_AS(validate_swap(g, {0, 1, 2, 99}),
                         doctest::Contains("index_out_of_range"), error);
}

TEST_CASE("apply_swap preserves structure and shifts edge classes") {
    Graph g = testutil::two_triangle_fixture();
    EdgeClassCounts before = edge_class_counts(g);
    SwapMove move{2, 6, 7, 5};

    Graph h = apply_swap(g, move);
    CHECK(h.vertex_count() == g.vertex_count());
    CHECK(h.edge_count() == g.edge_count());
    CHECK(is_connected(h));
    CHECK(cyclomatic_number(h) == cyclomatic_number(g));
    for (int v = 0; v < g.vertex_count(); ++v) CHECK(h.degree(v) == g.degree(v));

    // two (2,3)-edges became one (2,2) and one (3,3)
    EdgeClassCounts after = edge_class_counts(h);
    CHECK(after.at(2, 3) == before.at(2, 3) - 2);
    CHECK(after.at(2, 2) == before.at(2, 2) + 1);
    CHECK(after.at(3, 3) == before.at(3, 3) + 1);

    // a strict-descent move cannot be undone: no orientation of the inverse
    // satisfies the degree ordering
    CHECK(validate_swap(h, {move.u, move.y, move.v, move.x}).reason ==
          SwapCheck::Reason::degree_order_violated);

    CHECK_THROWS_WITH_AS(apply_swap(g, {2, 4, 7, 5}), doctest::Contains("invalid_move"),
                         error);
}

TEST_CASE("equal-degree swaps are involutions") {
    Graph g = testutil::two_triangle_fixture();
    SwapMove move{1, 2, 4, 3};  // d_u = d_v = 2 and d_y = d_x = 3
    REQUIRE(validate_swap(g, move).valid());
    Graph h = apply_swap(g, move);
    CHECK(h != g);
    Graph back = apply_swap(h, {move.u, move.y, move.v, move.x});
    CHECK(back == g);
}

TEST_CASE("valid swaps keep connectivity on random graphs") {
    std::mt19937_64 rng(987654);
    int checked = 0;
    for (int trial = 0; trial < 400 && checked < 60; ++trial) {
        Graph g = testutil::random_connected_graph(rng, 8, 0.2);
        std::uniform_int_distribution<int> pick(0, 7);
        SwapMove s{pick(rng), pick(rng), pick(rng), pick(rng)};
        if (!validate_swap(g, s).valid()) continue;
        ++checked;
        Graph h = apply_swap(g, s);
        CHECK(is_connected(h));
        CHECK(h.edge_count() == g.edge_count());
    }
    CHECK(checked > 0);
}

}  // TEST_SUITE
