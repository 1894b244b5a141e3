#include <doctest.h>

#include <set>

#include "dualdec/errors.hpp"
#include "dualdec/graph.hpp"
#include "dualdec/rng.hpp"

using namespace dualdec;

namespace {

void check_well_formed(const Graph& g) {
    for (auto [i, j] : g.edges) {
        CHECK(i < j);
        CHECK(i >= 0);
        CHECK(j < g.n);
    }
    // Symmetry: j in N_i iff i in N_j.
    for (int i = 0; i < g.n; ++i)
        for (int j : g.adjacency[i]) {
            CHECK(j != i);
            CHECK(g.neighbor_pos(j, i) >= 0);
        }
    std::set<std::pair<int, int>> uniq(g.edges.begin(), g.edges.end());
    CHECK(uniq.size() == g.edges.size());
}

}  // namespace

TEST_CASE("complete and ring match their definitions") {
    Graph k3 = complete(3);
    CHECK(k3.edges == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}});
    check_well_formed(k3);

    Graph r4 = ring(4);
    CHECK(r4.edges == std::vector<std::pair<int, int>>{{0, 1}, {0, 3}, {1, 2}, {2, 3}});
    check_well_formed(r4);
    CHECK(is_connected(r4));

    CHECK_THROWS_AS(ring(2), InvalidSize);
    CHECK_THROWS_AS(complete(1), InvalidSize);
}

TEST_CASE("is_connected") {
    CHECK(is_connected(make_graph(3, {{0, 1}, {1, 2}})));
    CHECK_FALSE(is_connected(make_graph(4, {{0, 1}, {2, 3}})));
    CHECK(is_connected(make_graph(1, {})));
    CHECK_FALSE(is_connected(make_graph(2, {})));
}

TEST_CASE("make_graph rejects malformed input") {
    CHECK_THROWS_AS(make_graph(3, {{0, 0}}), InvalidSize);
    CHECK_THROWS_AS(make_graph(3, {{0, 5}}), InvalidSize);
    // Duplicates (either orientation) collapse.
    Graph g = make_graph(3, {{0, 1}, {1, 0}, {0, 1}});
    CHECK(g.edge_count() == 1);
}

TEST_CASE("erdos_renyi basics") {
    // p = 1 forces the single edge on two nodes.
    Graph g2 = erdos_renyi(2, 1.0, 7);
    CHECK(g2.edges == std::vector<std::pair<int, int>>{{0, 1}});

    // p = 0 can never connect.
    CHECK_THROWS_AS(erdos_renyi(5, 0.0, 3, 50), ConnectivityFailure);

    // The benchmark topology: connected by construction, well-formed.
    int retries = -1;
    Graph g = erdos_renyi(20, 0.2, 12345, 1000, &retries);
    CHECK(g.n == 20);
    CHECK(is_connected(g));
    CHECK(retries >= 0);
    check_well_formed(g);
}

TEST_CASE("erdos_renyi is deterministic in the seed") {
    Graph a = erdos_renyi(20, 0.2, 99);
    Graph b = erdos_renyi(20, 0.2, 99);
    Graph c = erdos_renyi(20, 0.2, 100);
    CHECK(a.edges == b.edges);
    CHECK(a.edges != c.edges);  // overwhelmingly likely for distinct seeds
}

TEST_CASE("directed edge index is a bijection onto [0, 2|E|)") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 10);
        Graph g;
        try {
            g = erdos_renyi(n, 0.5, rng.next_u64(), 200);
        } catch (const ConnectivityFailure&) {
            continue;
        }
        DirectedEdgeIndex idx(g);
        CHECK(idx.count() == 2 * g.edge_count());
        std::set<int> seen;
        for (auto [i, j] : g.edges) {
            const int ij = idx.index(i, j);
            const int ji = idx.index(j, i);
            CHECK(ij != ji);
            seen.insert(ij);
            seen.insert(ji);
            CHECK(idx.pairs()[ij] == std::pair<int, int>{i, j});
            CHECK(idx.pairs()[ji] == std::pair<int, int>{j, i});
        }
        CHECK(static_cast<int>(seen.size()) == idx.count());
        CHECK(*seen.begin() == 0);
        CHECK(*seen.rbegin() == idx.count() - 1);
    }
    CHECK_THROWS_AS(DirectedEdgeIndex(complete(3)).index(0, 0), InvalidSize);
}

TEST_CASE("edge list round trip, 1-based") {
    Graph g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    const std::string text = to_edge_list(g);
    CHECK(text == "1 2\n1 4\n2 3\n3 4\n");
    Graph back = graph_from_edge_list(text, 4);
    CHECK(back.edges == g.edges);

    CHECK_THROWS_AS(graph_from_edge_list("1 5\n", 4), InvalidSize);
    CHECK_THROWS_AS(graph_from_edge_list("1\n", 4), InvalidSize);
    CHECK_THROWS_AS(graph_from_edge_list("1 2 3\n", 4), InvalidSize);
}
