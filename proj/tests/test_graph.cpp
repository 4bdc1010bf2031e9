#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "geonet/graph.hpp"
#include "geonet/graph_metrics.hpp"
#include "test_util.hpp"

using namespace geonet;

namespace {

// Independent reference metrics computed straight from the definitions, no
// shared code with the library: Floyd-Warshall distances and direct
// neighbour-pair triangle counting.
struct BruteMetrics {
    double clustering = 0.0;
    double avg_path = 0.0;
    std::uint64_t reachable_pairs = 0;
};

BruteMetrics brute_metrics(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (const auto& [u, v] : g.edges()) {
        std::size_t iu = g.node_index(u), iv = g.node_index(v);
        adj[iu][iv] = adj[iv][iu] = true;
    }

    BruteMetrics out;

    double csum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> nb;
        for (std::size_t j = 0; j < n; ++j)
            if (adj[i][j]) nb.push_back(j);
        if (nb.size() < 2) continue;
        std::size_t links = 0;
        for (std::size_t a = 0; a < nb.size(); ++a)
            for (std::size_t b = a + 1; b < nb.size(); ++b)
                if (adj[nb[a]][nb[b]]) ++links;
        csum += 2.0 * static_cast<double>(links) /
                (static_cast<double>(nb.size()) * static_cast<double>(nb.size() - 1));
    }
    out.clustering = n == 0 ? 0.0 : csum / static_cast<double>(n);

    const double inf = 1e18;
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, inf));
    for (std::size_t i = 0; i < n; ++i) dist[i][i] = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (adj[i][j]) dist[i][j] = 1.0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                dist[i][j] = std::min(dist[i][j], dist[i][k] + dist[k][j]);

    double dsum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && dist[i][j] < inf) {
                dsum += dist[i][j];
                ++out.reachable_pairs;
            }
    out.avg_path = out.reachable_pairs == 0
                       ? 0.0
                       : dsum / static_cast<double>(out.reachable_pairs);
    return out;
}

} // namespace

TEST_CASE("from_parts normalizes nodes and edges") {
    Graph g = Graph::from_parts({3, 1, 2, 1}, {{3, 1}, {2, 3}, {1, 3}});
    CHECK(g.nodes() == std::vector<NodeId>{1, 2, 3});
    CHECK(g.edges() == std::vector<Edge>{{1, 3}, {2, 3}});
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(g.has_node(2));
    CHECK_FALSE(g.has_node(4));
    CHECK(g.has_edge(1, 3));
    CHECK(g.has_edge(3, 1)); // order-insensitive
    CHECK_FALSE(g.has_edge(1, 2));
    CHECK(g.node_index(1) == 0);
    CHECK(g.node_index(3) == 2);
}

TEST_CASE("from_parts rejects self-loops and dangling endpoints") {
    CHECK_FAILS_WITH(invalid_argument, Graph::from_parts({1, 2}, {{1, 1}}));
    CHECK_FAILS_WITH(missing_node, Graph::from_parts({1, 2}, {{1, 3}}));
}

TEST_CASE("contiguous builds an edgeless 0..n-1 graph") {
    Graph g = Graph::contiguous(4);
    CHECK(g.nodes() == std::vector<NodeId>{0, 1, 2, 3});
    CHECK(g.edge_count() == 0);
    CHECK(Graph::contiguous(0).node_count() == 0);
}

TEST_CASE("adjacency lists are positional and sorted") {
    Graph g = Graph::from_parts({10, 20, 30}, {{10, 30}, {20, 30}});
    auto adj = g.adjacency();
    REQUIRE(adj.size() == 3);
    CHECK(adj[0] == std::vector<std::uint32_t>{2});
    CHECK(adj[1] == std::vector<std::uint32_t>{2});
    CHECK(adj[2] == std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("gen_er honors the probability extremes and the seed") {
    Rng rng(5);
    Graph empty = gen_er(10, 0.0, rng);
    CHECK(empty.node_count() == 10);
    CHECK(empty.edge_count() == 0);

    Graph full = gen_er(10, 1.0, rng);
    CHECK(full.edge_count() == 45);

    Rng a(77), b(77), c(78);
    Graph ga = gen_er(50, 0.2, a);
    Graph gb = gen_er(50, 0.2, b);
    Graph gc = gen_er(50, 0.2, c);
    CHECK(ga == gb);
    CHECK_FALSE(ga == gc);

    // Edge count concentrates near p * C(n,2): 490 expected, sd ~ 19.8.
    Rng d(123);
    Graph gd = gen_er(100, 0.099, d);
    CHECK(gd.edge_count() > 350);
    CHECK(gd.edge_count() < 650);

    Rng e(1);
    CHECK_FAILS_WITH(invalid_argument, gen_er(5, 1.5, e));
}

TEST_CASE("gen_ws at beta 0 is the exact ring lattice") {
    Rng rng(2);
    Graph g = gen_ws(12, 4, 0.0, rng);
    CHECK(g.node_count() == 12);
    CHECK(g.edge_count() == 12 * 4 / 2);
    for (NodeId u = 0; u < 12; ++u) {
        CHECK(g.has_edge(u, (u + 1) % 12));
        CHECK(g.has_edge(u, (u + 2) % 12));
        CHECK_FALSE(g.has_edge(u, (u + 3) % 12));
    }
}

TEST_CASE("gen_ws rewiring keeps node and edge counts") {
    Rng rng(6);
    Graph g = gen_ws(100, 6, 0.3, rng);
    CHECK(g.node_count() == 100);
    CHECK(g.edge_count() == 300);
    Rng bad(1);
    CHECK_FAILS_WITH(invalid_argument, gen_ws(10, 3, 0.1, bad)); // odd k_ring
    CHECK_FAILS_WITH(invalid_argument, gen_ws(4, 4, 0.1, bad));  // k_ring >= n
}

TEST_CASE("gen_ba grows by m distinct attachments per node") {
    Rng rng(8);
    const std::size_t n = 60, m = 3;
    Graph g = gen_ba(n, m, rng);
    CHECK(g.node_count() == n);
    CHECK(g.edge_count() == m * (m - 1) / 2 + (n - m) * m);
    Rng bad(1);
    CHECK_FAILS_WITH(invalid_argument, gen_ba(5, 0, bad));
    CHECK_FAILS_WITH(invalid_argument, gen_ba(5, 5, bad));
}

TEST_CASE("clustering coefficient on canonical fixtures") {
    // Triangle: every node's neighbourhood is fully linked.
    Graph k3 = Graph::from_parts({0, 1, 2}, {{0, 1}, {0, 2}, {1, 2}});
    CHECK(clustering_coefficient(k3) == doctest::Approx(1.0));

    // 3-node path: no triangles anywhere.
    Graph p3 = Graph::from_parts({0, 1, 2}, {{0, 1}, {1, 2}});
    CHECK(clustering_coefficient(p3) == doctest::Approx(0.0));

    // Triangle plus a pendant: nodes 0,2 keep c=1, node 1 has 2/6 linked
    // neighbour pairs... (neighbours {0,2,3}, one link) -> 1/3, node 3 deg 1 -> 0.
    Graph tp = Graph::from_parts({0, 1, 2, 3}, {{0, 1}, {0, 2}, {1, 2}, {1, 3}});
    CHECK(clustering_coefficient(tp) == doctest::Approx((1.0 + 1.0 / 3.0 + 1.0 + 0.0) / 4.0));

    CHECK_FAILS_WITH(invalid_argument, clustering_coefficient(Graph()));
}

TEST_CASE("average path length on canonical fixtures") {
    Graph k3 = Graph::from_parts({0, 1, 2}, {{0, 1}, {0, 2}, {1, 2}});
    auto s = average_path_length(k3);
    CHECK(s.value == doctest::Approx(1.0));
    CHECK(s.reachable_pairs == 6);
    CHECK(s.total_pairs == 6);
    CHECK(s.reachable_fraction() == doctest::Approx(1.0));

    Graph p3 = Graph::from_parts({0, 1, 2}, {{0, 1}, {1, 2}});
    CHECK(average_path_length(p3).value == doctest::Approx(4.0 / 3.0));

    // Star with 4 leaves: 8 ordered pairs at distance 1, 12 at distance 2.
    Graph star = Graph::from_parts({0, 1, 2, 3, 4}, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    CHECK(average_path_length(star).value == doctest::Approx(32.0 / 20.0));
}

TEST_CASE("path length handles disconnection and rejects degenerate inputs") {
    // Two separate edges: only within-component pairs are reachable.
    Graph two = Graph::from_parts({0, 1, 2, 3}, {{0, 1}, {2, 3}});
    auto s = average_path_length(two);
    CHECK(s.value == doctest::Approx(1.0));
    CHECK(s.reachable_pairs == 4);
    CHECK(s.total_pairs == 12);
    CHECK(s.reachable_fraction() == doctest::Approx(1.0 / 3.0));

    CHECK_FAILS_WITH(no_reachable_pairs, average_path_length(Graph::contiguous(3)));
    CHECK_FAILS_WITH(invalid_argument, average_path_length(Graph::contiguous(1)));
    CHECK_FAILS_WITH(invalid_argument, average_path_length(Graph()));
}

TEST_CASE("metrics match an independent brute-force oracle on small graphs") {
    Rng rng(31);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 2 + rng.uniform_index(7); // 2..8
        double p = rng.uniform(0.1, 0.9);
        Graph g = gen_er(n, p, rng);
        auto oracle = brute_metrics(g);

        CHECK(clustering_coefficient(g) == doctest::Approx(oracle.clustering).epsilon(1e-12));

        if (oracle.reachable_pairs > 0) {
            auto got = average_path_length(g);
            CHECK(got.value == doctest::Approx(oracle.avg_path).epsilon(1e-12));
            CHECK(got.reachable_pairs == oracle.reachable_pairs);
            auto serial = average_path_length_serial(g);
            CHECK(serial.value == got.value); // identical integer reduction
            CHECK(serial.reachable_pairs == got.reachable_pairs);
            ++checked;
        } else {
            CHECK_FAILS_WITH(no_reachable_pairs, average_path_length(g));
        }
    }
    CHECK(checked > 50); // the sweep actually exercised connected graphs
}

TEST_CASE("parallel and serial path length agree exactly on a large graph") {
    Rng rng(99);
    Graph g = gen_er(500, 0.01, rng);
    auto par = average_path_length(g, 4);
    auto ser = average_path_length_serial(g);
    CHECK(par.value == ser.value);
    CHECK(par.reachable_pairs == ser.reachable_pairs);
    CHECK(par.total_pairs == ser.total_pairs);
}

TEST_CASE("edge list save and load round-trip, isolated nodes included") {
    Graph g = Graph::from_parts({0, 1, 2, 5, 9}, {{0, 1}, {1, 2}});
    auto path = testutil::scratch_path("roundtrip.edges");
    save_edge_list(g, path);
    auto loaded = load_edge_list(path);
    CHECK(loaded.graph == g);
    CHECK(loaded.self_loops_dropped == 0);
    CHECK(loaded.duplicates_collapsed == 0);

    // Saving the loaded graph reproduces the identical file.
    auto path2 = testutil::scratch_path("roundtrip2.edges");
    save_edge_list(loaded.graph, path2);
    std::ifstream f1(path), f2(path2);
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
    std::remove(path.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("edge list load skips comments and counts repairs") {
    auto path = testutil::scratch_path("messy.edges");
    {
        std::ofstream f(path);
        f << "# a comment\n"
          << "\n"
          << "1 2\n"
          << "2 1\n"   // duplicate in reverse order
          << "3 3\n"   // self-loop
          << "7\n"     // isolated node
          << "  4   5  \n";
    }
    auto loaded = load_edge_list(path);
    CHECK(loaded.graph.nodes() == std::vector<NodeId>{1, 2, 3, 4, 5, 7});
    CHECK(loaded.graph.edges() == std::vector<Edge>{{1, 2}, {4, 5}});
    CHECK(loaded.self_loops_dropped == 1);
    CHECK(loaded.duplicates_collapsed == 1);
    std::remove(path.c_str());
}

TEST_CASE("edge list load rejects malformed input and missing files") {
    CHECK_FAILS_WITH(io_error, load_edge_list("/nonexistent/no_such.edges"));

    auto path = testutil::scratch_path("bad.edges");
    {
        std::ofstream f(path);
        f << "1 frog\n";
    }
    CHECK_FAILS_WITH(parse_error, load_edge_list(path));

    {
        std::ofstream f(path);
        f << "1 2 3\n";
    }
    CHECK_FAILS_WITH(parse_error, load_edge_list(path));
    std::remove(path.c_str());
}

TEST_CASE("generated graphs load back identically through the text format") {
    Rng rng(17);
    Graph g = gen_ws(40, 4, 0.2, rng);
    auto path = testutil::scratch_path("ws.edges");
    save_edge_list(g, path);
    CHECK(load_edge_list(path).graph == g);
    std::remove(path.c_str());
}
