#include "geonet/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace geonet {

Graph Graph::from_parts(std::vector<NodeId> nodes, std::vector<Edge> edges) {
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    for (auto& [u, v] : edges) {
        if (u == v) fail(errc::invalid_argument, "self-loop at node " + std::to_string(u));
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    Graph g;
    g.nodes_ = std::move(nodes);
    g.edges_ = std::move(edges);
    for (const auto& [u, v] : g.edges_) {
        if (!g.has_node(u) || !g.has_node(v)) {
            fail(errc::missing_node, "edge (" + std::to_string(u) + "," + std::to_string(v) +
                                         ") references a node not in the node set");
        }
    }
    return g;
}

Graph Graph::contiguous(std::size_t n) {
    Graph g;
    g.nodes_.resize(n);
    for (std::size_t i = 0; i < n; ++i) g.nodes_[i] = i;
    return g;
}

bool Graph::has_node(NodeId v) const noexcept {
    return std::binary_search(nodes_.begin(), nodes_.end(), v);
}

bool Graph::has_edge(NodeId u, NodeId v) const noexcept {
    if (u == v) return false;
    if (u > v) std::swap(u, v);
    return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
}

std::size_t Graph::node_index(NodeId v) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), v);
    if (it == nodes_.end() || *it != v) {
        fail(errc::missing_node, "node " + std::to_string(v) + " not in graph");
    }
    return static_cast<std::size_t>(it - nodes_.begin());
}

std::vector<std::vector<std::uint32_t>> Graph::adjacency() const {
    std::vector<std::vector<std::uint32_t>> adj(nodes_.size());
    for (const auto& [u, v] : edges_) {
        auto iu = static_cast<std::uint32_t>(node_index(u));
        auto iv = static_cast<std::uint32_t>(node_index(v));
        adj[iu].push_back(iv);
        adj[iv].push_back(iu);
    }
    for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
    return adj;
}

Graph gen_er(std::size_t n, double p, Rng& rng) {
    if (p < 0.0 || p > 1.0) fail(errc::invalid_argument, "edge probability must be in [0,1]");
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            if (rng.bernoulli(p)) edges.emplace_back(u, v);
        }
    }
    std::vector<NodeId> nodes(n);
    for (std::size_t i = 0; i < n; ++i) nodes[i] = i;
    return Graph::from_parts(std::move(nodes), std::move(edges));
}

Graph gen_ws(std::size_t n, std::size_t k_ring, double beta, Rng& rng) {
    if (k_ring % 2 != 0) fail(errc::invalid_argument, "k_ring must be even");
    if (k_ring >= n) fail(errc::invalid_argument, "k_ring must be < n");
    if (beta < 0.0 || beta > 1.0) fail(errc::invalid_argument, "beta must be in [0,1]");

    // Edge set as sorted canonical pairs; start from the ring lattice.
    std::vector<Edge> edges;
    edges.reserve(n * k_ring / 2);
    for (NodeId u = 0; u < n; ++u) {
        for (std::size_t off = 1; off <= k_ring / 2; ++off) {
            NodeId v = (u + off) % n;
            edges.emplace_back(std::min(u, v), std::max(u, v));
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    auto contains = [&edges](NodeId a, NodeId b) {
        if (a > b) std::swap(a, b);
        return std::binary_search(edges.begin(), edges.end(), Edge{a, b});
    };

    // Rewire each original right-offset edge (u, u+off) with probability beta:
    // keep u, pick a fresh endpoint uniformly, skipping self-loops/duplicates.
    for (NodeId u = 0; u < n; ++u) {
        for (std::size_t off = 1; off <= k_ring / 2; ++off) {
            NodeId v = (u + off) % n;
            if (!rng.bernoulli(beta)) continue;
            if (!contains(u, v)) continue; // already rewired away from the other side
            NodeId w = rng.uniform_index(n);
            // A node adjacent to everyone has no legal new endpoint; skip then.
            std::size_t attempts = 0;
            while ((w == u || contains(u, w)) && attempts < 4 * n) {
                w = rng.uniform_index(n);
                ++attempts;
            }
            if (w == u || contains(u, w)) continue;
            Edge old_e{std::min(u, v), std::max(u, v)};
            edges.erase(std::lower_bound(edges.begin(), edges.end(), old_e));
            Edge new_e{std::min(u, w), std::max(u, w)};
            edges.insert(std::lower_bound(edges.begin(), edges.end(), new_e), new_e);
        }
    }

    std::vector<NodeId> nodes(n);
    for (std::size_t i = 0; i < n; ++i) nodes[i] = i;
    return Graph::from_parts(std::move(nodes), std::move(edges));
}

Graph gen_ba(std::size_t n, std::size_t m, Rng& rng) {
    if (m < 1 || m >= n) fail(errc::invalid_argument, "BA requires 1 <= m < n");

    std::vector<Edge> edges;
    // Repeated-endpoint list: node u appears deg(u) times, so uniform draws
    // from it realize preferential attachment.
    std::vector<NodeId> endpoints;

    for (NodeId u = 0; u < m; ++u) {
        for (NodeId v = u + 1; v < m; ++v) {
            edges.emplace_back(u, v);
            endpoints.push_back(u);
            endpoints.push_back(v);
        }
    }

    std::vector<NodeId> targets;
    for (NodeId u = m; u < n; ++u) {
        targets.clear();
        // Draw m distinct targets; duplicates redrawn.
        while (targets.size() < m) {
            NodeId t;
            if (endpoints.empty()) {
                t = rng.uniform_index(u); // degenerate m=1 seed: uniform fallback
            } else {
                t = endpoints[rng.uniform_index(endpoints.size())];
            }
            if (std::find(targets.begin(), targets.end(), t) == targets.end()) {
                targets.push_back(t);
            }
        }
        for (NodeId t : targets) {
            edges.emplace_back(std::min(u, t), std::max(u, t));
            endpoints.push_back(u);
            endpoints.push_back(t);
        }
    }

    std::vector<NodeId> nodes(n);
    for (std::size_t i = 0; i < n; ++i) nodes[i] = i;
    return Graph::from_parts(std::move(nodes), std::move(edges));
}

namespace {

NodeId parse_node(const std::string& tok, std::size_t line_no) {
    NodeId value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        fail(errc::parse_error,
             "line " + std::to_string(line_no) + ": non-integer token '" + tok + "'");
    }
    return value;
}

} // namespace

EdgeListLoad load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::io_error, "cannot open edge list: " + path);

    std::vector<NodeId> nodes;
    std::vector<Edge> edges;
    std::size_t self_loops = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        std::vector<std::string> toks;
        while (ls >> tok) {
            if (tok[0] == '#') break;
            toks.push_back(tok);
        }
        if (toks.empty()) continue;
        if (toks.size() == 1) {
            nodes.push_back(parse_node(toks[0], line_no));
            continue;
        }
        if (toks.size() != 2) {
            fail(errc::parse_error,
                 "line " + std::to_string(line_no) + ": expected 'u v', got " +
                     std::to_string(toks.size()) + " tokens");
        }
        NodeId u = parse_node(toks[0], line_no);
        NodeId v = parse_node(toks[1], line_no);
        if (u == v) {
            ++self_loops;
            nodes.push_back(u); // the node itself still exists
            continue;
        }
        nodes.push_back(u);
        nodes.push_back(v);
        edges.emplace_back(std::min(u, v), std::max(u, v));
    }

    std::sort(edges.begin(), edges.end());
    std::size_t before = edges.size();
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    EdgeListLoad result;
    result.self_loops_dropped = self_loops;
    result.duplicates_collapsed = before - edges.size();
    result.graph = Graph::from_parts(std::move(nodes), std::move(edges));
    return result;
}

void save_edge_list(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(errc::io_error, "cannot open for writing: " + path);
    out << "# nodes " << g.node_count() << " edges " << g.edge_count() << "\n";
    std::vector<bool> touched(g.node_count(), false);
    for (const auto& [u, v] : g.edges()) {
        out << u << " " << v << "\n";
        touched[g.node_index(u)] = true;
        touched[g.node_index(v)] = true;
    }
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        if (!touched[i]) out << g.nodes()[i] << "\n";
    }
    if (!out) fail(errc::io_error, "write failed: " + path);
}

} // namespace geonet
