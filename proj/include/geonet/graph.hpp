#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "geonet/error.hpp"
#include "geonet/rng.hpp"

namespace geonet {

using NodeId = std::uint64_t;
using Edge = std::pair<NodeId, NodeId>; // canonical: first < second

/// Undirected simple graph: sorted node-ID set plus a deduplicated, canonically
/// sorted edge list. No self-loops, every edge endpoint is a node.
class Graph {
public:
    Graph() = default;

    /// Normalizes the inputs: sorts and dedups nodes, canonicalizes edges (u < v),
    /// drops duplicates. Self-loops and dangling endpoints are rejected.
    static Graph from_parts(std::vector<NodeId> nodes, std::vector<Edge> edges);

    /// Nodes 0..n-1 with no edges.
    static Graph contiguous(std::size_t n);

    const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    bool has_node(NodeId v) const noexcept;
    bool has_edge(NodeId u, NodeId v) const noexcept;

    /// Position of v in the sorted node list; node must exist.
    std::size_t node_index(NodeId v) const;

    /// Adjacency lists indexed by node position (see node_index), sorted.
    std::vector<std::vector<std::uint32_t>> adjacency() const;

    bool operator==(const Graph& other) const noexcept {
        return nodes_ == other.nodes_ && edges_ == other.edges_;
    }

private:
    std::vector<NodeId> nodes_; // sorted, unique
    std::vector<Edge> edges_;   // canonical (u < v), sorted, unique
};

/// Erdős–Rényi G(n, p): each of the n(n-1)/2 pairs kept with probability p.
Graph gen_er(std::size_t n, double p, Rng& rng);

/// Watts–Strogatz ring lattice with k_ring nearest neighbours and rewiring
/// probability beta. k_ring must be even and < n.
Graph gen_ws(std::size_t n, std::size_t k_ring, double beta, Rng& rng);

/// Barabási–Albert: m-clique seed, then preferential attachment of m edges per
/// new node. Requires 1 <= m < n.
Graph gen_ba(std::size_t n, std::size_t m, Rng& rng);

struct EdgeListLoad {
    Graph graph;
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_collapsed = 0;
};

/// Text edge list: one "u v" pair per line, '#' comments and blank lines
/// skipped. A single-token line declares an isolated node (so saved graphs
/// round-trip exactly). Self-loops are dropped (counted), duplicates
/// collapsed (counted).
EdgeListLoad load_edge_list(const std::string& path);

/// Canonical form: a "# nodes N edges M" comment header, one "u v" (u < v)
/// line per edge in sorted order, then one line per isolated node.
/// load(save(g)) == g and save(load(f)) is a fixed point.
void save_edge_list(const Graph& g, const std::string& path);

} // namespace geonet
