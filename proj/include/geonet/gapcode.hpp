#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "geonet/graph.hpp"
#include "geonet/partition.hpp"

namespace geonet {

/// One cluster of a gap-encoded graph.
///
/// seq encodes the cluster's sorted node IDs: seq[0] is the smallest ID
/// (the base), seq[i>0] the difference between consecutive IDs — so {3,5,8}
/// is stored as [3,2,3]. An empty seq is an empty cluster slot (clusters
/// keep their index for life so positions elsewhere stay valid).
/// intra holds the cluster's internal edges as (position, position) pairs
/// into the sorted ID list, first < second, lexicographically sorted.
struct GapSubgraph {
    std::vector<std::uint64_t> seq;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> intra;

    std::size_t node_count() const noexcept { return seq.size(); }

    /// Prefix-sums seq back to sorted node IDs. Zero gaps are rejected.
    std::vector<NodeId> decode_ids() const;

    bool operator==(const GapSubgraph&) const = default;
};

/// Edges between one pair of clusters (p < q), as (position-in-p,
/// position-in-q) pairs, lexicographically sorted.
struct InterGroup {
    std::uint32_t p = 0;
    std::uint32_t q = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

    bool operator==(const InterGroup&) const = default;
};

/// Expanded single inter-cluster edge: endpoint IDs plus their gap
/// |vi - vj| (derivable, kept as a check value).
struct InterEdge {
    std::uint32_t p = 0;
    std::uint32_t q = 0;
    NodeId vi = 0;
    NodeId vj = 0;
    std::uint64_t gap = 0;
};

/// Gap-encoded graph: per-cluster gap sequences + positional intra edges,
/// plus inter-cluster edge groups. Non-empty groups only, sorted by (p,q).
struct GapEncodedGraph {
    std::vector<GapSubgraph> clusters;
    std::vector<InterGroup> inter;

    bool operator==(const GapEncodedGraph&) const = default;
};

struct UpdateStats {
    std::size_t clusters_reencoded = 0;
};

/// Gap-encode g under partition p (cluster order = partition order).
GapEncodedGraph encode(const Graph& g, const Partition& p);

/// Same, but with an explicit cluster layout: clusters are taken in the given
/// order, may be empty, must be sorted and disjoint, and must jointly cover g.
/// This is the primitive update oracles rebuild against.
GapEncodedGraph encode_clusters(const Graph& g,
                                const std::vector<std::vector<NodeId>>& clusters);

/// Parallel encode across clusters (OpenMP); merged in cluster-index order,
/// so the result — and its serialization — is byte-identical to encode()
/// for any worker count. workers >= 1.
GapEncodedGraph encode_parallel(const Graph& g, const Partition& p, int workers);

/// Inverse of encode: exact original nodes and edges.
Graph decode(const GapEncodedGraph& e);

/// |vi - vj|; equal endpoints rejected.
std::uint64_t inter_edge_gap(NodeId vi, NodeId vj);

/// Expanded inter-edge view with endpoint IDs and gaps.
std::vector<InterEdge> inter_edges(const GapEncodedGraph& e);

/// Localized updates. Each rebuilds only the affected cluster's gap sequence
/// (two for inter-cluster edge ops) and remaps stored positions; the stats
/// report how many clusters were re-encoded (always <= 2). Precondition
/// violations raise distinct errors and leave the encoding untouched.
UpdateStats add_node(GapEncodedGraph& e, NodeId id, std::uint32_t cluster);
UpdateStats remove_node(GapEncodedGraph& e, NodeId id); // drops incident edges
UpdateStats add_edge(GapEncodedGraph& e, NodeId u, NodeId v);
UpdateStats remove_edge(GapEncodedGraph& e, NodeId u, NodeId v);

/// Bit-exact format, all integers unsigned LEB128:
///   "GGE1" | k | per cluster: node-count, [base, gaps...], intra-count,
///   intra position pairs (raw) | group-count | per group: p, q, edge-count,
///   delta-coded position pairs.
/// Inter pair deltas: first pair raw; then dp = pos_p - prev.pos_p is
/// written, followed by pos_q raw if dp > 0, or pos_q - prev.pos_q if dp = 0.
std::vector<std::uint8_t> serialize(const GapEncodedGraph& e);
GapEncodedGraph deserialize(const std::vector<std::uint8_t>& bytes);

/// serialize(e).size() without keeping the buffer.
std::size_t serialized_size(const GapEncodedGraph& e);

} // namespace geonet
