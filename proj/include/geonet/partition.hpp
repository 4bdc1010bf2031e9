#pragma once

#include <cstdint>
#include <vector>

#include "geonet/graph.hpp"

namespace geonet {

/// Disjoint cover of a node set by non-empty clusters indexed 0..k-1.
/// Cluster order is deterministic: ascending smallest member ID.
class Partition {
public:
    Partition() = default;

    /// Validates: clusters non-empty, pairwise disjoint; sorts members;
    /// renumbers clusters by ascending smallest member.
    static Partition from_clusters(std::vector<std::vector<NodeId>> clusters);

    std::size_t k() const noexcept { return clusters_.size(); }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    const std::vector<std::vector<NodeId>>& clusters() const noexcept { return clusters_; }

    /// Cluster index of v; missing node is an error.
    std::uint32_t cluster_of(NodeId v) const;

    /// True when the partition's node set equals the graph's.
    bool covers(const Graph& g) const noexcept;

    bool operator==(const Partition& other) const noexcept {
        return clusters_ == other.clusters_;
    }

private:
    std::vector<std::vector<NodeId>> clusters_; // each sorted
    std::vector<NodeId> nodes_;                 // sorted union of clusters
    std::vector<std::uint32_t> assign_;         // cluster index, parallel to nodes_
};

/// Standard undirected modularity (resolution 1) of a partition that covers g.
/// Undefined (error) for an edgeless graph.
double modularity(const Graph& g, const Partition& p);

/// Greedy modularity maximization with deterministic ascending-ID sweeps
/// (ties broken toward the lowest community index) and community aggregation
/// phases; stops when no move gains more than 1e-9. Pass shuffle_sweeps=true
/// to randomize the sweep order from rng (off by default, so results are
/// reproducible without touching the rng).
Partition partition_louvain(const Graph& g, Rng& rng, bool shuffle_sweeps = false);

/// Sorted node IDs cut into k contiguous chunks of near-equal size
/// (the first |V| mod k chunks get one extra node). Requires 1 <= k <= |V|.
Partition partition_range(const Graph& g, std::size_t k);

struct EdgeSplit {
    std::vector<std::vector<Edge>> intra; // per cluster, sorted
    std::vector<Edge> inter;              // cross-cluster, sorted
};

/// Classifies every edge of g as intra- or inter-cluster. The partition must
/// cover all nodes of g.
EdgeSplit edge_split(const Graph& g, const Partition& p);

} // namespace geonet
