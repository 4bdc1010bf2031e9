#include "geonet/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace geonet {

Partition Partition::from_clusters(std::vector<std::vector<NodeId>> clusters) {
    for (auto& c : clusters) {
        if (c.empty()) fail(errc::invalid_argument, "partition cluster must be non-empty");
        std::sort(c.begin(), c.end());
        if (std::adjacent_find(c.begin(), c.end()) != c.end()) {
            fail(errc::invalid_argument, "duplicate node within a cluster");
        }
    }
    std::sort(clusters.begin(), clusters.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    Partition p;
    p.clusters_ = std::move(clusters);
    for (std::size_t ci = 0; ci < p.clusters_.size(); ++ci) {
        for (NodeId v : p.clusters_[ci]) {
            p.nodes_.push_back(v);
            p.assign_.push_back(static_cast<std::uint32_t>(ci));
        }
    }
    // Sort the (node, cluster) index by node; disjointness = no duplicate node.
    std::vector<std::size_t> order(p.nodes_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return p.nodes_[a] < p.nodes_[b]; });
    std::vector<NodeId> nodes(p.nodes_.size());
    std::vector<std::uint32_t> assign(p.nodes_.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        nodes[i] = p.nodes_[order[i]];
        assign[i] = p.assign_[order[i]];
    }
    if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
        fail(errc::invalid_argument, "clusters are not disjoint");
    }
    p.nodes_ = std::move(nodes);
    p.assign_ = std::move(assign);
    return p;
}

std::uint32_t Partition::cluster_of(NodeId v) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), v);
    if (it == nodes_.end() || *it != v) {
        fail(errc::missing_node, "node " + std::to_string(v) + " not in partition");
    }
    return assign_[static_cast<std::size_t>(it - nodes_.begin())];
}

bool Partition::covers(const Graph& g) const noexcept {
    return nodes_ == g.nodes();
}

double modularity(const Graph& g, const Partition& p) {
    if (!p.covers(g)) fail(errc::partition_mismatch, "partition does not cover the graph");
    const double m = static_cast<double>(g.edge_count());
    if (m == 0.0) fail(errc::invalid_argument, "modularity undefined for edgeless graph");

    std::vector<double> intra(p.k(), 0.0);
    std::vector<double> degree_sum(p.k(), 0.0);
    for (const auto& [u, v] : g.edges()) {
        const auto cu = p.cluster_of(u);
        const auto cv = p.cluster_of(v);
        degree_sum[cu] += 1.0;
        degree_sum[cv] += 1.0;
        if (cu == cv) intra[cu] += 1.0;
    }
    double q = 0.0;
    for (std::size_t c = 0; c < p.k(); ++c) {
        const double frac = degree_sum[c] / (2.0 * m);
        q += intra[c] / m - frac * frac;
    }
    return q;
}

namespace {

// One Louvain level over a weighted graph. adj holds neighbor (index, weight)
// pairs without self-loops; self_w holds self-loop weight (internal weight of
// the community a node represents). Returns the community index per node, or
// an empty vector when no node moved.
std::vector<std::uint32_t> louvain_level(
    const std::vector<std::vector<std::pair<std::uint32_t, double>>>& adj,
    const std::vector<double>& self_w, double m, Rng* shuffle_rng) {
    const std::size_t n = adj.size();
    std::vector<double> k(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 2.0 * self_w[i];
        for (const auto& [j, w] : adj[i]) sum += w;
        k[i] = sum;
    }

    std::vector<std::uint32_t> comm(n);
    std::iota(comm.begin(), comm.end(), 0);
    std::vector<double> sigma_tot = k; // per community, starts as singletons

    constexpr double kGainTol = 1e-9;
    std::vector<double> w_to(n, 0.0); // scratch: weight from node to community
    std::vector<std::uint32_t> touched;
    std::vector<std::size_t> sweep(n);
    std::iota(sweep.begin(), sweep.end(), 0);

    bool any_move_ever = false;
    bool moved = true;
    while (moved) {
        moved = false;
        if (shuffle_rng != nullptr) shuffle_rng->shuffle(sweep);
        for (std::size_t idx : sweep) {
            const auto i = static_cast<std::uint32_t>(idx);
            const std::uint32_t old_c = comm[i];

            touched.clear();
            for (const auto& [j, w] : adj[i]) {
                const std::uint32_t c = comm[j];
                if (w_to[c] == 0.0) touched.push_back(c);
                w_to[c] += w;
            }

            // Remove i from its community, then compare candidate gains
            // against re-joining it. Ascending candidate order plus strict
            // comparison breaks ties toward the lowest community index.
            sigma_tot[old_c] -= k[i];
            const double stay_gain =
                w_to[old_c] / m - sigma_tot[old_c] * k[i] / (2.0 * m * m);

            std::sort(touched.begin(), touched.end());
            std::uint32_t best_c = old_c;
            double best_net = kGainTol; // a move must beat this
            for (std::uint32_t c : touched) {
                if (c == old_c) continue;
                const double gain = w_to[c] / m - sigma_tot[c] * k[i] / (2.0 * m * m);
                const double net = gain - stay_gain;
                if (net > best_net) {
                    best_net = net;
                    best_c = c;
                }
            }

            sigma_tot[best_c] += k[i];
            comm[i] = best_c;
            if (best_c != old_c) {
                moved = true;
                any_move_ever = true;
            }
            for (std::uint32_t c : touched) w_to[c] = 0.0;
        }
    }

    if (!any_move_ever) return {};
    return comm;
}

} // namespace

Partition partition_louvain(const Graph& g, Rng& rng, bool shuffle_sweeps) {
    const std::size_t n = g.node_count();
    if (n == 0) fail(errc::invalid_argument, "cannot partition empty graph");

    // No edges: no move ever has positive gain, so every node stays alone.
    if (g.edge_count() == 0) {
        std::vector<std::vector<NodeId>> singletons(n);
        for (std::size_t i = 0; i < n; ++i) singletons[i] = {g.nodes()[i]};
        return Partition::from_clusters(std::move(singletons));
    }

    const double m = static_cast<double>(g.edge_count());

    // Level-0 weighted graph: one vertex per node position, unit weights.
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(n);
    std::vector<double> self_w(n, 0.0);
    for (const auto& [u, v] : g.edges()) {
        const auto iu = static_cast<std::uint32_t>(g.node_index(u));
        const auto iv = static_cast<std::uint32_t>(g.node_index(v));
        adj[iu].emplace_back(iv, 1.0);
        adj[iv].emplace_back(iu, 1.0);
    }

    // membership[i] = current community of original node position i.
    std::vector<std::uint32_t> membership(n);
    std::iota(membership.begin(), membership.end(), 0);

    while (true) {
        auto comm = louvain_level(adj, self_w, m, shuffle_sweeps ? &rng : nullptr);
        if (comm.empty()) break;

        // Compact community labels in order of first appearance by index.
        std::vector<std::uint32_t> relabel(comm.size(), UINT32_MAX);
        std::uint32_t next = 0;
        for (std::size_t i = 0; i < comm.size(); ++i) {
            if (relabel[comm[i]] == UINT32_MAX) relabel[comm[i]] = next++;
        }
        for (auto& c : comm) c = relabel[c];
        const std::size_t kc = next;

        for (auto& mcur : membership) mcur = comm[mcur];
        if (kc == adj.size()) break; // nodes only traded labels; nothing to merge

        // Aggregate: communities become vertices; intra weight moves to
        // self-loops, inter weights sum per community pair.
        std::vector<std::vector<std::uint32_t>> members(kc);
        for (std::uint32_t i = 0; i < adj.size(); ++i) members[comm[i]].push_back(i);

        std::vector<double> new_self(kc, 0.0);
        std::vector<std::vector<std::pair<std::uint32_t, double>>> new_adj(kc);
        std::vector<double> acc(kc, 0.0);
        std::vector<std::uint32_t> seen;
        for (std::uint32_t ci = 0; ci < kc; ++ci) {
            seen.clear();
            for (std::uint32_t i : members[ci]) {
                new_self[ci] += self_w[i];
                for (const auto& [j, w] : adj[i]) {
                    const std::uint32_t cj = comm[j];
                    if (cj == ci) {
                        if (i < j) new_self[ci] += w; // each intra pair once
                        continue;
                    }
                    if (acc[cj] == 0.0) seen.push_back(cj);
                    acc[cj] += w;
                }
            }
            std::sort(seen.begin(), seen.end());
            for (std::uint32_t cj : seen) {
                new_adj[ci].emplace_back(cj, acc[cj]);
                acc[cj] = 0.0;
            }
        }
        adj = std::move(new_adj);
        self_w = std::move(new_self);
        if (adj.size() == 1) break;
    }

    std::uint32_t kc = 0;
    for (std::uint32_t c : membership) kc = std::max(kc, c + 1);
    std::vector<std::vector<NodeId>> clusters(kc);
    for (std::size_t i = 0; i < n; ++i) clusters[membership[i]].push_back(g.nodes()[i]);
    return Partition::from_clusters(std::move(clusters));
}

Partition partition_range(const Graph& g, std::size_t k) {
    const std::size_t n = g.node_count();
    if (k < 1 || k > n) fail(errc::invalid_argument, "cluster count must be in [1, |V|]");
    const std::size_t base = n / k;
    const std::size_t extra = n % k;
    std::vector<std::vector<NodeId>> clusters(k);
    std::size_t pos = 0;
    for (std::size_t c = 0; c < k; ++c) {
        const std::size_t size = base + (c < extra ? 1 : 0);
        clusters[c].assign(g.nodes().begin() + pos, g.nodes().begin() + pos + size);
        pos += size;
    }
    return Partition::from_clusters(std::move(clusters));
}

EdgeSplit edge_split(const Graph& g, const Partition& p) {
    if (!p.covers(g)) fail(errc::partition_mismatch, "partition does not cover the graph");
    EdgeSplit split;
    split.intra.resize(p.k());
    for (const auto& e : g.edges()) {
        const auto cu = p.cluster_of(e.first);
        const auto cv = p.cluster_of(e.second);
        if (cu == cv) {
            split.intra[cu].push_back(e);
        } else {
            split.inter.push_back(e);
        }
    }
    return split;
}

} // namespace geonet
