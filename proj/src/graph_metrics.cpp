#include "geonet/graph_metrics.hpp"

#include <algorithm>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#else
namespace {
int omp_get_max_threads() { return 1; }
} // namespace
#endif

namespace geonet {

double clustering_coefficient(const Graph& g) {
    const std::size_t n = g.node_count();
    if (n == 0) fail(errc::invalid_argument, "clustering coefficient of empty graph");
    const auto adj = g.adjacency();

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& nbrs = adj[i];
        const std::size_t deg = nbrs.size();
        if (deg < 2) continue;
        std::uint64_t links = 0;
        for (std::size_t a = 0; a < deg; ++a) {
            for (std::size_t b = a + 1; b < deg; ++b) {
                // adjacency lists are sorted
                if (std::binary_search(adj[nbrs[a]].begin(), adj[nbrs[a]].end(), nbrs[b])) {
                    ++links;
                }
            }
        }
        total += 2.0 * static_cast<double>(links) /
                 (static_cast<double>(deg) * static_cast<double>(deg - 1));
    }
    return total / static_cast<double>(n);
}

namespace {

struct SourceSums {
    std::uint64_t dist_sum = 0;
    std::uint64_t reached = 0;
};

// BFS from one source over position-indexed adjacency; excludes the source itself.
SourceSums bfs_sums(const std::vector<std::vector<std::uint32_t>>& adj, std::uint32_t src,
                    std::vector<std::uint32_t>& dist, std::vector<std::uint32_t>& queue) {
    const auto unvisited = static_cast<std::uint32_t>(-1);
    std::fill(dist.begin(), dist.end(), unvisited);
    dist[src] = 0;
    queue.clear();
    queue.push_back(src);
    SourceSums sums;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        std::uint32_t u = queue[head];
        for (std::uint32_t v : adj[u]) {
            if (dist[v] != unvisited) continue;
            dist[v] = dist[u] + 1;
            sums.dist_sum += dist[v];
            ++sums.reached;
            queue.push_back(v);
        }
    }
    return sums;
}

PathLengthStats apl_impl(const Graph& g, int threads, bool parallel) {
    const std::size_t n = g.node_count();
    if (n < 2) fail(errc::invalid_argument, "average path length needs at least 2 nodes");
    const auto adj = g.adjacency();

    std::vector<SourceSums> per_source(n);
    if (parallel) {
        [[maybe_unused]] const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(nt)
        {
            std::vector<std::uint32_t> dist(n), queue;
            queue.reserve(n);
#pragma omp for schedule(dynamic, 16)
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
                per_source[i] = bfs_sums(adj, static_cast<std::uint32_t>(i), dist, queue);
            }
        }
    } else {
        std::vector<std::uint32_t> dist(n), queue;
        queue.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            per_source[i] = bfs_sums(adj, static_cast<std::uint32_t>(i), dist, queue);
        }
    }

    // Integer reduction in source order: identical totals for any thread count.
    std::uint64_t dist_total = 0;
    std::uint64_t reachable = 0;
    for (const auto& s : per_source) {
        dist_total += s.dist_sum;
        reachable += s.reached;
    }

    PathLengthStats stats;
    stats.total_pairs = static_cast<std::uint64_t>(n) * (n - 1);
    stats.reachable_pairs = reachable;
    if (reachable == 0) {
        fail(errc::no_reachable_pairs, "graph has no connected node pairs");
    }
    stats.value = static_cast<double>(dist_total) / static_cast<double>(reachable);
    return stats;
}

} // namespace

PathLengthStats average_path_length(const Graph& g, int threads) {
    return apl_impl(g, threads, true);
}

PathLengthStats average_path_length_serial(const Graph& g) {
    return apl_impl(g, 0, false);
}

} // namespace geonet
