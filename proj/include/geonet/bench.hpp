#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geonet/graph.hpp"
#include "geonet/partition.hpp"

namespace geonet {

/// One benchmark measurement: a (graph size, method) pair.
struct BenchRecord {
    std::size_t n = 0;
    double p = 0.0;
    std::string method;     // "gap", "gap_parallel:<w>", or "adjacency"
    std::string partition;  // partition strategy; empty on adjacency rows
    double encode_ms_median = 0.0;
    std::size_t bytes = 0;
    std::size_t inter_edges = 0;
    bool has_inter = false; // only gap rows count inter-cluster edges
    bool skipped = false;   // adjacency skipped above the size cap
    std::uint64_t seed = 0;
    std::size_t repeats = 0;
};

struct BenchConfig {
    std::vector<std::size_t> sizes;
    double p = 0.05;
    std::size_t repeats = 3;
    // "range" (ceil(sqrt(n)) clusters), "range:<k>", or "louvain".
    std::string partition_strategy = "range";
    std::uint64_t seed = 0;
    std::vector<unsigned> workers;     // adds one gap_parallel row per entry
    std::size_t adjacency_cap = 20000; // adjacency baseline skipped above this n
};

/// Size of the bit-packed upper-triangle adjacency baseline:
/// 16-byte header + ceil(n(n-1)/2 / 8) payload bytes.
std::size_t adjacency_matrix_bytes(std::size_t n);

/// Builds that baseline: "GAM1", 4 zero bytes, little-endian u64 node count,
/// then one bit per unordered pair in row-major upper-triangle order.
std::vector<std::uint8_t> adjacency_encode(const Graph& g);

/// Applies a partition strategy string to a graph.
Partition make_partition(const Graph& g, const std::string& strategy, std::uint64_t seed);

/// For each size: generate an Erdos-Renyi graph, partition it, and time the
/// encoding methods (one warm-up, then `repeats` timed runs; the median is
/// reported, measured on a monotonic clock). Timed work is the full path from
/// graph to serialized bytes.
std::vector<BenchRecord> bench_scalability(const BenchConfig& config);

/// Fixed column schema: n,p,method,partition,encode_ms_median,bytes,inter_edges,seed,repeats
std::string bench_csv(const std::vector<BenchRecord>& records);

/// JSON report: config echo (sufficient to re-run), environment stamp, records.
std::string bench_json(const BenchConfig& config, const std::vector<BenchRecord>& records);

} // namespace geonet
