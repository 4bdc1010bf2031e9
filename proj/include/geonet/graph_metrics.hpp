#pragma once

#include <cstdint>

#include "geonet/graph.hpp"

namespace geonet {

struct PathLengthStats {
    double value = 0.0;               // mean BFS distance over reachable ordered pairs
    std::uint64_t reachable_pairs = 0; // ordered (s,t), s != t, finite distance
    std::uint64_t total_pairs = 0;     // n(n-1)

    double reachable_fraction() const noexcept {
        return total_pairs == 0 ? 0.0 : static_cast<double>(reachable_pairs) /
                                            static_cast<double>(total_pairs);
    }
};

/// Mean local clustering coefficient; nodes with degree < 2 contribute 0.
/// Rejects the empty graph.
double clustering_coefficient(const Graph& g);

/// Average shortest-path length over reachable ordered pairs (per-source BFS,
/// OpenMP across sources, deterministic integer reduction). Needs >= 2 nodes;
/// zero reachable pairs is an error. threads = 0 uses the runtime default.
PathLengthStats average_path_length(const Graph& g, int threads = 0);

/// Single-threaded reference for average_path_length; same contract, and the
/// two must agree exactly (the reduction is integer arithmetic).
PathLengthStats average_path_length_serial(const Graph& g);

} // namespace geonet
