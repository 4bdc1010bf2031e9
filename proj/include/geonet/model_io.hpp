#pragma once

#include <string>

#include "geonet/dimred.hpp"
#include "geonet/network.hpp"

namespace geonet {

/// Saves a network as a versioned JSON document. Doubles are written with
/// round-trip precision, so save -> load reproduces the parameters exactly.
void save_network(const Network& net, const std::string& path);

/// Loads a network saved by save_network. Rejects files with a different
/// format tag, an incompatible major version, or an inconsistent layer chain.
Network load_network(const std::string& path);

/// Saves a fitted projection (mean, directions, spectrum) as versioned JSON.
void save_pca(const PCAModel& model, const std::string& path);

/// Loads a projection saved by save_pca, with the same checks as load_network.
PCAModel load_pca(const std::string& path);

} // namespace geonet
