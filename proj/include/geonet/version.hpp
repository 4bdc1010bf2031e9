#pragma once

namespace geonet {

// Library and file-format version, reported by the CLI and stamped into
// saved models and experiment reports.
inline constexpr const char* kVersion = "1.0.0";

} // namespace geonet
