#include "geonet/error.hpp"

namespace geonet {

const char* errc_name(errc code) noexcept {
    switch (code) {
    case errc::invalid_argument: return "invalid_argument";
    case errc::dimension_mismatch: return "dimension_mismatch";
    case errc::not_symmetric: return "not_symmetric";
    case errc::no_convergence: return "no_convergence";
    case errc::bad_magic: return "bad_magic";
    case errc::truncated_file: return "truncated_file";
    case errc::count_mismatch: return "count_mismatch";
    case errc::parse_error: return "parse_error";
    case errc::label_out_of_range: return "label_out_of_range";
    case errc::non_finite: return "non_finite";
    case errc::not_prunable: return "not_prunable";
    case errc::missing_node: return "missing_node";
    case errc::duplicate_node: return "duplicate_node";
    case errc::missing_edge: return "missing_edge";
    case errc::duplicate_edge: return "duplicate_edge";
    case errc::partition_mismatch: return "partition_mismatch";
    case errc::malformed_encoding: return "malformed_encoding";
    case errc::version_mismatch: return "version_mismatch";
    case errc::varint_overflow: return "varint_overflow";
    case errc::no_reachable_pairs: return "no_reachable_pairs";
    case errc::io_error: return "io_error";
    }
    return "unknown";
}

} // namespace geonet
