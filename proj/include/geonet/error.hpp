#pragma once

#include <stdexcept>
#include <string>

namespace geonet {

enum class errc {
    invalid_argument,
    dimension_mismatch,
    not_symmetric,
    no_convergence,
    bad_magic,
    truncated_file,
    count_mismatch,
    parse_error,
    label_out_of_range,
    non_finite,
    not_prunable,
    missing_node,
    duplicate_node,
    missing_edge,
    duplicate_edge,
    partition_mismatch,
    malformed_encoding,
    version_mismatch,
    varint_overflow,
    no_reachable_pairs,
    io_error,
};

const char* errc_name(errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace geonet
