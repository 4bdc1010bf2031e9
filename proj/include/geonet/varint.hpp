#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "geonet/error.hpp"

namespace geonet {

/// Unsigned LEB128: 7 data bits per byte, little-endian groups, MSB = continuation.
void varint_append(std::vector<std::uint8_t>& out, std::uint64_t value);

/// Decodes one varint starting at offset, advancing it past the encoding.
/// Throws truncated_file when the buffer ends mid-value and varint_overflow
/// when the encoding does not fit in 64 bits.
std::uint64_t varint_read(const std::vector<std::uint8_t>& buf, std::size_t& offset);

/// Encoded length in bytes of one value.
std::size_t varint_length(std::uint64_t value) noexcept;

} // namespace geonet
