#include "geonet/varint.hpp"

namespace geonet {

void varint_append(std::vector<std::uint8_t>& out, std::uint64_t value) {
    while (value >= 0x80) {
        out.push_back(static_cast<std::uint8_t>(value) | 0x80);
        value >>= 7;
    }
    out.push_back(static_cast<std::uint8_t>(value));
}

std::uint64_t varint_read(const std::vector<std::uint8_t>& buf, std::size_t& offset) {
    std::uint64_t value = 0;
    unsigned shift = 0;
    for (;;) {
        if (offset >= buf.size())
            fail(errc::truncated_file, "varint: buffer ended mid-value at byte " +
                                           std::to_string(offset));
        const std::uint8_t byte = buf[offset++];
        if (shift == 63 && (byte & 0x7E))
            fail(errc::varint_overflow, "varint: value exceeds 64 bits");
        if (shift > 63)
            fail(errc::varint_overflow, "varint: encoding longer than 10 bytes");
        value |= static_cast<std::uint64_t>(byte & 0x7F) << shift;
        if ((byte & 0x80) == 0) return value;
        shift += 7;
    }
}

std::size_t varint_length(std::uint64_t value) noexcept {
    std::size_t n = 1;
    while (value >= 0x80) {
        value >>= 7;
        ++n;
    }
    return n;
}

} // namespace geonet
