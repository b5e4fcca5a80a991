#pragma once

#include <array>
#include <cstdint>
#include <cstddef>

namespace aofdm {

// CRC-32 (IEEE 802.3): polynomial 0x04C11DB7 reflected, init 0xFFFFFFFF,
// final XOR 0xFFFFFFFF. Check value: crc32("123456789") == 0xCBF43926.
namespace detail {
inline const std::array<uint32_t, 256>& crc32_table() {
    static const std::array<uint32_t, 256> table = [] {
        std::array<uint32_t, 256> t{};
        for (uint32_t i = 0; i < 256; ++i) {
            uint32_t c = i;
            for (int b = 0; b < 8; ++b)
                c = (c & 1u) ? (0xEDB88320u ^ (c >> 1)) : (c >> 1);
            t[i] = c;
        }
        return t;
    }();
    return table;
}
}  // namespace detail

inline uint32_t crc32(const uint8_t* data, std::size_t len, uint32_t crc = 0) {
    const auto& t = detail::crc32_table();
    crc ^= 0xFFFFFFFFu;
    for (std::size_t i = 0; i < len; ++i)
        crc = t[(crc ^ data[i]) & 0xFFu] ^ (crc >> 8);
    return crc ^ 0xFFFFFFFFu;
}

template <typename Container>
uint32_t crc32(const Container& bytes) {
    return crc32(reinterpret_cast<const uint8_t*>(bytes.data()), bytes.size());
}

}  // namespace aofdm
