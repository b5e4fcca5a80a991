#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "aofdm/common.hpp"

namespace aofdm::iq {

// Waveform container: little-endian header, then 32-bit float samples
// (interleaved I,Q for complex data, a single stream for real passband).
//
//   offset size field
//   0      4    magic "AOFM"
//   4      2    version (u16, currently 1)
//   6      8    sample rate in Hz (u64)
//   14     1    complex flag (u8: 1 = complex, 0 = real)
//   15     8    samples per channel (u64)
//   [23    2    channel count (u16) -- multichannel files only]
//
// Multichannel files store each channel as one consecutive block.
inline constexpr std::array<char, 4> kMagic{'A', 'O', 'F', 'M'};
inline constexpr uint16_t kVersion = 1;
inline constexpr uint64_t kHeaderBytes = 23;
inline constexpr uint64_t kMultiHeaderBytes = 25;

inline uint64_t file_size(uint64_t n_samples, bool is_complex) {
    return kHeaderBytes + n_samples * (is_complex ? 8 : 4);
}
inline uint64_t multichannel_file_size(uint64_t n_channels, uint64_t n_samples,
                                       bool is_complex = true) {
    return kMultiHeaderBytes + n_channels * n_samples * (is_complex ? 8 : 4);
}

namespace detail {

template <typename T>
void put_le(std::string& out, T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i)
        out.push_back(static_cast<char>((static_cast<uint64_t>(v) >> (8 * i)) & 0xFF));
}

template <typename T>
T get_le(const uint8_t* p) {
    uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
    return static_cast<T>(v);
}

inline void put_f32(std::string& out, float f) {
    uint32_t u;
    std::memcpy(&u, &f, 4);
    put_le(out, u);
}

inline float get_f32(const uint8_t* p) {
    const uint32_t u = get_le<uint32_t>(p);
    float f;
    std::memcpy(&f, &u, 4);
    return f;
}

inline std::string header(uint64_t rate_hz, bool is_complex, uint64_t count) {
    std::string h;
    h.append(kMagic.data(), 4);
    put_le<uint16_t>(h, kVersion);
    put_le<uint64_t>(h, rate_hz);
    h.push_back(is_complex ? 1 : 0);
    put_le<uint64_t>(h, count);
    return h;
}

struct ParsedHeader {
    uint64_t rate = 0;
    bool is_complex = false;
    uint64_t count = 0;
};

inline ParsedHeader parse_header(const std::vector<uint8_t>& buf, const std::string& path) {
    if (buf.size() < kHeaderBytes) throw IoError("iq: file too short for header: " + path);
    if (std::memcmp(buf.data(), kMagic.data(), 4) != 0)
        throw IoError("iq: bad magic in " + path);
    const uint16_t ver = get_le<uint16_t>(buf.data() + 4);
    if (ver != kVersion)
        throw IoError("iq: unsupported version " + std::to_string(ver) + " in " + path);
    ParsedHeader h;
    h.rate = get_le<uint64_t>(buf.data() + 6);
    h.is_complex = buf[14] != 0;
    h.count = get_le<uint64_t>(buf.data() + 15);
    return h;
}

inline std::vector<uint8_t> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("iq: cannot open " + path);
    std::vector<uint8_t> buf((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
    return buf;
}

inline void spit(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("iq: cannot create " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("iq: write failed for " + path);
}

}  // namespace detail

inline void write(const std::string& path, const BasebandSignal& sig) {
    std::string bytes =
        detail::header(static_cast<uint64_t>(sig.rate + 0.5), true, sig.samples.size());
    bytes.reserve(bytes.size() + sig.samples.size() * 8);
    for (const auto& s : sig.samples) {
        detail::put_f32(bytes, static_cast<float>(s.real()));
        detail::put_f32(bytes, static_cast<float>(s.imag()));
    }
    detail::spit(path, bytes);
}

inline void write(const std::string& path, const PassbandSignal& sig) {
    std::string bytes =
        detail::header(static_cast<uint64_t>(sig.rate + 0.5), false, sig.samples.size());
    bytes.reserve(bytes.size() + sig.samples.size() * 4);
    for (double s : sig.samples) detail::put_f32(bytes, static_cast<float>(s));
    detail::spit(path, bytes);
}

inline BasebandSignal read_complex(const std::string& path) {
    const auto buf = detail::slurp(path);
    const auto h = detail::parse_header(buf, path);
    if (!h.is_complex) throw IoError("iq: expected complex samples in " + path);
    const uint64_t need = kHeaderBytes + h.count * 8;
    if (buf.size() < need)
        throw IoError("iq: truncated " + path + ": header promises " + std::to_string(h.count) +
                      " samples, payload holds " +
                      std::to_string((buf.size() - kHeaderBytes) / 8));
    BasebandSignal sig;
    sig.rate = static_cast<double>(h.rate);
    sig.samples.resize(h.count);
    for (uint64_t i = 0; i < h.count; ++i) {
        const uint8_t* p = buf.data() + kHeaderBytes + i * 8;
        sig.samples[i] = {detail::get_f32(p), detail::get_f32(p + 4)};
    }
    return sig;
}

inline PassbandSignal read_real(const std::string& path) {
    const auto buf = detail::slurp(path);
    const auto h = detail::parse_header(buf, path);
    if (h.is_complex) throw IoError("iq: expected real samples in " + path);
    const uint64_t need = kHeaderBytes + h.count * 4;
    if (buf.size() < need)
        throw IoError("iq: truncated " + path + ": header promises " + std::to_string(h.count) +
                      " samples, payload holds " +
                      std::to_string((buf.size() - kHeaderBytes) / 4));
    PassbandSignal sig;
    sig.rate = static_cast<double>(h.rate);
    sig.samples.resize(h.count);
    for (uint64_t i = 0; i < h.count; ++i)
        sig.samples[i] = detail::get_f32(buf.data() + kHeaderBytes + i * 4);
    return sig;
}

// Multichannel capture. Channels must share one rate; they are truncated to
// the shortest channel so the header's per-channel count is exact.
inline void write_multichannel(const std::string& path,
                               const std::vector<BasebandSignal>& channels) {
    if (channels.empty()) throw std::invalid_argument("iq: no channels to write");
    uint64_t count = channels[0].samples.size();
    for (const auto& ch : channels) {
        if (ch.rate != channels[0].rate)
            throw std::invalid_argument("iq: channel rates differ");
        count = std::min<uint64_t>(count, ch.samples.size());
    }
    std::string bytes =
        detail::header(static_cast<uint64_t>(channels[0].rate + 0.5), true, count);
    detail::put_le<uint16_t>(bytes, static_cast<uint16_t>(channels.size()));
    bytes.reserve(bytes.size() + channels.size() * count * 8);
    for (const auto& ch : channels)
        for (uint64_t i = 0; i < count; ++i) {
            detail::put_f32(bytes, static_cast<float>(ch.samples[i].real()));
            detail::put_f32(bytes, static_cast<float>(ch.samples[i].imag()));
        }
    detail::spit(path, bytes);
}

inline std::vector<BasebandSignal> read_multichannel(const std::string& path) {
    const auto buf = detail::slurp(path);
    const auto h = detail::parse_header(buf, path);
    if (!h.is_complex) throw IoError("iq: expected complex capture in " + path);
    if (buf.size() < kMultiHeaderBytes)
        throw IoError("iq: file too short for multichannel header: " + path);
    const uint16_t n_ch = detail::get_le<uint16_t>(buf.data() + kHeaderBytes);
    if (n_ch == 0) throw IoError("iq: zero channels in " + path);
    const uint64_t have = (buf.size() - kMultiHeaderBytes) / 8;
    const uint64_t need = h.count * n_ch;
    if (have < need)
        throw IoError("iq: truncated " + path + ": header promises " + std::to_string(n_ch) +
                      " channels x " + std::to_string(h.count) + " samples (" +
                      std::to_string(need) + " total), payload holds " + std::to_string(have));
    std::vector<BasebandSignal> out(n_ch);
    for (uint16_t c = 0; c < n_ch; ++c) {
        out[c].rate = static_cast<double>(h.rate);
        out[c].samples.resize(h.count);
        for (uint64_t i = 0; i < h.count; ++i) {
            const uint8_t* p = buf.data() + kMultiHeaderBytes + (c * h.count + i) * 8;
            out[c].samples[i] = {detail::get_f32(p), detail::get_f32(p + 4)};
        }
    }
    return out;
}

}  // namespace aofdm::iq
