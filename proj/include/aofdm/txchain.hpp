#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "aofdm/common.hpp"
#include "aofdm/crc32.hpp"
#include "aofdm/fft.hpp"
#include "aofdm/grid.hpp"
#include "aofdm/interleave.hpp"
#include "aofdm/ldpc.hpp"
#include "aofdm/qam.hpp"

namespace aofdm {

// Transport block wire format (one LDPC information block, 162 bytes):
//   [seq u32 LE][len u16 LE][payload 152 B, zero padded][crc32 u32 LE]
// len counts the used payload bytes; the CRC covers everything before it.
// The payload stream itself starts with a u64 LE total byte count, so the
// receiver knows how many blocks carry real data.
inline constexpr int kBlockBytes = 162;  // ldpc k = 1296 bits
inline constexpr int kBlockOverhead = 4 + 2 + 4;
inline constexpr int kBlockCapacity = kBlockBytes - kBlockOverhead;
inline constexpr int kStreamHeaderBytes = 8;
inline constexpr double kTxTargetRms = 1.0;

struct TransportBlock {
    uint32_t seq = 0;
    uint16_t len = 0;                   // used payload bytes
    std::vector<uint8_t> payload;       // kBlockCapacity bytes, zero padded
    uint32_t crc = 0;

    std::vector<uint8_t> header_and_payload() const {
        std::vector<uint8_t> out;
        out.reserve(kBlockBytes - 4);
        for (int i = 0; i < 4; ++i) out.push_back((seq >> (8 * i)) & 0xFF);
        for (int i = 0; i < 2; ++i) out.push_back((len >> (8 * i)) & 0xFF);
        out.insert(out.end(), payload.begin(), payload.end());
        return out;
    }
};

inline void crc_attach(TransportBlock& block) {
    block.crc = crc32(block.header_and_payload());
}

inline bool crc_check(const TransportBlock& block) {
    return crc32(block.header_and_payload()) == block.crc;
}

inline std::vector<uint8_t> serialize_block(const TransportBlock& block) {
    std::vector<uint8_t> out = block.header_and_payload();
    for (int i = 0; i < 4; ++i) out.push_back((block.crc >> (8 * i)) & 0xFF);
    return out;
}

inline TransportBlock parse_block(const uint8_t* bytes) {
    TransportBlock b;
    b.seq = 0;
    for (int i = 0; i < 4; ++i) b.seq |= static_cast<uint32_t>(bytes[i]) << (8 * i);
    b.len = 0;
    for (int i = 0; i < 2; ++i) b.len |= static_cast<uint16_t>(bytes[4 + i]) << (8 * i);
    b.payload.assign(bytes + 6, bytes + 6 + kBlockCapacity);
    b.crc = 0;
    for (int i = 0; i < 4; ++i)
        b.crc |= static_cast<uint32_t>(bytes[kBlockBytes - 4 + i]) << (8 * i);
    return b;
}

// Prefix the payload with its length, chop into block-sized chunks and
// attach sequence numbers + CRC. Reassembling de-padded blocks in order
// reproduces the input exactly.
inline std::vector<TransportBlock> segment_payload(const std::vector<uint8_t>& payload) {
    if (payload.empty()) throw std::invalid_argument("segment_payload: empty payload");
    std::vector<uint8_t> stream;
    stream.reserve(payload.size() + kStreamHeaderBytes);
    const uint64_t total = payload.size();
    for (int i = 0; i < 8; ++i) stream.push_back((total >> (8 * i)) & 0xFF);
    stream.insert(stream.end(), payload.begin(), payload.end());

    const std::size_t n_blocks = (stream.size() + kBlockCapacity - 1) / kBlockCapacity;
    std::vector<TransportBlock> blocks(n_blocks);
    for (std::size_t i = 0; i < n_blocks; ++i) {
        auto& b = blocks[i];
        b.seq = static_cast<uint32_t>(i);
        const std::size_t off = i * kBlockCapacity;
        const std::size_t take = std::min<std::size_t>(kBlockCapacity, stream.size() - off);
        b.len = static_cast<uint16_t>(take);
        b.payload.assign(stream.begin() + off, stream.begin() + off + take);
        b.payload.resize(kBlockCapacity, 0);
        crc_attach(b);
    }
    return blocks;
}

inline uint64_t stream_blocks_needed(uint64_t payload_bytes) {
    return (payload_bytes + kStreamHeaderBytes + kBlockCapacity - 1) / kBlockCapacity;
}

inline std::vector<uint8_t> bytes_to_bits(const std::vector<uint8_t>& bytes) {
    std::vector<uint8_t> bits;
    bits.reserve(bytes.size() * 8);
    for (uint8_t byte : bytes)
        for (int b = 7; b >= 0; --b) bits.push_back((byte >> b) & 1);
    return bits;
}

inline std::vector<uint8_t> bits_to_bytes(const std::vector<uint8_t>& bits) {
    if (bits.size() % 8 != 0) throw std::invalid_argument("bits_to_bytes: length not byte aligned");
    std::vector<uint8_t> bytes(bits.size() / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        bytes[i / 8] = static_cast<uint8_t>((bytes[i / 8] << 1) | bits[i]);
    return bytes;
}

// Transport blocks -> (optionally LDPC coded) bit stream.
inline std::vector<uint8_t> encode_blocks(const std::vector<TransportBlock>& blocks,
                                          const FrameConfig& cfg, const ldpc::Code& code) {
    std::vector<uint8_t> out;
    for (const auto& b : blocks) {
        const auto bits = bytes_to_bits(serialize_block(b));
        if (cfg.ldpc_rate.coded) {
            const auto cw = code.encode(bits);
            out.insert(out.end(), cw.begin(), cw.end());
        } else {
            out.insert(out.end(), bits.begin(), bits.end());
        }
    }
    return out;
}

// OFDM modulation of one frame: fill the grid (data cells in scan order:
// symbol index ascending, occupied subcarrier ascending), orthonormal IFFT
// per symbol, prepend the cyclic prefix.
inline BasebandSignal ofdm_modulate(const cvec& data_symbols,
                                    const std::vector<cvec>& pilots, const FrameConfig& cfg,
                                    const PilotLayout& layout) {
    const std::size_t want =
        static_cast<std::size_t>(cfg.data_symbols_per_frame()) * layout.data_subcarriers.size();
    if (data_symbols.size() != want)
        throw std::invalid_argument("ofdm_modulate: data cell count mismatch (want " +
                                    std::to_string(want) + ", got " +
                                    std::to_string(data_symbols.size()) + ")");
    Fft fft(cfg.fft_size);
    BasebandSignal out;
    out.rate = cfg.baseband_rate;
    out.samples.resize(static_cast<std::size_t>(cfg.n_symbols_per_frame) * cfg.symbol_len());

    cvec sym(cfg.fft_size);
    std::size_t cursor = 0;
    for (int s = 0; s < cfg.n_symbols_per_frame; ++s) {
        std::fill(sym.begin(), sym.end(), cplx{0.0, 0.0});
        const auto& pcells = layout.pilot_subcarriers(s);
        for (std::size_t i = 0; i < pcells.size(); ++i)
            sym[bin_of(pcells[i], cfg.fft_size)] = pilots[s][i];
        if (!layout.is_block_pilot_symbol(s)) {
            for (int k : layout.data_subcarriers)
                sym[bin_of(k, cfg.fft_size)] = data_symbols[cursor++];
        }
        fft.inverse(sym);
        cplx* dst = out.samples.data() + static_cast<std::size_t>(s) * cfg.symbol_len();
        for (int i = 0; i < cfg.cp_len; ++i) dst[i] = sym[cfg.fft_size - cfg.cp_len + i];
        for (int i = 0; i < cfg.fft_size; ++i) dst[cfg.cp_len + i] = sym[i];
    }
    return out;
}

struct TxResult {
    BasebandSignal bb;
    int n_frames = 0;
    cvec data_cells;                  // transmitted constellation points, grid scan order
    std::vector<uint8_t> coded_bits;  // post-padding stream feeding the mapper
    double papr_db = 0.0;
    double scale = 1.0;               // applied to hit kTxTargetRms
};

// Full transmitter: segmentation, CRC, LDPC, bit interleaving, QAM, symbol
// interleaving, OFDM with pilot insertion, RMS normalization.
inline TxResult tx_pipeline(const std::vector<uint8_t>& payload, const FrameConfig& cfg,
                            uint64_t pilot_seed, const ldpc::Code& code = ldpc::Code()) {
    cfg.validate();
    const auto layout = layout_pilots(cfg);
    const auto pilots = pilot_values(layout, pilot_seed);

    auto blocks = segment_payload(payload);
    std::vector<uint8_t> stream = encode_blocks(blocks, cfg, code);

    const std::size_t n_data_sc = layout.data_subcarriers.size();
    const std::size_t bits_per_data_symbol = n_data_sc * cfg.modulation_order;
    const std::size_t bits_per_frame = bits_per_data_symbol * cfg.data_symbols_per_frame();
    const std::size_t n_frames = (stream.size() + bits_per_frame - 1) / bits_per_frame;
    stream.resize(n_frames * bits_per_frame, 0);

    // bit interleaving, one data symbol's worth of bits at a time
    std::vector<uint8_t> interleaved;
    interleaved.reserve(stream.size());
    std::vector<uint8_t> chunk(bits_per_data_symbol);
    for (std::size_t off = 0; off < stream.size(); off += bits_per_data_symbol) {
        chunk.assign(stream.begin() + off, stream.begin() + off + bits_per_data_symbol);
        const auto il = bit_interleave(chunk, cfg.modulation_order);
        interleaved.insert(interleaved.end(), il.begin(), il.end());
    }

    cvec symbols = qam::map(interleaved, cfg.modulation_order);

    // symbol interleaving over each block-pilot period
    const std::size_t cells_per_period = n_data_sc * cfg.block_distance;
    cvec cells;
    cells.reserve(symbols.size());
    cvec period(cells_per_period);
    for (std::size_t off = 0; off < symbols.size(); off += cells_per_period) {
        period.assign(symbols.begin() + off, symbols.begin() + off + cells_per_period);
        const auto il = symbol_interleave(period, cfg.block_distance);
        cells.insert(cells.end(), il.begin(), il.end());
    }

    TxResult res;
    res.n_frames = static_cast<int>(n_frames);
    res.data_cells = cells;
    res.coded_bits = stream;
    res.bb.rate = cfg.baseband_rate;

    const std::size_t cells_per_frame = n_data_sc * cfg.data_symbols_per_frame();
    cvec frame_cells(cells_per_frame);
    for (std::size_t f = 0; f < n_frames; ++f) {
        frame_cells.assign(cells.begin() + f * cells_per_frame,
                           cells.begin() + (f + 1) * cells_per_frame);
        const auto frame = ofdm_modulate(frame_cells, pilots, cfg, layout);
        res.bb.samples.insert(res.bb.samples.end(), frame.samples.begin(),
                              frame.samples.end());
    }

    const double rms = std::sqrt(mean_power(res.bb.samples));
    double peak = 0.0;
    for (const auto& s : res.bb.samples) peak = std::max(peak, std::norm(s));
    res.papr_db = db_from_power(peak / (rms * rms));
    res.scale = kTxTargetRms / rms;
    for (auto& s : res.bb.samples) s *= res.scale;
    return res;
}

}  // namespace aofdm
