#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "aofdm/chanest.hpp"
#include "aofdm/common.hpp"
#include "aofdm/grid.hpp"
#include "aofdm/interleave.hpp"
#include "aofdm/ldpc.hpp"
#include "aofdm/mrc.hpp"
#include "aofdm/qam.hpp"
#include "aofdm/sync.hpp"
#include "aofdm/txchain.hpp"

namespace aofdm {

struct RxOptions {
    double sync_threshold = 0.15;
    int timing_backoff = -1;  // FFT-window pull-in, samples; -1 = cp_len/4
    bool weighted_mrc = true;
    bool keep_cells = true;   // retain equalized cells / hard bits for metrics
    int max_ldpc_iters = 50;
    double minsum_alpha = 0.75;
};

struct GapEntry {
    uint64_t block_seq = 0;
    uint64_t payload_offset = 0;
    uint64_t length = 0;
};

struct FrameLog {
    int frame = 0;
    double fine_cfo_hz = 0.0;  // mean over elements
    double fine_sto = 0.0;
    double mean_ldpc_iters = 0.0;
};

struct RxResult {
    std::vector<uint8_t> payload;
    std::vector<GapEntry> gaps;
    SyncEstimate sync;
    std::vector<double> element_snr_db;
    cvec equalized_cells;             // grid scan order, matches TxResult::data_cells
    std::vector<uint8_t> coded_hard;  // hard decisions over the decoded codeword region
    std::vector<uint8_t> info_bits;   // serialized decoded transport blocks
    uint64_t blocks_total = 0;
    uint64_t blocks_failed = 0;
    int n_frames = 0;
    double mean_ldpc_iters = 0.0;
    bool all_converged = true;
    std::vector<FrameLog> frames;
};

namespace detail {

// Pilot-match score of a candidate frame start: demodulate the would-be
// first symbol and measure how coherent Y * conj(P) is across neighboring
// occupied subcarriers. The true block pilot yields the (smooth) channel
// response; a data symbol decorrelates.
inline double frame_start_score(const cvec& samples, const FrameConfig& cfg,
                                const PilotLayout& layout, const cvec& pilot0, int64_t start,
                                int backoff, Fft& fft) {
    const int64_t base = start + cfg.cp_len - backoff;
    if (base < 0 || base + cfg.fft_size > static_cast<int64_t>(samples.size())) return -1.0;
    cvec sym(samples.begin() + base, samples.begin() + base + cfg.fft_size);
    fft.forward(sym);
    cplx num{0.0, 0.0};
    double den = 0.0;
    cplx prev{0.0, 0.0};
    for (std::size_t i = 0; i < layout.occupied.size(); ++i) {
        const cplx g = sym[bin_of(layout.occupied[i], cfg.fft_size)] * std::conj(pilot0[i]);
        if (i > 0) num += g * std::conj(prev);
        den += std::norm(g);
        prev = g;
    }
    return den > 0 ? std::abs(num) / den : -1.0;
}

// Resolve the symbol-period ambiguity of the CP metric: test candidate
// frame starts one symbol apart against the known first block pilot.
inline int64_t locate_frame_start(const std::vector<cvec>& elems, const FrameConfig& cfg,
                                  const PilotLayout& layout, const std::vector<cvec>& pilots,
                                  int64_t boundary, int backoff) {
    Fft fft(cfg.fft_size);
    const int64_t sym = cfg.symbol_len();
    std::size_t min_len = elems[0].size();
    for (const auto& e : elems) min_len = std::min(min_len, e.size());
    const std::size_t n_probe = std::min<std::size_t>(elems.size(), 4);

    int64_t best_start = boundary;
    double best_score = -1.0;
    for (int m = -1; m <= cfg.block_period(); ++m) {
        const int64_t start = boundary - m * sym;
        if (start < 0 || start + cfg.frame_len() > static_cast<int64_t>(min_len)) continue;
        double score = 0.0;
        for (std::size_t e = 0; e < n_probe; ++e)
            score += frame_start_score(elems[e], cfg, layout, pilots[0], start, backoff, fft);
        if (score > best_score) {
            best_score = score;
            best_start = start;
        }
    }
    return best_start;
}

}  // namespace detail

// Full 16-channel receiver: coarse CP sync, per-element OFDM demodulation,
// fine CFO/STO correction, LS channel estimation, MRC, soft demapping,
// LDPC/CRC decoding, payload reassembly.
inline RxResult rx_pipeline(const std::vector<BasebandSignal>& rx_elems, const FrameConfig& cfg,
                            uint64_t pilot_seed, const RxOptions& opt = {},
                            const ldpc::Code& code = ldpc::Code()) {
    cfg.validate();
    if (rx_elems.empty()) throw std::invalid_argument("rx_pipeline: no receive elements");
    for (const auto& e : rx_elems)
        if (std::abs(e.rate - cfg.baseband_rate) > 1e-6)
            throw std::invalid_argument("rx_pipeline: capture rate does not match config");

    const auto layout = layout_pilots(cfg);
    const auto pilots = pilot_values(layout, pilot_seed);
    const int backoff = opt.timing_backoff >= 0 ? opt.timing_backoff : cfg.cp_len / 4;

    RxResult res;

    // coarse sync, averaged across symbols and elements
    std::vector<const cvec*> views;
    views.reserve(rx_elems.size());
    for (const auto& e : rx_elems) views.push_back(&e.samples);
    res.sync = coarse_sync(views, cfg);
    if (res.sync.confidence < opt.sync_threshold)
        throw SyncError("sync not found: CP correlation confidence " +
                        std::to_string(res.sync.confidence) + " below threshold");

    // coarse CFO removal in the time domain
    std::vector<cvec> elems(rx_elems.size());
    for (std::size_t e = 0; e < rx_elems.size(); ++e) {
        elems[e] = rx_elems[e].samples;
        derotate(elems[e], res.sync.coarse_cfo, cfg.baseband_rate);
    }

    const int64_t start =
        detail::locate_frame_start(elems, cfg, layout, pilots, res.sync.coarse_sto, backoff);
    res.sync.coarse_sto = start;

    std::size_t min_len = elems[0].size();
    for (const auto& e : elems) min_len = std::min(min_len, e.size());
    res.n_frames = static_cast<int>((static_cast<int64_t>(min_len) - start) / cfg.frame_len());
    if (res.n_frames < 1) throw SyncError("sync not found: no complete frame after offset");

    const std::size_t n_el = elems.size();
    std::vector<double> el_gain(n_el, 0.0), el_noise(n_el, 0.0);

    cvec all_cells;
    std::vector<double> all_vars;
    double fine_cfo_acc = 0.0, fine_sto_acc = 0.0;

    std::vector<ResourceGrid> grids(n_el);
    std::vector<ChannelEstimate> ests(n_el);
    for (int f = 0; f < res.n_frames; ++f) {
        const int64_t fstart = start + static_cast<int64_t>(f) * cfg.frame_len();
        FrameLog log;
        log.frame = f;
        for (std::size_t e = 0; e < n_el; ++e) {
            grids[e] = ofdm_demodulate(elems[e], cfg, fstart, backoff);
            const double fcfo = fine_cfo_estimate(grids[e], layout, pilots, cfg);
            const double fsto = fine_sto_estimate(grids[e], layout, pilots, cfg);
            apply_fine_correction(grids[e], fcfo, fsto, layout, cfg);
            ests[e] = estimate_channel(grids[e], layout, pilots, cfg);
            log.fine_cfo_hz += fcfo / n_el;
            log.fine_sto += (fsto - backoff) / n_el;

            double g = 0.0;
            for (const auto& h : ests[e].gains) g += std::norm(h);
            el_gain[e] += g / ests[e].gains.size();
            el_noise[e] += ests[e].noise_var;
        }
        fine_cfo_acc += log.fine_cfo_hz;
        fine_sto_acc += log.fine_sto;

        std::vector<const ResourceGrid*> gptr;
        std::vector<const ChannelEstimate*> eptr;
        for (std::size_t e = 0; e < n_el; ++e) {
            gptr.push_back(&grids[e]);
            eptr.push_back(&ests[e]);
        }
        auto combined = mrc_combine(gptr, eptr, layout, cfg, opt.weighted_mrc);
        all_cells.insert(all_cells.end(), combined.symbols.begin(), combined.symbols.end());
        all_vars.insert(all_vars.end(), combined.noise_var.begin(), combined.noise_var.end());
        res.frames.push_back(log);
    }
    res.sync.fine_cfo = fine_cfo_acc / res.n_frames;
    res.sync.fine_sto = fine_sto_acc / res.n_frames;
    for (std::size_t e = 0; e < n_el; ++e)
        res.element_snr_db.push_back(db_from_power(el_gain[e] / el_noise[e]));

    if (opt.keep_cells) res.equalized_cells = all_cells;

    // symbol deinterleave per block-pilot period, then demap and bit
    // deinterleave per data symbol
    const std::size_t n_data_sc = layout.data_subcarriers.size();
    const std::size_t cells_per_period = n_data_sc * cfg.block_distance;
    std::vector<double> llrs;
    llrs.reserve(all_cells.size() * cfg.modulation_order);
    cvec period_cells(cells_per_period);
    std::vector<double> period_vars(cells_per_period);
    for (std::size_t off = 0; off < all_cells.size(); off += cells_per_period) {
        period_cells.assign(all_cells.begin() + off, all_cells.begin() + off + cells_per_period);
        period_vars.assign(all_vars.begin() + off, all_vars.begin() + off + cells_per_period);
        const auto cells = symbol_deinterleave(period_cells, cfg.block_distance);
        const auto vars = symbol_deinterleave(period_vars, cfg.block_distance);
        for (std::size_t s = 0; s < cells.size(); s += n_data_sc) {
            const cvec chunk(cells.begin() + s, cells.begin() + s + n_data_sc);
            const std::vector<double> vchunk(vars.begin() + s, vars.begin() + s + n_data_sc);
            const auto chunk_llrs =
                bit_deinterleave(qam::demap(chunk, cfg.modulation_order, vchunk),
                                 cfg.modulation_order);
            llrs.insert(llrs.end(), chunk_llrs.begin(), chunk_llrs.end());
        }
    }

    // decode the leading blocks until the stream header says we have the
    // whole payload
    const std::size_t unit_bits = cfg.ldpc_rate.coded ? static_cast<std::size_t>(code.n())
                                                      : static_cast<std::size_t>(code.k());
    uint64_t blocks_expected = 0;
    uint64_t stream_size = 0;  // header + payload bytes
    std::vector<uint8_t> stream;
    std::vector<TransportBlock> blocks;
    double iter_acc = 0.0;
    uint64_t iter_count = 0;

    for (uint64_t bi = 0;; ++bi) {
        if (blocks_expected > 0 && bi >= blocks_expected) break;
        const std::size_t off = bi * unit_bits;
        if (off + unit_bits > llrs.size()) {
            if (blocks_expected == 0)
                throw DecodeError("decode failed: capture ended before stream header");
            throw DecodeError("decode failed: capture too short for payload (" +
                              std::to_string(bi) + " of " + std::to_string(blocks_expected) +
                              " blocks)");
        }
        std::vector<uint8_t> block_bits;
        if (cfg.ldpc_rate.coded) {
            const std::vector<double> cw_llrs(llrs.begin() + off, llrs.begin() + off + unit_bits);
            auto dec = code.decode(cw_llrs, opt.max_ldpc_iters, opt.minsum_alpha);
            iter_acc += dec.iterations;
            ++iter_count;
            if (!dec.converged) res.all_converged = false;
            block_bits = std::move(dec.info);
        } else {
            block_bits.resize(unit_bits);
            for (std::size_t i = 0; i < unit_bits; ++i)
                block_bits[i] = llrs[off + i] < 0.0 ? 1 : 0;
        }
        const auto bytes = bits_to_bytes(block_bits);
        TransportBlock blk = parse_block(bytes.data());
        const bool ok = crc_check(blk) && blk.seq == bi;
        if (bi == 0) {
            if (!ok) throw DecodeError("decode failed: stream header block unrecoverable");
            uint64_t total = 0;
            for (int i = 0; i < 8; ++i)
                total |= static_cast<uint64_t>(blk.payload[i]) << (8 * i);
            stream_size = kStreamHeaderBytes + total;
            blocks_expected = stream_blocks_needed(total);
            stream.reserve(stream_size);
        }
        if (!ok) {
            ++res.blocks_failed;
            blk.len = static_cast<uint16_t>(std::min<uint64_t>(
                kBlockCapacity, stream_size - std::min<uint64_t>(stream_size, bi * kBlockCapacity)));
            std::fill(blk.payload.begin(), blk.payload.end(), 0);
            GapEntry gap;
            gap.block_seq = bi;
            const uint64_t soff = bi * kBlockCapacity;
            gap.payload_offset = soff > kStreamHeaderBytes ? soff - kStreamHeaderBytes : 0;
            gap.length = blk.len;
            res.gaps.push_back(gap);
        }
        stream.insert(stream.end(), blk.payload.begin(), blk.payload.begin() + blk.len);
        if (opt.keep_cells) {
            const auto bits = bytes_to_bits(serialize_block(blk));
            res.info_bits.insert(res.info_bits.end(), bits.begin(), bits.end());
        }
        ++res.blocks_total;
    }
    res.mean_ldpc_iters = iter_count > 0 ? iter_acc / iter_count : 0.0;

    if (stream.size() < stream_size) stream.resize(stream_size, 0);
    res.payload.assign(stream.begin() + kStreamHeaderBytes, stream.begin() + stream_size);

    if (opt.keep_cells) {
        const std::size_t hard_bits = blocks_expected * unit_bits;
        res.coded_hard.resize(std::min(hard_bits, llrs.size()));
        for (std::size_t i = 0; i < res.coded_hard.size(); ++i)
            res.coded_hard[i] = llrs[i] < 0.0 ? 1 : 0;
    }
    return res;
}

}  // namespace aofdm
