#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aofdm/common.hpp"
#include "aofdm/rng.hpp"

namespace aofdm {

// Code rate as an exact rational, or uncoded (pass-through).
struct CodeRate {
    bool coded = true;
    unsigned num = 2;
    unsigned den = 3;

    double value() const { return coded ? static_cast<double>(num) / den : 1.0; }
    bool operator==(const CodeRate&) const = default;

    std::string str() const {
        return coded ? std::to_string(num) + "/" + std::to_string(den) : "uncoded";
    }
};

struct FrameConfig {
    int fft_size = 4096;
    int cp_len = 512;
    int block_distance = 16;  // data symbols between consecutive block pilots
    int comb_distance = 32;   // occupied-subcarrier stride between comb pilots
    int n_data_subcarriers = 3072;
    int modulation_order = 6;  // bits per QAM symbol: 6 (64-QAM) or 8 (256-QAM)
    CodeRate ldpc_rate{};
    double carrier_freq = 3.75e6;
    double baseband_rate = 2.5e6;
    double dac_rate = 100e6;
    double adc_rate = 120e6;
    int n_rx_elements = 16;
    int n_symbols_per_frame = 51;

    double subcarrier_spacing() const { return baseband_rate / fft_size; }
    double symbol_duration() const { return (fft_size + cp_len) / baseband_rate; }
    int symbol_len() const { return fft_size + cp_len; }
    int block_period() const { return block_distance + 1; }
    int n_periods_per_frame() const { return n_symbols_per_frame / block_period(); }
    int frame_len() const { return n_symbols_per_frame * symbol_len(); }
    int data_symbols_per_frame() const { return n_periods_per_frame() * block_distance; }

    // Occupied band width (data + comb pilots): smallest n with
    // n - ceil(n/C) = n_data, i.e. comb pilots sit on every C-th occupied
    // subcarrier and the remaining occupied cells are data.
    int n_occupied() const {
        int n = n_data_subcarriers;
        for (;;) {
            const int pilots = (n + comb_distance - 1) / comb_distance;
            if (n - pilots == n_data_subcarriers) return n;
            n = n_data_subcarriers + pilots;
        }
    }
    int n_comb_pilots() const { return n_occupied() - n_data_subcarriers; }

    int up_factor() const { return static_cast<int>(dac_rate / baseband_rate + 0.5); }
    int down_factor() const { return static_cast<int>(adc_rate / baseband_rate + 0.5); }

    // Rate hook consumed by the metrics module.
    double data_cells_per_second() const {
        return n_data_subcarriers *
               (static_cast<double>(block_distance) / block_period()) / symbol_duration();
    }

    void validate() const;
    bool operator==(const FrameConfig&) const = default;
};

namespace detail {
inline bool integer_ratio(double hi, double lo) {
    if (lo <= 0.0) return false;
    const double r = hi / lo;
    return std::abs(r - std::round(r)) < 1e-9 && r >= 1.0;
}
}  // namespace detail

inline void FrameConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
    if (fft_size <= 0 || (fft_size & (fft_size - 1)) != 0) fail("fft_size must be a power of two");
    if (cp_len <= 0) fail("cp_len must be positive");
    if (cp_len >= fft_size) fail("cp_len must be smaller than fft_size");
    if (block_distance < 1) fail("block_distance must be >= 1");
    if (comb_distance < 2) fail("comb_distance must be >= 2");
    if (n_data_subcarriers < 1) fail("n_data_subcarriers must be >= 1");
    if (modulation_order != 6 && modulation_order != 8)
        fail("modulation_order must be 6 or 8");
    if (ldpc_rate.coded && !(ldpc_rate.num == 2 && ldpc_rate.den == 3))
        fail("ldpc_rate must be 2/3 or uncoded");
    if (carrier_freq <= 0 || baseband_rate <= 0 || dac_rate <= 0 || adc_rate <= 0)
        fail("rates and carrier frequency must be positive");
    if (!detail::integer_ratio(dac_rate, baseband_rate))
        fail("dac_rate must be an integer multiple of baseband_rate");
    if (!detail::integer_ratio(adc_rate, baseband_rate))
        fail("adc_rate must be an integer multiple of baseband_rate");
    if (dac_rate < 2.0 * (carrier_freq + baseband_rate / 2))
        fail("dac_rate too low for carrier (aliasing)");
    if (adc_rate < 2.0 * (carrier_freq + baseband_rate / 2))
        fail("adc_rate too low for carrier (aliasing)");
    if (n_rx_elements < 1) fail("n_rx_elements must be >= 1");
    if (n_symbols_per_frame < block_period() || n_symbols_per_frame % block_period() != 0)
        fail("n_symbols_per_frame must be a positive multiple of block_distance+1");
    // Occupied band (plus the nulled DC bin) must fit inside the FFT.
    const int occ = n_occupied();
    const int n_pos = (occ + 1) / 2;
    const int n_neg = occ / 2;
    if (n_pos > fft_size / 2 - 1 || n_neg > fft_size / 2)
        fail("occupied band does not fit in fft_size");
}

enum class CellRole : uint8_t { Null = 0, Data = 1, CombPilot = 2, BlockPilot = 3 };

// Frequency indices are signed: k in [-N/2, N/2), DC = 0. FFT bin = k >= 0 ?
// k : N + k. Occupied lists are in ascending frequency order.
inline int bin_of(int k, int fft_size) { return k >= 0 ? k : fft_size + k; }

struct PilotLayout {
    int fft_size = 0;
    int n_symbols = 0;
    std::vector<int> block_pilot_symbols;   // OFDM symbol indices within a frame
    std::vector<int> comb_subcarriers;      // signed k, ascending
    std::vector<int> data_subcarriers;      // signed k, ascending
    std::vector<int> null_subcarriers;      // signed k, ascending (includes DC)
    std::vector<int> occupied;              // comb + data merged, ascending

    // Dense per-bin role rows for the two symbol kinds.
    std::vector<CellRole> data_symbol_roles;   // indexed by FFT bin
    std::vector<CellRole> pilot_symbol_roles;  // indexed by FFT bin

    bool is_block_pilot_symbol(int s) const {
        return std::binary_search(block_pilot_symbols.begin(), block_pilot_symbols.end(), s);
    }
    CellRole role(int symbol, int bin) const {
        return is_block_pilot_symbol(symbol) ? pilot_symbol_roles[bin] : data_symbol_roles[bin];
    }
    // Pilot cells of a symbol, in ascending frequency order.
    const std::vector<int>& pilot_subcarriers(int symbol) const {
        return is_block_pilot_symbol(symbol) ? occupied : comb_subcarriers;
    }
};

// Resource mapping: one contiguous occupied band centered on DC (DC nulled),
// comb pilots on every C-th occupied subcarrier, a block-pilot symbol every
// D+1 symbols starting at symbol 0, data everywhere else in the band.
inline PilotLayout layout_pilots(const FrameConfig& cfg) {
    cfg.validate();
    PilotLayout out;
    out.fft_size = cfg.fft_size;
    out.n_symbols = cfg.n_symbols_per_frame;

    const int occ = cfg.n_occupied();
    const int n_neg = occ / 2;
    for (int i = 0; i < occ; ++i) {
        const int k = i < n_neg ? i - n_neg : i - n_neg + 1;  // skip DC
        out.occupied.push_back(k);
        if (i % cfg.comb_distance == 0)
            out.comb_subcarriers.push_back(k);
        else
            out.data_subcarriers.push_back(k);
    }
    for (int k = -cfg.fft_size / 2; k < cfg.fft_size / 2; ++k) {
        if (!std::binary_search(out.occupied.begin(), out.occupied.end(), k))
            out.null_subcarriers.push_back(k);
    }
    for (int s = 0; s < cfg.n_symbols_per_frame; s += cfg.block_period())
        out.block_pilot_symbols.push_back(s);

    out.data_symbol_roles.assign(cfg.fft_size, CellRole::Null);
    out.pilot_symbol_roles.assign(cfg.fft_size, CellRole::Null);
    for (int k : out.comb_subcarriers) {
        out.data_symbol_roles[bin_of(k, cfg.fft_size)] = CellRole::CombPilot;
        out.pilot_symbol_roles[bin_of(k, cfg.fft_size)] = CellRole::BlockPilot;
    }
    for (int k : out.data_subcarriers) {
        out.data_symbol_roles[bin_of(k, cfg.fft_size)] = CellRole::Data;
        out.pilot_symbol_roles[bin_of(k, cfg.fft_size)] = CellRole::BlockPilot;
    }
    return out;
}

// 31-bit Galois LFSR, feedback polynomial x^31 + x^28 + 1 (primitive, period
// 2^31 - 1). Output is the LSB before each shift.
class Lfsr31 {
public:
    explicit Lfsr31(uint64_t seed) {
        uint64_t s = seed;
        state_ = static_cast<uint32_t>(splitmix64(s) & 0x7FFFFFFFu);
        if (state_ == 0) state_ = 1;
    }
    int next_bit() {
        const int out = static_cast<int>(state_ & 1u);
        state_ >>= 1;
        if (out) state_ ^= 0x48000000u;
        return out;
    }
    double next_bpsk() { return next_bit() ? -1.0 : 1.0; }

private:
    uint32_t state_;
};

// Known pilot values for one frame, per symbol, aligned with
// layout.pilot_subcarriers(s) (ascending frequency). BPSK +/-1 from the
// seeded LFSR; transmitter and receiver regenerate the same sequence.
inline std::vector<cvec> pilot_values(const PilotLayout& layout, uint64_t seed) {
    Lfsr31 lfsr(seed);
    std::vector<cvec> out(layout.n_symbols);
    for (int s = 0; s < layout.n_symbols; ++s) {
        const auto& cells = layout.pilot_subcarriers(s);
        out[s].reserve(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i)
            out[s].push_back({lfsr.next_bpsk(), 0.0});
    }
    return out;
}

// Flat pilot sequence (all pilot cells of a frame in scan order); length
// matches the total pilot cell count.
inline cvec pilot_sequence(const PilotLayout& layout, uint64_t seed) {
    cvec flat;
    for (const auto& row : pilot_values(layout, seed))
        flat.insert(flat.end(), row.begin(), row.end());
    return flat;
}

// One frame's complex cells, row-major (symbol, FFT bin). Roles come from
// the layout so they cannot drift out of sync with it.
struct ResourceGrid {
    int n_symbols = 0;
    int fft_size = 0;
    cvec cells;

    ResourceGrid() = default;
    ResourceGrid(int symbols, int n)
        : n_symbols(symbols), fft_size(n), cells(static_cast<std::size_t>(symbols) * n) {}

    cplx& at(int symbol, int bin) {
        return cells[static_cast<std::size_t>(symbol) * fft_size + bin];
    }
    const cplx& at(int symbol, int bin) const {
        return cells[static_cast<std::size_t>(symbol) * fft_size + bin];
    }
    cplx& at_k(int symbol, int k) { return at(symbol, bin_of(k, fft_size)); }
    const cplx& at_k(int symbol, int k) const { return at(symbol, bin_of(k, fft_size)); }

    cplx* row(int symbol) { return cells.data() + static_cast<std::size_t>(symbol) * fft_size; }
    const cplx* row(int symbol) const {
        return cells.data() + static_cast<std::size_t>(symbol) * fft_size;
    }
};

// T_c ~ c / (v * f_c). v == 0 means unbounded coherence -> nullopt.
inline std::optional<double> coherence_time(double sound_speed, double platform_speed,
                                            double carrier) {
    if (sound_speed <= 0 || carrier <= 0 || platform_speed < 0)
        throw std::invalid_argument("coherence_time: inputs must be positive");
    if (platform_speed == 0) return std::nullopt;
    return sound_speed / (platform_speed * carrier);
}

}  // namespace aofdm
