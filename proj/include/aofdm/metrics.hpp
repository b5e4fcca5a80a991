#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "aofdm/common.hpp"
#include "aofdm/grid.hpp"
#include "aofdm/qam.hpp"
#include "aofdm/txchain.hpp"

namespace aofdm {

inline constexpr double kEvmFloorDb = -100.0;

struct EvmResult {
    double avg_db = kEvmFloorDb;
    double peak_db = kEvmFloorDb;
};

// Data-aided EVM: error vector against the known transmitted symbols,
// normalized by the RMS reference power. Zero error reports the -100 dB
// floor rather than -inf.
inline EvmResult evm(const cvec& equalized, const cvec& reference) {
    if (equalized.empty() || equalized.size() != reference.size())
        throw std::invalid_argument("evm: inputs empty or mismatched");
    double err_acc = 0.0, ref_acc = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < equalized.size(); ++i) {
        const double e = std::norm(equalized[i] - reference[i]);
        err_acc += e;
        ref_acc += std::norm(reference[i]);
        peak = std::max(peak, e);
    }
    const double ref_rms2 = ref_acc / reference.size();
    EvmResult r;
    if (err_acc > 0.0) {
        r.avg_db = std::max(kEvmFloorDb, db_from_power(err_acc / equalized.size() / ref_rms2));
        r.peak_db = std::max(kEvmFloorDb, db_from_power(peak / ref_rms2));
    }
    return r;
}

// Blind reference for captures where the transmitted symbols are unknown:
// nearest constellation point per cell.
inline cvec nearest_reference(const cvec& symbols, int order) {
    const int l = qam::levels_per_axis(order);
    const double scl = qam::scale(order);
    cvec out(symbols.size());
    auto snap = [&](double v) {
        const double lv = std::round((v / scl + (l - 1)) / 2.0);
        return (2.0 * std::clamp(lv, 0.0, static_cast<double>(l - 1)) - (l - 1)) * scl;
    };
    for (std::size_t i = 0; i < symbols.size(); ++i)
        out[i] = {snap(symbols[i].real()), snap(symbols[i].imag())};
    return out;
}

struct BerResult {
    uint64_t errors = 0;
    uint64_t total = 0;
    double ratio() const { return total ? static_cast<double>(errors) / total : 0.0; }
    // zero observed errors reports the resolution bound instead of 0
    bool bounded() const { return errors == 0; }
    double bound() const { return total ? 1.0 / static_cast<double>(total) : 1.0; }

    std::string str() const {
        char buf[64];
        if (bounded())
            std::snprintf(buf, sizeof buf, "< %.2g", bound());
        else
            std::snprintf(buf, sizeof buf, "%.3g", ratio());
        return buf;
    }
};

inline BerResult ber(const std::vector<uint8_t>& rx_bits, const std::vector<uint8_t>& tx_bits) {
    if (rx_bits.size() != tx_bits.size())
        throw std::invalid_argument("ber: length mismatch (" + std::to_string(rx_bits.size()) +
                                    " vs " + std::to_string(tx_bits.size()) + ")");
    BerResult r;
    r.total = rx_bits.size();
    for (std::size_t i = 0; i < rx_bits.size(); ++i)
        if ((rx_bits[i] != 0) != (tx_bits[i] != 0)) ++r.errors;
    return r;
}

struct RateFigures {
    double raw_mbps = 0.0;      // data cells x bits, block-pilot overhead included
    double payload_mbps = 0.0;  // raw x code rate
    double framing_overhead = 0.0;  // transport-block header+CRC share, reported separately
};

// Headline data rates in the paper's accounting: pilot and coding overhead
// included, CRC/framing overhead reported separately.
inline RateFigures data_rate(const FrameConfig& cfg) {
    cfg.validate();
    RateFigures r;
    r.raw_mbps = cfg.data_cells_per_second() * cfg.modulation_order / 1e6;
    r.payload_mbps = r.raw_mbps * cfg.ldpc_rate.value();
    r.framing_overhead = static_cast<double>(kBlockOverhead) / kBlockBytes;
    return r;
}

struct MetricsReport {
    double avg_evm_db = kEvmFloorDb;
    double peak_evm_db = kEvmFloorDb;
    bool evm_data_aided = true;
    BerResult ber_pre_fec;
    BerResult ber_post_fec;
    bool have_ber = false;
    double payload_rate_mbps = 0.0;
    double raw_rate_mbps = 0.0;
    int frames_total = 0;
    uint64_t blocks_total = 0;
    uint64_t blocks_crc_failed = 0;
    std::vector<double> element_snr_db;
    double coarse_cfo_hz = 0.0;
    int64_t coarse_sto = 0;
    double fine_cfo_hz = 0.0;
    double fine_sto = 0.0;
    double sync_confidence = 0.0;
    double mean_ldpc_iters = 0.0;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["avg_evm_db"] = avg_evm_db;
        j["peak_evm_db"] = peak_evm_db;
        j["evm_reference"] = evm_data_aided ? "transmitted" : "nearest-point";
        if (have_ber) {
            j["ber_pre_fec"] = {{"errors", ber_pre_fec.errors},
                                {"bits", ber_pre_fec.total},
                                {"value", ber_pre_fec.str()}};
            j["ber_post_fec"] = {{"errors", ber_post_fec.errors},
                                 {"bits", ber_post_fec.total},
                                 {"value", ber_post_fec.str()}};
        }
        j["payload_rate_mbps"] = payload_rate_mbps;
        j["raw_rate_mbps"] = raw_rate_mbps;
        j["frames_total"] = frames_total;
        j["blocks_total"] = blocks_total;
        j["blocks_crc_failed"] = blocks_crc_failed;
        j["element_snr_db"] = element_snr_db;
        j["sync"] = {{"coarse_sto", coarse_sto},
                     {"coarse_cfo_hz", coarse_cfo_hz},
                     {"fine_cfo_hz", fine_cfo_hz},
                     {"fine_sto", fine_sto},
                     {"confidence", sync_confidence}};
        j["mean_ldpc_iters"] = mean_ldpc_iters;
        return j;
    }
};

// CSV of (I, Q) pairs plus a JSON sidecar carrying the config and the EVM
// of the exported symbols.
inline void constellation_export(const cvec& symbols, const cvec& reference,
                                 const FrameConfig& cfg, const std::string& path) {
    if (symbols.empty()) throw std::invalid_argument("constellation_export: no symbols");
    std::ofstream csv(path, std::ios::trunc);
    if (!csv) throw IoError("constellation_export: cannot write " + path);
    csv << "i,q\n";
    char line[80];
    for (const auto& s : symbols) {
        std::snprintf(line, sizeof line, "%.9g,%.9g\n", s.real(), s.imag());
        csv << line;
    }
    if (!csv) throw IoError("constellation_export: write failed for " + path);

    const auto e = evm(symbols, reference);
    nlohmann::json side;
    side["n_symbols"] = symbols.size();
    side["avg_evm_db"] = e.avg_db;
    side["peak_evm_db"] = e.peak_db;
    side["modulation_order"] = cfg.modulation_order;
    side["ldpc_rate"] = cfg.ldpc_rate.str();
    side["fft_size"] = cfg.fft_size;
    std::ofstream meta(path + ".json", std::ios::trunc);
    if (!meta) throw IoError("constellation_export: cannot write " + path + ".json");
    meta << side.dump(2) << "\n";
}

}  // namespace aofdm
