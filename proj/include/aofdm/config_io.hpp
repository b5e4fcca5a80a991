#pragma once

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "aofdm/channel.hpp"
#include "aofdm/common.hpp"
#include "aofdm/grid.hpp"

namespace aofdm {

// JSON configuration: one key per FrameConfig field, plus an optional
// "channel" section for the simulator. Unknown keys are rejected by name.

inline nlohmann::json config_to_json(const FrameConfig& c) {
    return {
        {"fft_size", c.fft_size},
        {"cp_len", c.cp_len},
        {"block_distance", c.block_distance},
        {"comb_distance", c.comb_distance},
        {"n_data_subcarriers", c.n_data_subcarriers},
        {"modulation_order", c.modulation_order},
        {"ldpc_rate", c.ldpc_rate.str()},
        {"carrier_freq", c.carrier_freq},
        {"baseband_rate", c.baseband_rate},
        {"dac_rate", c.dac_rate},
        {"adc_rate", c.adc_rate},
        {"n_rx_elements", c.n_rx_elements},
        {"n_symbols_per_frame", c.n_symbols_per_frame},
    };
}

namespace detail {

template <typename T>
T take(const nlohmann::json& j, const std::string& key) {
    if (!j.contains(key)) throw ConfigError("config: missing key \"" + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("config: bad value type for key \"" + key + "\"");
    }
}

template <typename T>
void take_optional(const nlohmann::json& j, const std::string& key, T& out) {
    if (!j.contains(key) || j.at(key).is_null()) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("config: bad value type for key \"" + key + "\"");
    }
}

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known,
                           const std::string& where) {
    for (const auto& [key, value] : j.items())
        if (!known.count(key))
            throw ConfigError("config: unknown key \"" + key + "\" in " + where);
}

inline CodeRate parse_rate(const std::string& s) {
    if (s == "uncoded") return {false, 0, 1};
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        try {
            const unsigned num = std::stoul(s.substr(0, slash));
            const unsigned den = std::stoul(s.substr(slash + 1));
            return {true, num, den};
        } catch (const std::exception&) {
        }
    }
    throw ConfigError("config: ldpc_rate must be \"2/3\" or \"uncoded\", got \"" + s + "\"");
}

}  // namespace detail

inline FrameConfig frame_config_from_json(const nlohmann::json& j) {
    static const std::set<std::string> known{
        "fft_size",      "cp_len",        "block_distance", "comb_distance",
        "n_data_subcarriers", "modulation_order", "ldpc_rate",  "carrier_freq",
        "baseband_rate", "dac_rate",      "adc_rate",       "n_rx_elements",
        "n_symbols_per_frame", "channel"};
    detail::reject_unknown(j, known, "frame config");
    FrameConfig c;
    c.fft_size = detail::take<int>(j, "fft_size");
    c.cp_len = detail::take<int>(j, "cp_len");
    c.block_distance = detail::take<int>(j, "block_distance");
    c.comb_distance = detail::take<int>(j, "comb_distance");
    c.n_data_subcarriers = detail::take<int>(j, "n_data_subcarriers");
    c.modulation_order = detail::take<int>(j, "modulation_order");
    c.ldpc_rate = detail::parse_rate(detail::take<std::string>(j, "ldpc_rate"));
    c.carrier_freq = detail::take<double>(j, "carrier_freq");
    c.baseband_rate = detail::take<double>(j, "baseband_rate");
    c.dac_rate = detail::take<double>(j, "dac_rate");
    c.adc_rate = detail::take<double>(j, "adc_rate");
    c.n_rx_elements = detail::take<int>(j, "n_rx_elements");
    c.n_symbols_per_frame = detail::take<int>(j, "n_symbols_per_frame");
    c.validate();
    return c;
}

inline nlohmann::json channel_to_json(const ChannelSpec& s) {
    nlohmann::json j{
        {"delay_spread_s", s.delay_spread_s}, {"n_taps", s.n_taps},
        {"tap_spacing_s", s.tap_spacing_s},   {"cfo_hz", s.cfo_hz},
        {"sto_samples", s.sto_samples},       {"sro_ppm", s.sro_ppm},
    };
    if (s.decay_s) j["decay_s"] = *s.decay_s;
    if (s.snr_db) j["snr_db"] = *s.snr_db;
    return j;
}

inline ChannelSpec channel_from_json(const nlohmann::json& j) {
    static const std::set<std::string> known{"delay_spread_s", "n_taps",      "tap_spacing_s",
                                             "decay_s",        "cfo_hz",      "sto_samples",
                                             "sro_ppm",        "snr_db"};
    detail::reject_unknown(j, known, "channel spec");
    ChannelSpec s;
    detail::take_optional(j, "delay_spread_s", s.delay_spread_s);
    detail::take_optional(j, "n_taps", s.n_taps);
    detail::take_optional(j, "tap_spacing_s", s.tap_spacing_s);
    double decay = 0.0;
    if (j.contains("decay_s") && !j.at("decay_s").is_null()) {
        detail::take_optional(j, "decay_s", decay);
        s.decay_s = decay;
    }
    detail::take_optional(j, "cfo_hz", s.cfo_hz);
    detail::take_optional(j, "sto_samples", s.sto_samples);
    detail::take_optional(j, "sro_ppm", s.sro_ppm);
    double snr = 0.0;
    if (j.contains("snr_db") && !j.at("snr_db").is_null()) {
        detail::take_optional(j, "snr_db", snr);
        s.snr_db = snr;
    }
    s.validate();
    return s;
}

struct LoadedConfig {
    FrameConfig frame;
    ChannelSpec channel;
    bool has_channel = false;
    nlohmann::json raw;
};

inline LoadedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: parse error in " + path + ": " + e.what());
    }
    LoadedConfig out;
    out.raw = j;
    out.frame = frame_config_from_json(j);
    if (j.contains("channel")) {
        out.channel = channel_from_json(j.at("channel"));
        out.has_channel = true;
    }
    return out;
}

}  // namespace aofdm
