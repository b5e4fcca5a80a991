#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "aofdm/common.hpp"
#include "aofdm/version.hpp"

namespace aofdm {

inline uint64_t fnv1a64(const uint8_t* data, std::size_t len, uint64_t h = 0xCBF29CE484222325ull) {
    for (std::size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= 0x100000001B3ull;
    }
    return h;
}

inline std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("digest: cannot open " + path);
    uint64_t h = 0xCBF29CE484222325ull;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        h = fnv1a64(reinterpret_cast<const uint8_t*>(buf), static_cast<std::size_t>(in.gcount()),
                    h);
    return hex64(h);
}

// Provenance record written next to every produced artifact. The manifest
// hash covers command, config and seeds (not timestamps), so identical
// manifests imply bit-identical outputs.
struct RunManifest {
    std::string command;
    nlohmann::json config;
    uint64_t seed = 0;
    std::string input_path;
    std::string input_digest;
    std::vector<std::pair<std::string, std::string>> outputs;  // (path, digest)

    std::string hash() const {
        nlohmann::json canon{
            {"command", command}, {"config", config}, {"seed", seed},
            {"input_digest", input_digest},
        };
        const std::string s = canon.dump();
        return hex64(fnv1a64(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
    }

    nlohmann::json to_json() const {
        nlohmann::json out{
            {"tool", "aofdm"},
            {"version", kVersion},
            {"command", command},
            {"config", config},
            {"seed", seed},
            {"input", {{"path", input_path}, {"digest", input_digest}}},
            {"manifest_hash", hash()},
            {"timestamp_utc",
             std::chrono::duration_cast<std::chrono::seconds>(
                 std::chrono::system_clock::now().time_since_epoch())
                 .count()},
        };
        nlohmann::json outs = nlohmann::json::array();
        for (const auto& [path, digest] : outputs)
            outs.push_back({{"path", path}, {"digest", digest}});
        out["outputs"] = outs;
        return out;
    }

    void write(const std::string& path) const {
        std::ofstream f(path, std::ios::trunc);
        if (!f) throw IoError("manifest: cannot write " + path);
        f << to_json().dump(2) << "\n";
    }
};

}  // namespace aofdm
