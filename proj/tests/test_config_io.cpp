#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "aofdm/config_io.hpp"
#include "helpers.hpp"

using namespace aofdm;

namespace {
std::string write_temp(const std::string& name, const std::string& body) {
    const std::string path = std::string("/tmp/aofdm_test_") + name;
    std::ofstream f(path, std::ios::trunc);
    f << body;
    return path;
}
}  // namespace

TEST_CASE("config json: serialize then parse is field-identical") {
    for (int order : {6, 8})
        for (bool coded : {true, false}) {
            const FrameConfig c = test::table1_config(order, coded);
            const FrameConfig back = frame_config_from_json(config_to_json(c));
            CHECK(back == c);
        }
}

TEST_CASE("config json: missing key reported by name") {
    auto j = config_to_json(test::table1_config());
    j.erase("cp_len");
    try {
        frame_config_from_json(j);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("cp_len") != std::string::npos);
    }
}

TEST_CASE("config json: unknown key rejected by name") {
    auto j = config_to_json(test::table1_config());
    j["cp_length"] = 512;
    try {
        frame_config_from_json(j);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("cp_length") != std::string::npos);
    }
}

TEST_CASE("config json: bad ldpc rate string rejected") {
    auto j = config_to_json(test::table1_config());
    j["ldpc_rate"] = "3/4";
    CHECK_THROWS_AS(frame_config_from_json(j), ConfigError);
    j["ldpc_rate"] = "fast";
    CHECK_THROWS_AS(frame_config_from_json(j), ConfigError);
}

TEST_CASE("config file: load with channel section") {
    auto j = config_to_json(test::table1_config());
    j["channel"] = {{"n_taps", 4},       {"delay_spread_s", 50e-6}, {"tap_spacing_s", 40e-6},
                    {"cfo_hz", 12.5},    {"sto_samples", 100.0},    {"sro_ppm", 2.0},
                    {"snr_db", 25.0}};
    const auto path = write_temp("cfg_channel.json", j.dump());
    const auto loaded = load_config(path);
    CHECK(loaded.has_channel);
    CHECK(loaded.channel.n_taps == 4);
    CHECK(loaded.channel.cfo_hz == doctest::Approx(12.5));
    CHECK(loaded.channel.snr_db.value() == doctest::Approx(25.0));
    std::remove(path.c_str());
}

TEST_CASE("config file: unknown channel key rejected") {
    auto j = config_to_json(test::table1_config());
    j["channel"] = {{"taps", 4}};
    const auto path = write_temp("cfg_badchan.json", j.dump());
    CHECK_THROWS_AS(load_config(path), ConfigError);
    std::remove(path.c_str());
}

TEST_CASE("config file: missing file and bad json") {
    CHECK_THROWS_AS(load_config("/tmp/does_not_exist_aofdm.json"), IoError);
    const auto path = write_temp("cfg_broken.json", "{ not json");
    CHECK_THROWS_AS(load_config(path), ConfigError);
    std::remove(path.c_str());
}
