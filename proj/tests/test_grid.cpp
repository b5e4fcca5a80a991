#include <doctest.h>

#include <set>

#include "aofdm/grid.hpp"
#include "helpers.hpp"

using namespace aofdm;

TEST_CASE("frame config: table defaults derive the published numbers") {
    const FrameConfig c = test::table1_config();
    c.validate();
    CHECK(std::abs(c.subcarrier_spacing() - 610.35) < 0.01);
    CHECK(c.subcarrier_spacing() == doctest::Approx(2.5e6 / 4096).epsilon(1e-15));
    CHECK(c.symbol_duration() == doctest::Approx(1843.2e-6).epsilon(1e-12));
    CHECK(c.block_period() == 17);
    CHECK(c.up_factor() == 40);
    CHECK(c.down_factor() == 48);
}

TEST_CASE("frame config: small geometry arithmetic") {
    FrameConfig c;
    c.fft_size = 8;
    c.cp_len = 2;
    c.baseband_rate = 8;
    c.carrier_freq = 2;
    c.dac_rate = 16;
    c.adc_rate = 16;
    c.n_data_subcarriers = 3;
    c.comb_distance = 3;
    c.block_distance = 2;
    c.n_symbols_per_frame = 3;
    c.n_rx_elements = 1;
    c.validate();
    CHECK(c.subcarrier_spacing() == doctest::Approx(1.0));
    CHECK(c.symbol_duration() == doctest::Approx(1.25));
}

TEST_CASE("frame config: validation rejects bad parameter combinations") {
    FrameConfig c = test::table1_config();
    SUBCASE("cp not smaller than fft") {
        c.cp_len = c.fft_size;
        CHECK_THROWS_AS(c.validate(), ConfigError);
    }
    SUBCASE("unsupported modulation order") {
        c.modulation_order = 4;
        CHECK_THROWS_AS(c.validate(), ConfigError);
    }
    SUBCASE("unsupported code rate") {
        c.ldpc_rate = {true, 1, 2};
        CHECK_THROWS_AS(c.validate(), ConfigError);
    }
    SUBCASE("non-integer dac ratio") {
        c.dac_rate = 99e6;
        CHECK_THROWS_AS(c.validate(), ConfigError);
    }
    SUBCASE("frame not a whole number of pilot periods") {
        c.n_symbols_per_frame = 50;
        CHECK_THROWS_AS(c.validate(), ConfigError);
    }
    SUBCASE("occupied band too wide for fft") {
        c.fft_size = 2048;
        c.cp_len = 256;
        CHECK_THROWS_AS(c.validate(), ConfigError);
    }
    SUBCASE("fft not a power of two") {
        c.fft_size = 4000;
        CHECK_THROWS_AS(c.validate(), ConfigError);
    }
}

TEST_CASE("layout: table defaults give 3072 data subcarriers per data symbol") {
    const FrameConfig c = test::table1_config();
    const auto layout = layout_pilots(c);
    CHECK(layout.data_subcarriers.size() == 3072);
    CHECK(layout.comb_subcarriers.size() == 100);
    CHECK(c.n_occupied() == 3172);
}

TEST_CASE("layout: block pilots every D+1 symbols starting at zero") {
    FrameConfig c = test::table1_config();
    c.n_symbols_per_frame = 51;
    const auto layout = layout_pilots(c);
    CHECK(layout.block_pilot_symbols == std::vector<int>{0, 17, 34});
}

TEST_CASE("layout: 16-fft band with 8 occupied and comb stride 4") {
    FrameConfig c;
    c.fft_size = 16;
    c.cp_len = 4;
    c.baseband_rate = 16;
    c.carrier_freq = 8;
    c.dac_rate = 48;
    c.adc_rate = 48;
    c.n_data_subcarriers = 6;
    c.comb_distance = 4;
    c.block_distance = 2;
    c.n_symbols_per_frame = 3;
    c.n_rx_elements = 1;
    const auto layout = layout_pilots(c);
    CHECK(c.n_occupied() == 8);
    CHECK(layout.comb_subcarriers.size() == 2);
    CHECK(layout.data_subcarriers.size() == 6);
}

TEST_CASE("layout: role sets partition the subcarriers of every symbol") {
    const FrameConfig c = test::small_config();
    const auto layout = layout_pilots(c);

    // occupied band is contiguous around DC, DC itself nulled
    CHECK(layout.occupied.front() == -(c.n_occupied() / 2));
    CHECK(layout.occupied.back() == (c.n_occupied() + 1) / 2);
    for (std::size_t i = 1; i < layout.occupied.size(); ++i) {
        const int step = layout.occupied[i] - layout.occupied[i - 1];
        CHECK((step == 1 || (layout.occupied[i - 1] == -1 && step == 2)));
    }
    CHECK(layout.data_symbol_roles[0] == CellRole::Null);  // DC bin

    for (int s : {0, 1}) {
        std::set<int> seen;
        int n_data = 0, n_comb = 0, n_block = 0, n_null = 0;
        for (int bin = 0; bin < c.fft_size; ++bin) {
            seen.insert(bin);
            switch (layout.role(s, bin)) {
                case CellRole::Data: ++n_data; break;
                case CellRole::CombPilot: ++n_comb; break;
                case CellRole::BlockPilot: ++n_block; break;
                case CellRole::Null: ++n_null; break;
            }
        }
        CHECK(seen.size() == static_cast<std::size_t>(c.fft_size));
        if (layout.is_block_pilot_symbol(s)) {
            CHECK(n_block == c.n_occupied());
            CHECK(n_data + n_comb == 0);
        } else {
            CHECK(n_data == c.n_data_subcarriers);
            CHECK(n_comb == c.n_comb_pilots());
            CHECK(n_block == 0);
        }
        CHECK(n_null == c.fft_size - c.n_occupied());
    }
}

TEST_CASE("layout: pilot index progressions") {
    const FrameConfig c = test::table1_config();
    const auto layout = layout_pilots(c);
    // block pilots: exact arithmetic progression with step D+1
    for (std::size_t i = 1; i < layout.block_pilot_symbols.size(); ++i)
        CHECK(layout.block_pilot_symbols[i] - layout.block_pilot_symbols[i - 1] ==
              c.block_period());
    // comb pilots: every C-th occupied subcarrier
    std::size_t ci = 0;
    for (std::size_t i = 0; i < layout.occupied.size(); ++i) {
        if (i % static_cast<std::size_t>(c.comb_distance) == 0) {
            REQUIRE(ci < layout.comb_subcarriers.size());
            CHECK(layout.comb_subcarriers[ci] == layout.occupied[i]);
            ++ci;
        }
    }
    CHECK(ci == layout.comb_subcarriers.size());
}

TEST_CASE("pilot sequence: deterministic unit-magnitude BPSK") {
    const FrameConfig c = test::small_config();
    const auto layout = layout_pilots(c);
    const auto a = pilot_sequence(layout, 0);
    const auto b = pilot_sequence(layout, 0);
    CHECK(a == b);
    CHECK(a.size() == layout.block_pilot_symbols.size() * layout.occupied.size() +
                          (layout.n_symbols - layout.block_pilot_symbols.size()) *
                              layout.comb_subcarriers.size());
    for (const auto& p : a) CHECK(std::abs(std::abs(p) - 1.0) < 1e-15);
    for (const auto& p : a) CHECK(p.imag() == 0.0);
}

TEST_CASE("pilot sequence: different seeds diverge within 8 values") {
    const FrameConfig c = test::small_config();
    const auto layout = layout_pilots(c);
    for (uint64_t s1 = 0; s1 < 8; ++s1)
        for (uint64_t s2 = s1 + 1; s2 < 8; ++s2) {
            const auto a = pilot_sequence(layout, s1);
            const auto b = pilot_sequence(layout, s2);
            bool differ = false;
            for (std::size_t i = 0; i < std::min<std::size_t>(8, a.size()); ++i)
                if (a[i] != b[i]) differ = true;
            CHECK(differ);
        }
}

TEST_CASE("coherence time: c / (v f)") {
    CHECK(coherence_time(1.0, 1.0, 1.0).value() == doctest::Approx(1.0));
    // the published ~0.2 s figure back-solves to a platform speed of ~2 mm/s
    const double v = 1540.0 / (0.2 * 3.75e6);
    CHECK(coherence_time(1540.0, v, 3.75e6).value() == doctest::Approx(0.2).epsilon(1e-9));
    // doubling the carrier halves the coherence time
    const double t1 = coherence_time(1500.0, 0.01, 1e6).value();
    const double t2 = coherence_time(1500.0, 0.01, 2e6).value();
    CHECK(t1 / t2 == doctest::Approx(2.0));
    // zero platform speed: unbounded
    CHECK(!coherence_time(1500.0, 0.0, 1e6).has_value());
    CHECK_THROWS_AS(coherence_time(-1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("rate hook: data cells per second") {
    const FrameConfig c = test::table1_config();
    const double expect = 3072.0 * (16.0 / 17.0) / 1843.2e-6;
    CHECK(c.data_cells_per_second() == doctest::Approx(expect).epsilon(1e-12));
}
