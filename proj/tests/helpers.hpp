#pragma once

#include "aofdm/grid.hpp"

namespace aofdm::test {

// Table-style default: 4096-FFT, 512 CP, 3072 data subcarriers, 16 elements.
inline FrameConfig table1_config(int modulation = 6, bool coded = true) {
    FrameConfig c;
    c.modulation_order = modulation;
    c.ldpc_rate = coded ? CodeRate{true, 2, 3} : CodeRate{false, 0, 1};
    return c;
}

// Small geometry for fast unit tests: 64-FFT, 8-sample CP, 24 data
// subcarriers in a 30-subcarrier occupied band.
inline FrameConfig small_config(int modulation = 6, bool coded = false) {
    FrameConfig c;
    c.fft_size = 64;
    c.cp_len = 8;
    c.block_distance = 4;
    c.comb_distance = 5;
    c.n_data_subcarriers = 24;
    c.modulation_order = modulation;
    c.ldpc_rate = coded ? CodeRate{true, 2, 3} : CodeRate{false, 0, 1};
    c.carrier_freq = 3.75e6;
    c.baseband_rate = 2.5e6;
    c.dac_rate = 100e6;
    c.adc_rate = 120e6;
    c.n_rx_elements = 2;
    c.n_symbols_per_frame = 10;
    return c;
}

}  // namespace aofdm::test
