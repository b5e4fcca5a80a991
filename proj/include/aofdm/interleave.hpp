#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "aofdm/common.hpp"

namespace aofdm {

// Row-column block interleaver: write row-wise into a rows x cols matrix,
// read column-wise. Templated on the element type so the same permutation
// serves bits on the transmit side and LLRs on the receive side.
template <typename T>
std::vector<T> block_interleave(const std::vector<T>& in, std::size_t rows) {
    if (rows == 0 || in.size() % rows != 0)
        throw std::invalid_argument("interleave: length not a multiple of row count");
    const std::size_t cols = in.size() / rows;
    std::vector<T> out(in.size());
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            out[c * rows + r] = in[r * cols + c];
    return out;
}

template <typename T>
std::vector<T> block_deinterleave(const std::vector<T>& in, std::size_t rows) {
    if (rows == 0 || in.size() % rows != 0)
        throw std::invalid_argument("deinterleave: length not a multiple of row count");
    const std::size_t cols = in.size() / rows;
    std::vector<T> out(in.size());
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            out[r * cols + c] = in[c * rows + r];
    return out;
}

// Bit interleaver: rows = modulation order, applied to the whole chunk so
// adjacent coded bits land in QAM symbols far apart in the block.
template <typename T>
std::vector<T> bit_interleave(const std::vector<T>& v, int modulation_order) {
    return block_interleave(v, static_cast<std::size_t>(modulation_order));
}
template <typename T>
std::vector<T> bit_deinterleave(const std::vector<T>& v, int modulation_order) {
    return block_deinterleave(v, static_cast<std::size_t>(modulation_order));
}

// Symbol interleaver over the data cells of one block-pilot period:
// rows = data symbols per period, so consecutive QAM symbols spread across
// OFDM symbols in time.
template <typename T>
std::vector<T> symbol_interleave(const std::vector<T>& v, int block_distance) {
    return block_interleave(v, static_cast<std::size_t>(block_distance));
}
template <typename T>
std::vector<T> symbol_deinterleave(const std::vector<T>& v, int block_distance) {
    return block_deinterleave(v, static_cast<std::size_t>(block_distance));
}

}  // namespace aofdm
