#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "aofdm/common.hpp"

namespace aofdm {

// Square Gray-mapped QAM, unit average power (64-QAM scale 1/sqrt(42),
// 256-QAM 1/sqrt(170)). Bits are MSB-first per symbol; the first half maps
// to I, the second half to Q.
namespace qam {

inline constexpr double kLlrClamp = 30.0;

inline int levels_per_axis(int order) {
    switch (order) {
        case 6: return 8;
        case 8: return 16;
        default: throw std::invalid_argument("qam: modulation order must be 6 or 8");
    }
}

inline double scale(int order) {
    // mean |s|^2 over the constellation is 2*sum(odd^2)/L per axis pair
    return order == 6 ? 1.0 / std::sqrt(42.0) : 1.0 / std::sqrt(170.0);
}

inline unsigned gray_decode(unsigned g) {
    for (unsigned shift = 1; shift < 8; shift <<= 1) g ^= g >> shift;
    return g;
}

// Amplitude of the level whose Gray label is g (axis bits MSB-first).
inline double axis_level(unsigned gray_bits, int levels, double scl) {
    const unsigned v = gray_decode(gray_bits);
    return (2.0 * static_cast<double>(v) - (levels - 1)) * scl;
}

inline cvec map(const std::vector<uint8_t>& bits, int order) {
    const int l = levels_per_axis(order);
    const int half = order / 2;
    const double scl = scale(order);
    if (bits.size() % static_cast<std::size_t>(order) != 0)
        throw std::invalid_argument("qam: bit count not divisible by modulation order");
    cvec out(bits.size() / order);
    for (std::size_t s = 0; s < out.size(); ++s) {
        unsigned gi = 0, gq = 0;
        for (int b = 0; b < half; ++b) gi = (gi << 1) | bits[s * order + b];
        for (int b = 0; b < half; ++b) gq = (gq << 1) | bits[s * order + half + b];
        out[s] = {axis_level(gi, l, scl), axis_level(gq, l, scl)};
    }
    return out;
}

// Max-log LLRs, positive => bit 0, clamped to +/-kLlrClamp. noise_var is the
// complex (two-sided) noise variance per symbol; per-axis decomposition is
// exact for square Gray constellations.
inline void demap_symbol(cplx y, int order, double noise_var, double* llr_out) {
    const int l = levels_per_axis(order);
    const int half = order / 2;
    const double scl = scale(order);
    const double inv_v = 1.0 / std::max(noise_var, 1e-30);
    for (int axis = 0; axis < 2; ++axis) {
        const double yv = axis == 0 ? y.real() : y.imag();
        for (int b = 0; b < half; ++b) {
            double d0 = 1e300, d1 = 1e300;
            for (unsigned g = 0; g < static_cast<unsigned>(l); ++g) {
                const double diff = yv - axis_level(g, l, scl);
                const double d = diff * diff;
                const bool bit = (g >> (half - 1 - b)) & 1u;
                (bit ? d1 : d0) = std::min(bit ? d1 : d0, d);
            }
            double llr = (d1 - d0) * inv_v;
            llr = std::clamp(llr, -kLlrClamp, kLlrClamp);
            llr_out[axis * half + b] = llr;
        }
    }
}

inline std::vector<double> demap(const cvec& symbols, int order,
                                 const std::vector<double>& noise_var) {
    if (noise_var.size() != symbols.size())
        throw std::invalid_argument("qam: noise variance count mismatch");
    std::vector<double> llrs(symbols.size() * order);
    for (std::size_t s = 0; s < symbols.size(); ++s)
        demap_symbol(symbols[s], order, noise_var[s], llrs.data() + s * order);
    return llrs;
}

inline std::vector<double> demap(const cvec& symbols, int order, double noise_var) {
    std::vector<double> llrs(symbols.size() * order);
    for (std::size_t s = 0; s < symbols.size(); ++s)
        demap_symbol(symbols[s], order, noise_var, llrs.data() + s * order);
    return llrs;
}

inline std::vector<uint8_t> hard_bits(const std::vector<double>& llrs) {
    std::vector<uint8_t> bits(llrs.size());
    for (std::size_t i = 0; i < llrs.size(); ++i) bits[i] = llrs[i] < 0.0 ? 1 : 0;
    return bits;
}

}  // namespace qam
}  // namespace aofdm
