#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "aofdm/common.hpp"
#include "aofdm/grid.hpp"

namespace aofdm {

// Per-cell channel gains for one frame and one receive element, plus a
// scalar noise-variance estimate for MRC weighting. Gains are stored dense
// over (symbol, occupied-subcarrier index).
struct ChannelEstimate {
    int n_symbols = 0;
    int n_occupied = 0;
    cvec gains;  // symbol-major
    double noise_var = 1e-12;

    cplx& at(int symbol, int occ_idx) {
        return gains[static_cast<std::size_t>(symbol) * n_occupied + occ_idx];
    }
    const cplx& at(int symbol, int occ_idx) const {
        return gains[static_cast<std::size_t>(symbol) * n_occupied + occ_idx];
    }
};

// Least-squares estimation on every occupied subcarrier of each block-pilot
// symbol (H = Y / P), linear interpolation in time across the data symbols,
// nearest-pilot hold after the last pilot. The noise variance comes from
// the comb-pilot residuals on data symbols, where the interpolated estimate
// is independent of the observation.
inline ChannelEstimate estimate_channel(const ResourceGrid& grid, const PilotLayout& layout,
                                        const std::vector<cvec>& pilots,
                                        const FrameConfig& cfg) {
    const auto& pilot_syms = layout.block_pilot_symbols;
    if (pilot_syms.empty())
        throw std::invalid_argument("estimate_channel: no block-pilot symbols");
    ChannelEstimate est;
    est.n_symbols = grid.n_symbols;
    est.n_occupied = static_cast<int>(layout.occupied.size());
    est.gains.resize(static_cast<std::size_t>(est.n_symbols) * est.n_occupied);

    for (int s : pilot_syms) {
        for (int i = 0; i < est.n_occupied; ++i) {
            const cplx p = pilots[s][static_cast<std::size_t>(i)];
            if (std::abs(p) < 1e-12)
                throw std::invalid_argument("estimate_channel: pilot magnitude below guard");
            est.at(s, i) = grid.at_k(s, layout.occupied[i]) / p;
        }
    }

    for (std::size_t pi = 0; pi < pilot_syms.size(); ++pi) {
        const int s0 = pilot_syms[pi];
        const bool last = pi + 1 == pilot_syms.size();
        const int s1 = last ? grid.n_symbols : pilot_syms[pi + 1];
        for (int s = s0 + 1; s < s1; ++s) {
            if (last) {
                for (int i = 0; i < est.n_occupied; ++i) est.at(s, i) = est.at(s0, i);
            } else {
                const double a = static_cast<double>(s - s0) / (s1 - s0);
                for (int i = 0; i < est.n_occupied; ++i)
                    est.at(s, i) = est.at(s0, i) * (1.0 - a) + est.at(s1, i) * a;
            }
        }
    }

    // noise from comb residuals after channel compensation
    double resid = 0.0;
    std::size_t count = 0;
    for (int s = 0; s < grid.n_symbols; ++s) {
        if (layout.is_block_pilot_symbol(s)) continue;
        for (std::size_t c = 0; c < layout.comb_subcarriers.size(); ++c) {
            const int k = layout.comb_subcarriers[c];
            const auto it = std::lower_bound(layout.occupied.begin(), layout.occupied.end(), k);
            const int occ_idx = static_cast<int>(it - layout.occupied.begin());
            const cplx err = grid.at_k(s, k) - est.at(s, occ_idx) * pilots[s][c];
            resid += std::norm(err);
            ++count;
        }
    }
    est.noise_var = count > 0 ? std::max(resid / count, 1e-12) : 1e-12;
    return est;
}

}  // namespace aofdm
