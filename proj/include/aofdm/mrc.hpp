#pragma once

#include <stdexcept>
#include <vector>

#include "aofdm/chanest.hpp"
#include "aofdm/common.hpp"
#include "aofdm/grid.hpp"

namespace aofdm {

struct CombinedCells {
    cvec symbols;                   // equalized data cells, grid scan order
    std::vector<double> noise_var;  // effective per-cell noise variance
};

// Maximum ratio combining across receive elements, noise-variance weighted:
//   s_hat = sum_i conj(H_i) Y_i / sigma_i^2  /  sum_i |H_i|^2 / sigma_i^2
// With one element this reduces to Y/H. `weighted=false` drops the 1/sigma^2
// factors (all elements trusted equally); the effective output variance is
// adjusted accordingly. Cells whose denominator vanishes are erased
// (symbol 0, variance huge, so the demapper emits zero LLRs).
inline CombinedCells mrc_combine(const std::vector<const ResourceGrid*>& grids,
                                 const std::vector<const ChannelEstimate*>& estimates,
                                 const PilotLayout& layout, const FrameConfig& cfg,
                                 bool weighted = true) {
    if (grids.empty() || grids.size() != estimates.size())
        throw std::invalid_argument("mrc_combine: element count mismatch");
    const int n_sym = grids[0]->n_symbols;
    for (const auto* g : grids)
        if (g->n_symbols != n_sym)
            throw std::invalid_argument("mrc_combine: elements not frame aligned");

    // occupied index of each data subcarrier
    std::vector<int> data_occ_idx;
    data_occ_idx.reserve(layout.data_subcarriers.size());
    for (int k : layout.data_subcarriers) {
        const auto it = std::lower_bound(layout.occupied.begin(), layout.occupied.end(), k);
        data_occ_idx.push_back(static_cast<int>(it - layout.occupied.begin()));
    }

    CombinedCells out;
    const std::size_t n_cells =
        static_cast<std::size_t>(cfg.data_symbols_per_frame()) * layout.data_subcarriers.size();
    out.symbols.resize(n_cells);
    out.noise_var.resize(n_cells);

    std::size_t cell = 0;
    for (int s = 0; s < n_sym; ++s) {
        if (layout.is_block_pilot_symbol(s)) continue;
        for (std::size_t d = 0; d < layout.data_subcarriers.size(); ++d) {
            const int bin = bin_of(layout.data_subcarriers[d], cfg.fft_size);
            const int occ = data_occ_idx[d];
            cplx num{0.0, 0.0};
            double den = 0.0;
            double var_num = 0.0;  // unweighted case: sum |H|^2 sigma^2
            for (std::size_t e = 0; e < grids.size(); ++e) {
                const cplx h = estimates[e]->at(s, occ);
                const double sigma2 = estimates[e]->noise_var;
                const double w = weighted ? 1.0 / sigma2 : 1.0;
                num += std::conj(h) * grids[e]->at(s, bin) * w;
                den += std::norm(h) * w;
                var_num += std::norm(h) * sigma2;
            }
            if (den < 1e-12) {
                out.symbols[cell] = {0.0, 0.0};
                out.noise_var[cell] = 1e30;
            } else {
                out.symbols[cell] = num / den;
                out.noise_var[cell] = weighted ? 1.0 / den : var_num / (den * den);
            }
            ++cell;
        }
    }
    return out;
}

}  // namespace aofdm
