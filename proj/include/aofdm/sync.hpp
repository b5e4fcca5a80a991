#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "aofdm/common.hpp"
#include "aofdm/fft.hpp"
#include "aofdm/grid.hpp"

namespace aofdm {

struct SyncEstimate {
    int64_t coarse_sto = 0;   // frame start, samples
    double coarse_cfo = 0.0;  // Hz
    double fine_sto = 0.0;    // residual fractional samples
    double fine_cfo = 0.0;    // residual Hz
    double confidence = 0.0;  // CP correlation peak, 0..1
};

namespace detail {

// Sliding CP autocorrelation r(d) = sum_n y[d+n] conj(y[d+n+N]) over the CP
// window, computed incrementally over [d0, d0+count).
inline void cp_corr_range(const cvec& y, int fft_size, int cp_len, int64_t d0, int64_t count,
                          cvec& corr, std::vector<double>& energy) {
    corr.assign(count, cplx{0.0, 0.0});
    energy.assign(count, 0.0);
    const int64_t n = static_cast<int64_t>(y.size());
    auto at = [&](int64_t i) -> cplx {
        return (i >= 0 && i < n) ? y[static_cast<std::size_t>(i)] : cplx{0.0, 0.0};
    };
    cplx r{0.0, 0.0};
    double e = 0.0;
    for (int64_t k = 0; k < cp_len; ++k) {
        r += at(d0 + k) * std::conj(at(d0 + k + fft_size));
        e += 0.5 * (std::norm(at(d0 + k)) + std::norm(at(d0 + k + fft_size)));
    }
    for (int64_t i = 0; i < count; ++i) {
        corr[i] = r;
        energy[i] = e;
        const int64_t d = d0 + i;
        r -= at(d) * std::conj(at(d + fft_size));
        r += at(d + cp_len) * std::conj(at(d + cp_len + fft_size));
        e -= 0.5 * (std::norm(at(d)) + std::norm(at(d + fft_size)));
        e += 0.5 * (std::norm(at(d + cp_len)) + std::norm(at(d + cp_len + fft_size)));
    }
}

// First index where the windowed power rises above a fraction of its peak.
inline int64_t energy_onset(const std::vector<const cvec*>& elems, int window) {
    std::size_t len = elems[0]->size();
    for (const auto* e : elems) len = std::min(len, e->size());
    if (len < static_cast<std::size_t>(window)) return 0;
    std::vector<double> power(len, 0.0);
    for (const auto* e : elems)
        for (std::size_t i = 0; i < len; ++i) power[i] += std::norm((*e)[i]);
    double acc = 0.0;
    std::vector<double> win(len - window + 1);
    for (std::size_t i = 0; i < len; ++i) {
        acc += power[i];
        if (i >= static_cast<std::size_t>(window)) acc -= power[i - window];
        if (i + 1 >= static_cast<std::size_t>(window)) win[i + 1 - window] = acc;
    }
    const double peak = *std::max_element(win.begin(), win.end());
    for (std::size_t i = 0; i < win.size(); ++i)
        if (win[i] > peak / 50.0) return static_cast<int64_t>(i);
    return 0;
}

}  // namespace detail

// CP-based coarse timing and carrier frequency offset, averaged across
// symbols and elements. Timing searches one symbol period around the energy
// onset; the CFO comes from the correlation angle and is unambiguous within
// half the subcarrier spacing.
inline SyncEstimate coarse_sync(const std::vector<const cvec*>& elems, const FrameConfig& cfg) {
    if (elems.empty()) throw std::invalid_argument("coarse_sync: no elements");
    const int64_t sym = cfg.symbol_len();
    std::size_t min_len = elems[0]->size();
    for (const auto* e : elems) min_len = std::min(min_len, e->size());
    if (min_len < static_cast<std::size_t>(2 * sym))
        throw SyncError("coarse_sync: signal shorter than two OFDM symbols");

    const int64_t onset = detail::energy_onset(elems, cfg.cp_len);
    const int64_t d0 = std::max<int64_t>(0, onset - sym);
    const int64_t d1 = std::min<int64_t>(onset + sym, static_cast<int64_t>(min_len) - 2 * sym);
    const int64_t count = std::max<int64_t>(1, d1 - d0 + 1);

    // symbols available for folding from the latest candidate
    const int64_t avail = (static_cast<int64_t>(min_len) - (d0 + count - 1)) / sym;
    const int64_t folds = std::clamp<int64_t>(avail, 1, cfg.n_symbols_per_frame);

    cvec folded(count, cplx{0.0, 0.0});
    std::vector<double> folded_e(count, 0.0);
    cvec corr;
    std::vector<double> energy;
    const int64_t range = count + (folds - 1) * sym;
    for (const auto* e : elems) {
        detail::cp_corr_range(*e, cfg.fft_size, cfg.cp_len, d0, range, corr, energy);
        for (int64_t i = 0; i < count; ++i)
            for (int64_t k = 0; k < folds; ++k) {
                folded[i] += corr[i + k * sym];
                folded_e[i] += energy[i + k * sym];
            }
    }

    int64_t best = 0;
    double best_mag = -1.0;
    for (int64_t i = 0; i < count; ++i) {
        if (std::abs(folded[i]) > best_mag) {
            best_mag = std::abs(folded[i]);
            best = i;
        }
    }

    SyncEstimate est;
    est.coarse_sto = d0 + best;
    est.confidence = folded_e[best] > 0 ? std::abs(folded[best]) / folded_e[best] : 0.0;
    est.coarse_cfo =
        -std::arg(folded[best]) / kTwoPi * cfg.subcarrier_spacing();
    return est;
}

inline SyncEstimate coarse_sync(const BasebandSignal& bb, const FrameConfig& cfg) {
    std::vector<const cvec*> one{&bb.samples};
    return coarse_sync(one, cfg);
}

// OFDM demodulation: strip the CP at the given start, orthonormal forward
// FFT per symbol. timing_backoff pulls the FFT window into the CP; the
// resulting linear phase is absorbed by channel estimation.
inline ResourceGrid ofdm_demodulate(const cvec& samples, const FrameConfig& cfg, int64_t start,
                                    int timing_backoff = 0) {
    if (timing_backoff < 0 || timing_backoff > cfg.cp_len)
        throw std::invalid_argument("ofdm_demodulate: backoff out of range");
    const int64_t sym = cfg.symbol_len();
    const int64_t need = start + static_cast<int64_t>(cfg.n_symbols_per_frame) * sym;
    if (start < 0 && start + cfg.cp_len - timing_backoff < 0)
        throw std::invalid_argument("ofdm_demodulate: start before signal");
    if (need > static_cast<int64_t>(samples.size()))
        throw std::invalid_argument("ofdm_demodulate: frame extends past signal end");

    Fft fft(cfg.fft_size);
    ResourceGrid grid(cfg.n_symbols_per_frame, cfg.fft_size);
    for (int s = 0; s < cfg.n_symbols_per_frame; ++s) {
        const int64_t base = start + s * sym + cfg.cp_len - timing_backoff;
        cplx* row = grid.row(s);
        for (int i = 0; i < cfg.fft_size; ++i) {
            const int64_t src = base + i;
            row[i] = (src >= 0 && src < static_cast<int64_t>(samples.size()))
                         ? samples[static_cast<std::size_t>(src)]
                         : cplx{0.0, 0.0};
        }
        fft.forward(row);
    }
    return grid;
}

namespace detail {

inline std::vector<double> unwrap(std::vector<double> ph) {
    for (std::size_t i = 1; i < ph.size(); ++i) {
        double d = ph[i] - ph[i - 1];
        while (d > kPi) {
            ph[i] -= kTwoPi;
            d -= kTwoPi;
        }
        while (d < -kPi) {
            ph[i] += kTwoPi;
            d += kTwoPi;
        }
    }
    return ph;
}

// least-squares slope of y over x
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double num = 0, den = 0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return den > 0 ? num / den : 0.0;
}

// Known pilot value at comb position index i of symbol s.
inline cplx comb_pilot_value(const PilotLayout& layout, const std::vector<cvec>& pilots, int s,
                             std::size_t comb_idx) {
    if (!layout.is_block_pilot_symbol(s)) return pilots[s][comb_idx];
    // block-pilot symbols carry pilots on every occupied cell; find the comb
    // subcarrier's position in the occupied list
    const int k = layout.comb_subcarriers[comb_idx];
    const auto it = std::lower_bound(layout.occupied.begin(), layout.occupied.end(), k);
    return pilots[s][static_cast<std::size_t>(it - layout.occupied.begin())];
}

}  // namespace detail

// Residual CFO from the comb pilots: per comb subcarrier, unwrapped pilot
// phase regressed against symbol index; the averaged slope (rad/symbol)
// divided by 2*pi*T_symbol is the residual offset in Hz.
inline double fine_cfo_estimate(const ResourceGrid& grid, const PilotLayout& layout,
                                const std::vector<cvec>& pilots, const FrameConfig& cfg) {
    if (grid.n_symbols < 2) throw std::invalid_argument("fine_cfo_estimate: need >= 2 symbols");
    std::vector<double> x(grid.n_symbols), ph(grid.n_symbols);
    for (int s = 0; s < grid.n_symbols; ++s) x[s] = s;
    double slope_sum = 0.0;
    for (std::size_t i = 0; i < layout.comb_subcarriers.size(); ++i) {
        const int bin = bin_of(layout.comb_subcarriers[i], cfg.fft_size);
        for (int s = 0; s < grid.n_symbols; ++s) {
            const cplx p = detail::comb_pilot_value(layout, pilots, s, i);
            ph[s] = std::arg(grid.at(s, bin) * std::conj(p));
        }
        slope_sum += detail::ls_slope(x, detail::unwrap(ph));
    }
    const double beta = slope_sum / static_cast<double>(layout.comb_subcarriers.size());
    return beta / (kTwoPi * cfg.symbol_duration());
}

// Residual timing from the block pilots via the DFT shift theorem: a delay
// of d samples puts a -2*pi*k*d/N phase ramp across the subcarriers, so the
// unwrapped pilot phase regressed against (signed) subcarrier index gives
// -slope * N / (2*pi) samples. Averaged over the block-pilot symbols.
inline double fine_sto_estimate(const ResourceGrid& grid, const PilotLayout& layout,
                                const std::vector<cvec>& pilots, const FrameConfig& cfg) {
    if (layout.block_pilot_symbols.empty())
        throw std::invalid_argument("fine_sto_estimate: no block pilots in grid");
    std::vector<double> x(layout.occupied.size()), ph(layout.occupied.size());
    for (std::size_t i = 0; i < layout.occupied.size(); ++i) x[i] = layout.occupied[i];
    double est_sum = 0.0;
    int used = 0;
    for (int s : layout.block_pilot_symbols) {
        if (s >= grid.n_symbols) continue;
        for (std::size_t i = 0; i < layout.occupied.size(); ++i) {
            const int bin = bin_of(layout.occupied[i], cfg.fft_size);
            ph[i] = std::arg(grid.at(s, bin) * std::conj(pilots[s][i]));
        }
        const double gamma = detail::ls_slope(x, detail::unwrap(ph));
        est_sum += -gamma * cfg.fft_size / kTwoPi;
        ++used;
    }
    return est_sum / used;
}

// Grid-domain removal of the estimated linear phases: CFO across symbols,
// timing across subcarriers. Corrections compose additively.
inline void apply_fine_correction(ResourceGrid& grid, double fine_cfo_hz, double fine_sto,
                                  const PilotLayout& layout, const FrameConfig& cfg) {
    if (!std::isfinite(fine_cfo_hz) || !std::isfinite(fine_sto))
        throw std::invalid_argument("apply_fine_correction: estimates must be finite");
    cvec freq_rot(layout.occupied.size());
    for (std::size_t i = 0; i < layout.occupied.size(); ++i) {
        const double w_f =
            kTwoPi * static_cast<double>(layout.occupied[i]) * fine_sto / cfg.fft_size;
        freq_rot[i] = {std::cos(w_f), std::sin(w_f)};
    }
    const double w_t = -kTwoPi * fine_cfo_hz * cfg.symbol_duration();
    for (int s = 0; s < grid.n_symbols; ++s) {
        const cplx rot_t{std::cos(w_t * s), std::sin(w_t * s)};
        for (std::size_t i = 0; i < layout.occupied.size(); ++i)
            grid.at_k(s, layout.occupied[i]) *= rot_t * freq_rot[i];
    }
}

// Residual carrier offset removal in the time domain (coarse stage).
inline void derotate(cvec& samples, double cfo_hz, double rate) {
    if (cfo_hz == 0.0) return;
    const double w = -kTwoPi * cfo_hz / rate;
    for (std::size_t n = 0; n < samples.size(); ++n)
        samples[n] *= cplx{std::cos(w * n), std::sin(w * n)};
}

}  // namespace aofdm
