#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aofdm/common.hpp"
#include "aofdm/filters.hpp"
#include "aofdm/iqfile.hpp"
#include "aofdm/rng.hpp"

namespace aofdm {

// Synthetic through-tissue channel: long-delay-spread multipath FIR per
// receive element plus the three sync impairments and per-element AWGN.
struct ChannelSpec {
    double delay_spread_s = 200e-6;  // RMS about the profile centroid
    int n_taps = 64;
    double tap_spacing_s = 10e-6;
    std::optional<double> decay_s;   // exponential power-profile constant;
                                     // solved from delay_spread_s when unset
    double cfo_hz = 0.0;
    double sto_samples = 0.0;
    double sro_ppm = 0.0;
    std::optional<double> snr_db;    // per-element; unset = noiseless

    void validate() const {
        if (n_taps < 1) throw ConfigError("channel: n_taps must be >= 1");
        if (n_taps > 1 && delay_spread_s <= 0 && !decay_s)
            throw ConfigError("channel: delay_spread must be positive");
        if (n_taps > 1 && tap_spacing_s <= 0)
            throw ConfigError("channel: tap_spacing must be positive");
        if (snr_db && !std::isfinite(*snr_db)) throw ConfigError("channel: snr must be finite");
    }
};

struct ChannelElement {
    std::vector<std::pair<double, cplx>> taps;  // (delay seconds, coefficient)
    double cfo_hz = 0.0;
    double sto_samples = 0.0;
    double sro_ppm = 0.0;
    std::optional<double> snr_db;
    uint64_t noise_seed = 0;
};

struct ChannelModel {
    std::vector<ChannelElement> elements;
};

namespace detail {

// RMS delay spread (about the centroid) of an exponential profile sampled
// on the tap grid.
inline double profile_rms(int n_taps, double spacing, double decay) {
    double p_sum = 0, t_sum = 0, t2_sum = 0;
    for (int i = 0; i < n_taps; ++i) {
        const double t = i * spacing;
        const double p = std::exp(-t / decay);
        p_sum += p;
        t_sum += p * t;
        t2_sum += p * t * t;
    }
    const double mean = t_sum / p_sum;
    return std::sqrt(std::max(0.0, t2_sum / p_sum - mean * mean));
}

// Invert profile_rms by bisection; the discrete, truncated profile has a
// smaller RMS than its decay constant, so solving keeps the realized spread
// on target.
inline double solve_decay(int n_taps, double spacing, double target_rms) {
    const double span = (n_taps - 1) * spacing;
    const double max_rms = span / std::sqrt(12.0);  // uniform-profile limit
    if (target_rms >= max_rms * 0.999)
        throw ConfigError("channel: requested delay spread needs a longer tap span (max " +
                          std::to_string(max_rms * 1e6) + " us for this grid)");
    double lo = spacing * 1e-3, hi = span * 1e3;
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        (profile_rms(n_taps, spacing, mid) < target_rms ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

}  // namespace detail

// Independent per-element FIR realizations: i.i.d. complex Gaussian taps on
// an exponential power-delay profile, normalized to unit energy.
// Deterministic in (spec, master_seed).
inline ChannelModel synthesize_channel(const ChannelSpec& spec, int n_elements,
                                       uint64_t master_seed) {
    spec.validate();
    if (n_elements < 1) throw ConfigError("channel: need at least one element");
    ChannelModel model;
    model.elements.resize(n_elements);

    std::vector<double> powers(spec.n_taps, 1.0);
    if (spec.n_taps > 1) {
        const double decay = spec.decay_s
                                 ? *spec.decay_s
                                 : detail::solve_decay(spec.n_taps, spec.tap_spacing_s,
                                                       spec.delay_spread_s);
        for (int i = 0; i < spec.n_taps; ++i)
            powers[i] = std::exp(-(i * spec.tap_spacing_s) / decay);
        double sum = 0;
        for (double p : powers) sum += p;
        for (double& p : powers) p /= sum;
    }

    for (int e = 0; e < n_elements; ++e) {
        auto& el = model.elements[e];
        el.cfo_hz = spec.cfo_hz;
        el.sto_samples = spec.sto_samples;
        el.sro_ppm = spec.sro_ppm;
        el.snr_db = spec.snr_db;
        el.noise_seed = derive_seed(master_seed, "channel-noise", e);

        if (spec.n_taps == 1) {
            el.taps = {{0.0, cplx{1.0, 0.0}}};
            continue;
        }
        Rng rng(derive_seed(master_seed, "channel-taps", e));
        double energy = 0.0;
        el.taps.reserve(spec.n_taps);
        for (int i = 0; i < spec.n_taps; ++i) {
            const cplx h = rng.cgaussian() * std::sqrt(powers[i]);
            el.taps.emplace_back(i * spec.tap_spacing_s, h);
            energy += std::norm(h);
        }
        const double inv = 1.0 / std::sqrt(energy);
        for (auto& [d, h] : el.taps) h *= inv;
    }
    return model;
}

// FIR convolution, fractional-delay STO, CFO rotation, sample-rate-offset
// resampling, then AWGN at the configured per-element SNR (measured against
// post-channel signal power).
inline std::vector<BasebandSignal> apply_channel(const BasebandSignal& tx,
                                                 const ChannelModel& model) {
    if (tx.samples.empty()) throw std::invalid_argument("apply_channel: empty input");
    std::vector<BasebandSignal> out(model.elements.size());

    for (std::size_t e = 0; e < model.elements.size(); ++e) {
        const auto& el = model.elements[e];

        // sparse FIR on the sample grid
        std::vector<std::pair<int, cplx>> taps;
        int max_pos = 0;
        for (const auto& [delay_s, h] : el.taps) {
            const int pos = static_cast<int>(std::round(delay_s * tx.rate));
            taps.emplace_back(pos, h);
            max_pos = std::max(max_pos, pos);
        }
        cvec y(tx.samples.size() + max_pos, cplx{0.0, 0.0});
        for (const auto& [pos, h] : taps) {
            if (h == cplx{1.0, 0.0} && pos == 0) {
                for (std::size_t n = 0; n < tx.samples.size(); ++n) y[n] += tx.samples[n];
            } else {
                for (std::size_t n = 0; n < tx.samples.size(); ++n)
                    y[n + pos] += tx.samples[n] * h;
            }
        }

        // symbol timing offset: integer part shifts, fractional part sincs
        const double sto_int = std::floor(el.sto_samples);
        const double sto_frac = el.sto_samples - sto_int;
        if (sto_int != 0.0) {
            const auto d = static_cast<std::ptrdiff_t>(sto_int);
            cvec shifted(y.size() + std::max<std::ptrdiff_t>(d, 0), cplx{0.0, 0.0});
            for (std::ptrdiff_t n = 0; n < static_cast<std::ptrdiff_t>(shifted.size()); ++n) {
                const std::ptrdiff_t src = n - d;
                if (src >= 0 && src < static_cast<std::ptrdiff_t>(y.size()))
                    shifted[n] = y[src];
            }
            y = std::move(shifted);
        }
        if (sto_frac > 1e-12) {
            cvec shifted(y.size() + 1);
            for (std::size_t n = 0; n < shifted.size(); ++n)
                shifted[n] = sinc_interp(y, static_cast<double>(n) - sto_frac);
            y = std::move(shifted);
        }

        if (el.cfo_hz != 0.0) {
            const double w = kTwoPi * el.cfo_hz / tx.rate;
            for (std::size_t n = 0; n < y.size(); ++n)
                y[n] *= cplx{std::cos(w * n), std::sin(w * n)};
        }

        if (el.sro_ppm != 0.0) y = resample_ratio(y, 1.0 + el.sro_ppm * 1e-6);

        if (el.snr_db) {
            const double p = mean_power(y);
            const double sigma2 = p / power_from_db(*el.snr_db);
            Rng noise(el.noise_seed);
            const double s = std::sqrt(sigma2);
            for (auto& v : y) v += noise.cgaussian() * s;
        }

        out[e].rate = tx.rate;
        out[e].samples = std::move(y);
    }
    return out;
}

// Recorded-waveform replay: the capture file stands in for the hardware
// record path; no resampling is applied.
inline std::vector<BasebandSignal> replay_capture(const std::string& path) {
    return iq::read_multichannel(path);
}

}  // namespace aofdm
