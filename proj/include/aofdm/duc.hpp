#pragma once

#include <cmath>
#include <stdexcept>

#include "aofdm/common.hpp"
#include "aofdm/filters.hpp"
#include "aofdm/grid.hpp"

namespace aofdm {

// Anti-image / anti-alias filter band edges relative to the baseband rate.
// The occupied OFDM band stops below 0.4 * rate with Table-I-like configs,
// so the transition 0.4..0.6 leaves the signal untouched while images land
// in the stopband.
inline constexpr double kDucPassFrac = 0.4;
inline constexpr double kDucStopFrac = 0.6;
inline constexpr double kDucAttenDb = 65.0;

inline LowpassDesign duc_filter(double baseband_rate, int up_factor) {
    return design_kaiser_lowpass(kDucPassFrac * baseband_rate, kDucStopFrac * baseband_rate,
                                 kDucAttenDb, baseband_rate * up_factor, up_factor);
}

inline LowpassDesign ddc_filter(double baseband_rate, int down_factor) {
    return design_kaiser_lowpass(kDucPassFrac * baseband_rate, kDucStopFrac * baseband_rate,
                                 kDucAttenDb, baseband_rate * down_factor, down_factor);
}

// Group delay of the up+down conversion round trip, in baseband samples
// (integer by filter design).
inline int duc_ddc_delay(const FrameConfig& cfg) {
    const int up = duc_filter(cfg.baseband_rate, cfg.up_factor()).group_delay / cfg.up_factor();
    const int dn =
        ddc_filter(cfg.baseband_rate, cfg.down_factor()).group_delay / cfg.down_factor();
    return up + dn;
}

// Digital up-converter: polyphase interpolation to the DAC rate, then
// s[n] = Re{x[n] * e^{j 2 pi fc n / rate}}.
inline PassbandSignal up_convert(const BasebandSignal& bb, double carrier, double dac_rate) {
    const double ratio = dac_rate / bb.rate;
    if (std::fabs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0)
        throw std::invalid_argument("up_convert: dac rate must be an integer multiple");
    if (dac_rate < 2.0 * (carrier + bb.rate / 2))
        throw std::invalid_argument("up_convert: dac rate too low for carrier");
    const int up = static_cast<int>(std::round(ratio));
    const auto filt = duc_filter(bb.rate, up);
    const cvec hi = upsample_fir(bb.samples, up, filt.taps);

    PassbandSignal out;
    out.rate = dac_rate;
    out.carrier = carrier;
    out.samples.resize(hi.size());
    const double w = kTwoPi * carrier / dac_rate;
    for (std::size_t n = 0; n < hi.size(); ++n) {
        const double ph = w * static_cast<double>(n);
        out.samples[n] = hi[n].real() * std::cos(ph) - hi[n].imag() * std::sin(ph);
    }
    return out;
}

// Digital down-converter: mix to baseband (factor 2 restores the amplitude
// halved by taking the real passband), lowpass, decimate.
inline BasebandSignal down_convert(const PassbandSignal& pb, double carrier,
                                   double baseband_rate) {
    const double ratio = pb.rate / baseband_rate;
    if (std::fabs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0)
        throw std::invalid_argument("down_convert: adc rate must be an integer multiple");
    const int down = static_cast<int>(std::round(ratio));
    const auto filt = ddc_filter(baseband_rate, down);

    cvec mixed(pb.samples.size());
    const double w = kTwoPi * carrier / pb.rate;
    for (std::size_t n = 0; n < mixed.size(); ++n) {
        const double ph = w * static_cast<double>(n);
        mixed[n] = 2.0 * pb.samples[n] * cplx{std::cos(ph), -std::sin(ph)};
    }
    BasebandSignal out;
    out.rate = baseband_rate;
    out.samples = decimate_fir(mixed, down, filt.taps);
    return out;
}

}  // namespace aofdm
