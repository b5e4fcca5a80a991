#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "aofdm/common.hpp"

namespace aofdm {

inline double bessel_i0(double x) {
    // power series; converges quickly for the beta range used here
    double sum = 1.0, term = 1.0;
    const double q = x * x / 4.0;
    for (int k = 1; k < 64; ++k) {
        term *= q / (k * k);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

inline std::vector<double> kaiser_window(std::size_t n, double beta) {
    std::vector<double> w(n);
    const double denom = bessel_i0(beta);
    const double m = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = 2.0 * i / m - 1.0;
        w[i] = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / denom;
    }
    return w;
}

inline double sinc(double x) {
    if (std::fabs(x) < 1e-12) return 1.0;
    return std::sin(kPi * x) / (kPi * x);
}

// Kaiser-windowed sinc lowpass, unit DC gain. cutoff is in cycles/sample.
inline std::vector<double> design_lowpass(std::size_t n_taps, double cutoff, double beta) {
    if (n_taps % 2 == 0) throw std::invalid_argument("design_lowpass: tap count must be odd");
    std::vector<double> h(n_taps);
    const auto w = kaiser_window(n_taps, beta);
    const double mid = (n_taps - 1) / 2.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n_taps; ++i) {
        h[i] = 2.0 * cutoff * sinc(2.0 * cutoff * (i - mid)) * w[i];
        sum += h[i];
    }
    for (auto& v : h) v /= sum;
    return h;
}

struct LowpassDesign {
    std::vector<double> taps;
    int group_delay = 0;  // samples at the filter rate
};

// Kaiser design from band edges (Hz at `rate`) and stopband attenuation.
// Tap count is rounded up so the group delay is an integer multiple of
// `delay_multiple` samples.
inline LowpassDesign design_kaiser_lowpass(double pass_hz, double stop_hz, double atten_db,
                                           double rate, int delay_multiple = 1) {
    if (stop_hz <= pass_hz || stop_hz > rate / 2)
        throw std::invalid_argument("design_kaiser_lowpass: bad band edges");
    const double dw = kTwoPi * (stop_hz - pass_hz) / rate;
    const double beta = atten_db > 50.0 ? 0.1102 * (atten_db - 8.7)
                        : atten_db >= 21.0
                            ? 0.5842 * std::pow(atten_db - 21.0, 0.4) + 0.07886 * (atten_db - 21.0)
                            : 0.0;
    std::size_t n = static_cast<std::size_t>(std::ceil((atten_db - 8.0) / (2.285 * dw))) + 1;
    // round up so (n-1)/2 is a multiple of delay_multiple
    const std::size_t step = 2 * static_cast<std::size_t>(delay_multiple);
    n = ((n + step - 2) / step) * step + 1;
    const double cutoff = 0.5 * (pass_hz + stop_hz) / rate;
    LowpassDesign d;
    d.taps = design_lowpass(n, cutoff, beta);
    d.group_delay = static_cast<int>((n - 1) / 2);
    return d;
}

// Polyphase zero-stuffing interpolator with gain L (amplitude preserving).
template <typename T>
std::vector<T> upsample_fir(const std::vector<T>& x, int factor,
                            const std::vector<double>& h) {
    std::vector<T> y(x.size() * factor, T{});
    const std::ptrdiff_t nh = static_cast<std::ptrdiff_t>(h.size());
    for (std::size_t m = 0; m < y.size(); ++m) {
        T acc{};
        const std::ptrdiff_t mm = static_cast<std::ptrdiff_t>(m);
        // only taps hitting non-zero (stuffed) inputs contribute
        std::ptrdiff_t p = mm % factor;
        for (std::ptrdiff_t t = p; t < nh; t += factor) {
            const std::ptrdiff_t xi = (mm - t) / factor;
            if (xi >= 0 && xi < static_cast<std::ptrdiff_t>(x.size()))
                acc += x[xi] * h[t];
        }
        y[m] = acc * static_cast<double>(factor);
    }
    return y;
}

// FIR + keep-every-D-th decimator.
template <typename T>
std::vector<T> decimate_fir(const std::vector<T>& x, int factor,
                            const std::vector<double>& h) {
    const std::size_t n_out = x.size() / factor;
    std::vector<T> y(n_out, T{});
    const std::ptrdiff_t nh = static_cast<std::ptrdiff_t>(h.size());
    for (std::size_t m = 0; m < n_out; ++m) {
        const std::ptrdiff_t center = static_cast<std::ptrdiff_t>(m) * factor;
        T acc{};
        for (std::ptrdiff_t t = 0; t < nh; ++t) {
            const std::ptrdiff_t xi = center - t;
            if (xi >= 0 && xi < static_cast<std::ptrdiff_t>(x.size())) acc += x[xi] * h[t];
        }
        y[m] = acc;
    }
    return y;
}

// Windowed-sinc evaluation of x at fractional position t (samples); zero
// outside the record. Shared by the fractional-delay and sample-rate-offset
// paths.
inline cplx sinc_interp(const cvec& x, double t, int half_taps = 16, double beta = 8.0) {
    const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(std::floor(t));
    const double i0 = bessel_i0(beta);
    cplx acc{0.0, 0.0};
    for (std::ptrdiff_t j = base - half_taps + 1; j <= base + half_taps; ++j) {
        if (j < 0 || j >= static_cast<std::ptrdiff_t>(x.size())) continue;
        const double u = t - static_cast<double>(j);
        const double r = u / half_taps;
        if (std::fabs(r) >= 1.0) continue;
        const double w = bessel_i0(beta * std::sqrt(1.0 - r * r)) / i0;
        acc += x[static_cast<std::size_t>(j)] * (sinc(u) * w);
    }
    return acc;
}

// y[n] = x(n - delay); integer delays shift exactly, fractional parts go
// through the windowed sinc.
inline cvec fractional_delay(const cvec& x, double delay) {
    const double rounded = std::round(delay);
    cvec y(x.size(), cplx{0.0, 0.0});
    if (std::fabs(delay - rounded) < 1e-12) {
        const std::ptrdiff_t d = static_cast<std::ptrdiff_t>(rounded);
        for (std::ptrdiff_t n = 0; n < static_cast<std::ptrdiff_t>(x.size()); ++n) {
            const std::ptrdiff_t src = n - d;
            if (src >= 0 && src < static_cast<std::ptrdiff_t>(x.size())) y[n] = x[src];
        }
        return y;
    }
    for (std::size_t n = 0; n < x.size(); ++n)
        y[n] = sinc_interp(x, static_cast<double>(n) - delay);
    return y;
}

// Resample by a ratio close to 1 (sample-rate offset): output m taken at
// input position m / ratio.
inline cvec resample_ratio(const cvec& x, double ratio) {
    if (ratio <= 0) throw std::invalid_argument("resample_ratio: ratio must be positive");
    if (ratio == 1.0) return x;
    const std::size_t n_out = static_cast<std::size_t>(std::floor(x.size() * ratio));
    cvec y(n_out);
    for (std::size_t m = 0; m < n_out; ++m)
        y[m] = sinc_interp(x, static_cast<double>(m) / ratio);
    return y;
}

}  // namespace aofdm
