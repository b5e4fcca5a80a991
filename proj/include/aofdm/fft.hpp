#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "aofdm/common.hpp"

namespace aofdm {

// Radix-2 DIT FFT with orthonormal scaling (1/sqrt(N) in both directions),
// so Parseval holds without extra bookkeeping. Twiddles are precomputed per
// plan; plans are cheap to keep around for a whole run.
class Fft {
public:
    explicit Fft(std::size_t n) : n_(n) {
        if (n == 0 || (n & (n - 1)) != 0)
            throw std::invalid_argument("Fft: size must be a power of two");
        rev_.resize(n);
        std::size_t log2n = 0;
        while ((std::size_t{1} << log2n) < n) ++log2n;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0;
            for (std::size_t b = 0; b < log2n; ++b)
                if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n - 1 - b);
            rev_[i] = r;
        }
        tw_.resize(n / 2);
        for (std::size_t k = 0; k < n / 2; ++k) {
            const double a = -kTwoPi * static_cast<double>(k) / static_cast<double>(n);
            tw_[k] = {std::cos(a), std::sin(a)};
        }
        scale_ = 1.0 / std::sqrt(static_cast<double>(n));
    }

    std::size_t size() const { return n_; }

    void forward(cplx* x) const { transform(x, false); }
    void inverse(cplx* x) const { transform(x, true); }

    void forward(cvec& x) const { check(x); transform(x.data(), false); }
    void inverse(cvec& x) const { check(x); transform(x.data(), true); }

private:
    void check(const cvec& x) const {
        if (x.size() != n_) throw std::invalid_argument("Fft: buffer size mismatch");
    }

    void transform(cplx* x, bool inv) const {
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t j = rev_[i];
            if (i < j) std::swap(x[i], x[j]);
        }
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t half = len >> 1;
            const std::size_t step = n_ / len;
            for (std::size_t base = 0; base < n_; base += len) {
                for (std::size_t k = 0; k < half; ++k) {
                    cplx w = tw_[k * step];
                    if (inv) w = std::conj(w);
                    const cplx u = x[base + k];
                    const cplx t = x[base + k + half] * w;
                    x[base + k] = u + t;
                    x[base + k + half] = u - t;
                }
            }
        }
        for (std::size_t i = 0; i < n_; ++i) x[i] *= scale_;
    }

    std::size_t n_;
    double scale_;
    std::vector<std::size_t> rev_;
    cvec tw_;
};

}  // namespace aofdm
