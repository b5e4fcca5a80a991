#include <doctest.h>

#include "aofdm/fft.hpp"
#include "aofdm/rng.hpp"

using namespace aofdm;

TEST_CASE("fft: single loaded bin gives the matching complex exponential") {
    const std::size_t n = 64;
    Fft fft(n);
    cvec x(n, {0.0, 0.0});
    const int k = 5;
    x[k] = {1.0, 0.0};
    fft.inverse(x);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double ph = kTwoPi * k * static_cast<double>(i) / n;
        CHECK(std::abs(x[i] - scale * cplx{std::cos(ph), std::sin(ph)}) < 1e-12);
    }
}

TEST_CASE("fft: orthonormal round trip and Parseval") {
    const std::size_t n = 1024;
    Fft fft(n);
    Rng rng(7);
    cvec x(n);
    for (auto& v : x) v = rng.cgaussian();
    const cvec orig = x;
    const double e_time = mean_power(x) * n;

    fft.forward(x);
    const double e_freq = mean_power(x) * n;
    CHECK(std::abs(e_time - e_freq) / e_time < 1e-12);

    fft.inverse(x);
    double err = 0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(x[i] - orig[i]));
    CHECK(err < 1e-12);
}

TEST_CASE("fft: rejects non-power-of-two sizes") {
    CHECK_THROWS_AS(Fft(48), std::invalid_argument);
    CHECK_THROWS_AS(Fft(0), std::invalid_argument);
}

TEST_CASE("rng: deterministic and reasonably gaussian") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng g(3);
    const int n = 200000;
    double mean = 0, var = 0;
    for (int i = 0; i < n; ++i) {
        const double v = g.gaussian();
        mean += v;
        var += v * v;
    }
    mean /= n;
    var = var / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("rng: derive_seed separates purposes and indices") {
    CHECK(derive_seed(1, "a", 0) != derive_seed(1, "b", 0));
    CHECK(derive_seed(1, "a", 0) != derive_seed(1, "a", 1));
    CHECK(derive_seed(1, "a", 3) == derive_seed(1, "a", 3));
}
