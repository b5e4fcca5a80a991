#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "aofdm/interleave.hpp"
#include "aofdm/qam.hpp"
#include "aofdm/rng.hpp"

using namespace aofdm;

TEST_CASE("interleave: round trip is the identity on random data") {
    Rng rng(5);
    std::vector<uint8_t> bits(100002);  // divisible by 6
    for (auto& b : bits) b = rng.next_u64() & 1;
    CHECK(bit_deinterleave(bit_interleave(bits, 6), 6) == bits);
    std::vector<uint8_t> bits8(bits.begin(), bits.begin() + 100000);
    CHECK(bit_deinterleave(bit_interleave(bits8, 8), 8) == bits8);
}

TEST_CASE("interleave: single-column input is unchanged") {
    const std::vector<uint8_t> v{1, 0, 1, 1, 0, 1};
    CHECK(bit_interleave(v, 6) == v);
}

TEST_CASE("interleave: permutation is bijective") {
    std::vector<int> idx(48);
    std::iota(idx.begin(), idx.end(), 0);
    auto out = block_interleave(idx, std::size_t{6});
    std::sort(out.begin(), out.end());
    CHECK(out == idx);
}

TEST_CASE("interleave: rejects length not divisible by rows") {
    std::vector<uint8_t> v(10, 0);
    CHECK_THROWS_AS(bit_interleave(v, 6), std::invalid_argument);
}

TEST_CASE("symbol interleave: round trip identity") {
    Rng rng(6);
    cvec syms(16 * 24);
    for (auto& s : syms) s = rng.cgaussian();
    CHECK(symbol_deinterleave(symbol_interleave(syms, 16), 16) == syms);
}

TEST_CASE("qam: both constellations have unit average power") {
    for (int order : {6, 8}) {
        const int m = 1 << order;
        double acc = 0.0;
        for (int v = 0; v < m; ++v) {
            std::vector<uint8_t> bits(order);
            for (int b = 0; b < order; ++b) bits[b] = (v >> (order - 1 - b)) & 1;
            acc += std::norm(qam::map(bits, order)[0]);
        }
        CHECK(acc / m == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("qam: adjacent levels differ in exactly one bit per axis") {
    for (int order : {6, 8}) {
        const int half = order / 2;
        const int l = qam::levels_per_axis(order);
        // collect (level, gray label) pairs and sort by level
        std::vector<std::pair<double, unsigned>> pts;
        for (unsigned g = 0; g < static_cast<unsigned>(l); ++g)
            pts.emplace_back(qam::axis_level(g, l, qam::scale(order)), g);
        std::sort(pts.begin(), pts.end());
        for (int i = 1; i < l; ++i) {
            const unsigned x = pts[i - 1].second ^ pts[i].second;
            CHECK(std::popcount(x) == 1);
        }
        (void)half;
    }
}

TEST_CASE("qam: 256-QAM corner magnitude") {
    // corner point amplitude: |s|^2 = 2 * (15/sqrt(170))^2
    std::vector<uint8_t> bits(8, 0);  // gray 0000 per axis = lowest level -15
    const auto s = qam::map(bits, 8)[0];
    CHECK(std::norm(s) == doctest::Approx(2.0 * 225.0 / 170.0).epsilon(1e-12));
}

TEST_CASE("qam: hard decisions reproduce the mapped bits for every point") {
    for (int order : {6, 8}) {
        const int m = 1 << order;
        for (int v = 0; v < m; ++v) {
            std::vector<uint8_t> bits(order);
            for (int b = 0; b < order; ++b) bits[b] = (v >> (order - 1 - b)) & 1;
            const auto sym = qam::map(bits, order);
            const auto llrs = qam::demap(sym, order, 0.1);
            CHECK(qam::hard_bits(llrs) == bits);
        }
    }
}

TEST_CASE("qam: symbol on a decision boundary yields zero LLR") {
    // midpoint between the two innermost 64-QAM levels on I: boundary for
    // the last I bit
    const double scl = qam::scale(6);
    const cvec sym{{0.0 + 2.0 * scl, scl}};  // I exactly between levels 1 and 3
    const auto llrs = qam::demap(sym, 6, 0.5);
    CHECK(llrs[2] == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("qam: LLR magnitude scales inversely with noise variance") {
    const cvec sym{{3.0 * qam::scale(6), qam::scale(6)}};
    const auto a = qam::demap(sym, 6, 0.2);
    const auto b = qam::demap(sym, 6, 0.4);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::fabs(a[i]) < qam::kLlrClamp - 1e-9 && std::fabs(a[i]) > 0)
            CHECK(a[i] / b[i] == doctest::Approx(2.0).epsilon(1e-9));
    }
}

TEST_CASE("qam: LLRs are clamped") {
    const cvec sym{{1.0, 1.0}};
    for (double v : qam::demap(sym, 6, 1e-9)) CHECK(std::fabs(v) <= qam::kLlrClamp);
}
