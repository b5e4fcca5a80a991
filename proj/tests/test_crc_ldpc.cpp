#include <doctest.h>

#include <cstring>

#include "aofdm/crc32.hpp"
#include "aofdm/ldpc.hpp"
#include "aofdm/rng.hpp"
#include "aofdm/txchain.hpp"

using namespace aofdm;

namespace {

// Independent bit-serial CRC-32 oracle (reflected 0xEDB88320, no table).
uint32_t crc32_oracle(const std::vector<uint8_t>& bytes) {
    uint32_t crc = 0xFFFFFFFFu;
    for (uint8_t byte : bytes) {
        crc ^= byte;
        for (int b = 0; b < 8; ++b)
            crc = (crc & 1u) ? (crc >> 1) ^ 0xEDB88320u : crc >> 1;
    }
    return crc ^ 0xFFFFFFFFu;
}

// Independent sparse H*c oracle straight from the base-matrix definition.
bool parity_oracle(const ldpc::QcTable& t, const std::vector<uint8_t>& cw) {
    for (int r = 0; r < t.base_rows(); ++r)
        for (int i = 0; i < t.z; ++i) {
            uint8_t acc = 0;
            for (int c = 0; c < t.base_cols(); ++c) {
                const int s = t.rows[r][c];
                if (s < 0) continue;
                acc ^= cw[c * t.z + (i + s) % t.z];
            }
            if (acc) return false;
        }
    return true;
}

std::vector<uint8_t> random_bits(std::size_t n, uint64_t seed) {
    Rng rng(seed);
    std::vector<uint8_t> bits(n);
    for (auto& b : bits) b = rng.next_u64() & 1;
    return bits;
}

}  // namespace

TEST_CASE("crc32: standard check value") {
    const std::vector<uint8_t> msg{'1', '2', '3', '4', '5', '6', '7', '8', '9'};
    CHECK(crc32(msg.data(), msg.size()) == 0xCBF43926u);
    CHECK(crc32_oracle(msg) == 0xCBF43926u);
}

TEST_CASE("crc32: matches the bit-serial oracle on random input") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<uint8_t> bytes(1 + rng.next_u64() % 300);
        for (auto& b : bytes) b = static_cast<uint8_t>(rng.next_u64());
        CHECK(crc32(bytes.data(), bytes.size()) == crc32_oracle(bytes));
    }
}

TEST_CASE("crc: any single bit flip in a block is detected") {
    TransportBlock blk;
    blk.seq = 3;
    blk.payload.assign(kBlockCapacity, 0);
    for (int i = 0; i < kBlockCapacity; ++i) blk.payload[i] = static_cast<uint8_t>(i * 7 + 1);
    blk.len = kBlockCapacity;
    crc_attach(blk);
    CHECK(crc_check(blk));
    for (int byte = 0; byte < kBlockCapacity; ++byte)
        for (int bit = 0; bit < 8; ++bit) {
            blk.payload[byte] ^= 1u << bit;
            CHECK_FALSE(crc_check(blk));
            blk.payload[byte] ^= 1u << bit;
        }
    CHECK(crc_check(blk));
}

TEST_CASE("crc: deterministic on empty payload") {
    TransportBlock a, b;
    a.payload.assign(kBlockCapacity, 0);
    b.payload.assign(kBlockCapacity, 0);
    crc_attach(a);
    crc_attach(b);
    CHECK(a.crc == b.crc);
}

TEST_CASE("ldpc: embedded table equals the shipped data file") {
    const auto file = ldpc::load_table(std::string(AOFDM_SOURCE_DIR) +
                                       "/data/ldpc_n1944_z81_r23.txt");
    const auto& emb = ldpc::default_table();
    CHECK(file.z == emb.z);
    REQUIRE(file.rows.size() == emb.rows.size());
    for (std::size_t r = 0; r < file.rows.size(); ++r) CHECK(file.rows[r] == emb.rows[r]);
}

TEST_CASE("ldpc: base matrix has no 4-cycles") {
    const auto& t = ldpc::default_table();
    const int bc = t.base_cols();
    for (int r1 = 0; r1 < t.base_rows(); ++r1)
        for (int r2 = r1 + 1; r2 < t.base_rows(); ++r2)
            for (int c1 = 0; c1 < bc; ++c1)
                for (int c2 = c1 + 1; c2 < bc; ++c2) {
                    const int a = t.rows[r1][c1], b = t.rows[r1][c2];
                    const int c = t.rows[r2][c1], d = t.rows[r2][c2];
                    if (a < 0 || b < 0 || c < 0 || d < 0) continue;
                    const int delta = (((a - b - c + d) % t.z) + t.z) % t.z;
                    CHECK(delta != 0);
                }
}

TEST_CASE("ldpc: code dimensions") {
    ldpc::Code code;
    CHECK(code.n() == 1944);
    CHECK(code.k() == 1296);
    CHECK(code.rate() == doctest::Approx(2.0 / 3.0));
    CHECK(code.k() / 8 == kBlockBytes);
}

TEST_CASE("ldpc: all-zero info encodes to the all-zero codeword") {
    ldpc::Code code;
    const auto cw = code.encode(std::vector<uint8_t>(code.k(), 0));
    for (uint8_t b : cw) CHECK(b == 0);
}

TEST_CASE("ldpc: every random codeword satisfies the parity oracle") {
    ldpc::Code code;
    for (uint64_t seed = 0; seed < 8; ++seed) {
        const auto cw = code.encode(random_bits(code.k(), seed));
        CHECK(code.check(cw));
        CHECK(parity_oracle(ldpc::default_table(), cw));
    }
}

TEST_CASE("ldpc: sum of two codewords is a codeword") {
    ldpc::Code code;
    const auto a = code.encode(random_bits(code.k(), 21));
    const auto b = code.encode(random_bits(code.k(), 22));
    std::vector<uint8_t> sum(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) sum[i] = a[i] ^ b[i];
    CHECK(parity_oracle(ldpc::default_table(), sum));
}

TEST_CASE("ldpc: encode rejects wrong input length") {
    ldpc::Code code;
    CHECK_THROWS_AS(code.encode(std::vector<uint8_t>(100, 0)), std::invalid_argument);
}

TEST_CASE("ldpc: noiseless decode converges in one iteration") {
    ldpc::Code code;
    const auto info = random_bits(code.k(), 33);
    const auto cw = code.encode(info);
    std::vector<double> llrs(cw.size());
    for (std::size_t i = 0; i < cw.size(); ++i) llrs[i] = cw[i] ? -8.0 : 8.0;
    const auto res = code.decode(llrs);
    CHECK(res.converged);
    CHECK(res.iterations == 1);
    CHECK(res.info == info);
}

TEST_CASE("ldpc: all-zero LLRs do not converge") {
    ldpc::Code code;
    const auto res = code.decode(std::vector<double>(code.n(), 0.0));
    CHECK_FALSE(res.converged);
}

TEST_CASE("ldpc: decode corrects BPSK noise at Eb/N0 = 4 dB") {
    // waterfall check for the shipped code: post-decode BER < 1e-5 over
    // >= 1e6 info bits (expected: zero errors this far above threshold)
    ldpc::Code code;
    const double ebn0 = std::pow(10.0, 4.0 / 10.0);
    const double esn0 = ebn0 * code.rate();
    const double sigma = std::sqrt(1.0 / (2.0 * esn0));
    Rng noise(99);
    uint64_t errors = 0, bits = 0;
    const int n_codewords = (1'000'000 + code.k() - 1) / code.k();
    for (int w = 0; w < n_codewords; ++w) {
        const auto info = random_bits(code.k(), 1000 + w);
        const auto cw = code.encode(info);
        std::vector<double> llrs(cw.size());
        for (std::size_t i = 0; i < cw.size(); ++i) {
            const double tx = cw[i] ? -1.0 : 1.0;
            const double rx = tx + sigma * noise.gaussian();
            llrs[i] = 2.0 * rx / (sigma * sigma);
        }
        const auto res = code.decode(llrs);
        for (int i = 0; i < code.k(); ++i)
            if (res.info[i] != info[i]) ++errors;
        bits += code.k();
    }
    CHECK(bits >= 1'000'000);
    CHECK(static_cast<double>(errors) / bits < 1e-5);
}
