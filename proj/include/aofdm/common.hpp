#pragma once

#include <complex>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace aofdm {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Error categories map 1:1 onto CLI exit codes.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SyncError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DecodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double db_from_power(double p) { return 10.0 * std::log10(p); }
inline double power_from_db(double db) { return std::pow(10.0, db / 10.0); }
inline double db_from_amplitude(double a) { return 20.0 * std::log10(a); }

inline double mean_power(const cvec& x) {
    if (x.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& v : x) acc += std::norm(v);
    return acc / static_cast<double>(x.size());
}

// Complex baseband samples with their sample rate.
struct BasebandSignal {
    cvec samples;
    double rate = 0.0;  // complex samples/s
};

// Real passband samples at converter rate.
struct PassbandSignal {
    std::vector<double> samples;
    double rate = 0.0;  // real samples/s
    double carrier = 0.0;
};

}  // namespace aofdm
