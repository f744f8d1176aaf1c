#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

namespace pkmod {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Invalid user input (bad config, malformed polynomial, precondition violation).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration or exhaustion would exceed the hard resource guard.
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// An internal identity that must hold exactly failed to hold.
struct invariant_error : std::logic_error {
    explicit invariant_error(const std::string& what) : std::logic_error(what) {}
};

// Hard cap on any exhaustive enumeration (matrices, candidate maps, module elements).
inline constexpr std::uint64_t kEnumGuard = std::uint64_t(1) << 24;

inline std::string rat_string(const Rat& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

inline double rat_double(const Rat& r) {
    return r.convert_to<double>();
}

// Exact power p^e as a bigint.
inline Int int_pow(std::uint64_t base, std::uint64_t exp) {
    Int b = base, acc = 1;
    while (exp) {
        if (exp & 1) acc *= b;
        b *= b;
        exp >>= 1;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Deterministic counter-style RNG. Each (seed, stream) pair gives an
// independent substream, so trial results cannot depend on worker count or
// execution order.
// ---------------------------------------------------------------------------
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    SplitMix64(std::uint64_t seed, std::uint64_t stream)
        : state(seed ^ (0x9e3779b97f4a7c15ULL + stream * 0xbf58476d1ce4e5b9ULL)) {
        next();  // decorrelate nearby streams
        next();
    }

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n) by rejection, exact and platform-independent.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / n * n;
        std::uint64_t v = next();
        while (v >= limit) v = next();
        return v % n;
    }
};

}  // namespace pkmod
