#pragma once

#include <cstdint>
#include <string>

#include "pkmod/base.hpp"

namespace pkmod {

// Sentinel for the valuation of 0 (the only element with infinite valuation).
inline constexpr unsigned kValInfinity = ~0u;

// The ambient coefficient ring Z/p^k. p is verified prime at construction.
// p^k must stay below 2^32 so that products of canonical residues are exact
// in 64-bit arithmetic.
struct RingParams {
    std::uint64_t p = 2;
    unsigned k = 1;
    std::uint64_t pk = 2;  // p^k

    RingParams() = default;

    RingParams(std::uint64_t p_, unsigned k_) : p(p_), k(k_) {
        if (p < 2) throw config_error("p must be a prime >= 2");
        for (std::uint64_t d = 2; d * d <= p; ++d)
            if (p % d == 0) throw config_error("p = " + std::to_string(p) + " is not prime");
        if (k < 1) throw config_error("k must be >= 1");
        pk = 1;
        for (unsigned i = 0; i < k; ++i) {
            if (pk > (std::uint64_t(1) << 32) / p)
                throw config_error("p^k exceeds the 2^32 working bound");
            pk *= p;
        }
    }

    bool operator==(const RingParams&) const = default;

    std::uint64_t reduce(std::uint64_t v) const { return v % pk; }
    std::uint64_t reduce_signed(std::int64_t v) const {
        std::int64_t m = v % std::int64_t(pk);
        if (m < 0) m += std::int64_t(pk);
        return std::uint64_t(m);
    }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % pk; }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + pk - b) % pk; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return (a * b) % pk; }
    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : pk - a; }

    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
        std::uint64_t acc = 1 % pk;
        a %= pk;
        while (e) {
            if (e & 1) acc = mul(acc, a);
            a = mul(a, a);
            e >>= 1;
        }
        return acc;
    }

    bool is_unit(std::uint64_t a) const { return a % p != 0; }

    // Largest m with p^m | a; kValInfinity for a = 0.
    unsigned valuation(std::uint64_t a) const {
        a %= pk;
        if (a == 0) return kValInfinity;
        unsigned v = 0;
        while (a % p == 0) {
            a /= p;
            ++v;
        }
        return v;
    }

    // Inverse of a unit, by Euler: a^(phi(p^k)-1) = a^(p^(k-1)(p-1)-1).
    std::uint64_t inv(std::uint64_t a) const {
        a %= pk;
        if (!is_unit(a)) throw invariant_error("inverse of a non-unit mod p^k");
        std::uint64_t phi = pk / p * (p - 1);
        return pow(a, phi - 1);
    }

    // Writes a = p^v * u with u a unit (a != 0).
    std::uint64_t unit_part(std::uint64_t a) const {
        unsigned v = valuation(a);
        if (v == kValInfinity) throw invariant_error("unit_part of zero");
        std::uint64_t q = a;
        for (unsigned i = 0; i < v; ++i) q /= p;
        return q;
    }

    std::uint64_t p_power(unsigned e) const {
        std::uint64_t r = 1;
        for (unsigned i = 0; i < e && i < k; ++i) r *= p;
        return e >= k ? 0 : r;  // p^k = 0 in the ring
    }

    RingParams with_precision(unsigned k2) const { return RingParams(p, k2); }
};

}  // namespace pkmod
