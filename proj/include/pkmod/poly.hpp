#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pkmod/base.hpp"
#include "pkmod/zmod.hpp"

namespace pkmod {

// Polynomial over Z/p^k, coefficients lowest degree first, trailing zeros
// trimmed. The zero polynomial has empty storage; its degree is the nullopt
// sentinel, never -1 arithmetic.
struct Poly {
    RingParams ring;
    std::vector<std::uint64_t> c;

    Poly() = default;
    explicit Poly(RingParams r) : ring(r) {}
    Poly(RingParams r, std::vector<std::uint64_t> coeffs) : ring(r), c(std::move(coeffs)) {
        for (auto& x : c) x = ring.reduce(x);
        trim();
    }

    static Poly constant(RingParams r, std::uint64_t v) { return Poly(r, {v}); }
    static Poly monomial(RingParams r, std::uint64_t v, size_t deg) {
        std::vector<std::uint64_t> coeffs(deg + 1, 0);
        coeffs[deg] = v;
        return Poly(r, std::move(coeffs));
    }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    bool is_zero() const { return c.empty(); }
    std::optional<size_t> degree() const {
        if (c.empty()) return std::nullopt;
        return c.size() - 1;
    }
    std::uint64_t coeff(size_t i) const { return i < c.size() ? c[i] : 0; }
    std::uint64_t lead() const { return c.empty() ? 0 : c.back(); }
    bool is_monic() const { return !c.empty() && c.back() == 1; }
    bool operator==(const Poly& o) const { return c == o.c; }

    std::uint64_t eval(std::uint64_t x) const {
        std::uint64_t acc = 0;
        for (size_t i = c.size(); i-- > 0;) acc = ring.add(ring.mul(acc, x), c[i]);
        return acc;
    }


    Poly reduced_mod_p() const {
        Poly r(RingParams(ring.p, 1));
        r.c.reserve(c.size());
        for (auto x : c) r.c.push_back(x % ring.p);
        r.trim();
        return r;
    }

    // Lift coefficients verbatim into precision k2 >= k.
    Poly lifted(unsigned k2) const {
        Poly r(ring.with_precision(k2));
        r.c = c;
        r.trim();
        return r;
    }

    std::string str() const {
        if (c.empty()) return "0";
        std::string s;
        for (size_t i = 0; i < c.size(); ++i) {
            if (c[i] == 0) continue;
            if (!s.empty()) s += " + ";
            if (i == 0 || c[i] != 1) s += std::to_string(c[i]);
            if (i > 0) {
                if (c[i] != 1) s += "*";
                s += "t";
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s;
    }
};

inline Poly operator+(const Poly& a, const Poly& b) {
    Poly r(a.ring);
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.ring.add(a.coeff(i), b.coeff(i));
    r.trim();
    return r;
}

inline Poly operator-(const Poly& a, const Poly& b) {
    Poly r(a.ring);
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.ring.sub(a.coeff(i), b.coeff(i));
    r.trim();
    return r;
}

inline Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.ring);
    Poly r(a.ring);
    r.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = a.ring.add(r.c[i + j], a.ring.mul(a.c[i], b.c[j]));
    }
    r.trim();
    return r;
}

inline Poly operator*(std::uint64_t s, const Poly& a) {
    Poly r(a.ring);
    r.c.reserve(a.c.size());
    for (auto x : a.c) r.c.push_back(a.ring.mul(s, x));
    r.trim();
    return r;
}

inline Poly operator-(const Poly& a) { return (a.ring.pk - 1) * a; }

// Division with remainder by a monic divisor; exact over Z/p^k.
inline void divmod_monic(const Poly& a, const Poly& g, Poly& q, Poly& r) {
    if (!g.is_monic()) throw invariant_error("divmod requires a monic divisor");
    const size_t dg = *g.degree();
    q = Poly(a.ring);
    r = a;
    if (r.c.size() <= dg) return;
    q.c.assign(r.c.size() - dg, 0);
    while (r.c.size() > dg) {
        std::uint64_t lead = r.c.back();
        size_t shift = r.c.size() - 1 - dg;
        q.c[shift] = lead;
        for (size_t j = 0; j <= dg; ++j)
            r.c[shift + j] = a.ring.sub(r.c[shift + j], a.ring.mul(lead, g.coeff(j)));
        r.trim();  // the top coefficient cancels (g is monic)
    }
    q.trim();
}

inline Poly mod_monic(const Poly& a, const Poly& g) {
    Poly q(a.ring), r(a.ring);
    divmod_monic(a, g, q, r);
    return r;
}

inline Poly mulmod(const Poly& a, const Poly& b, const Poly& g) { return mod_monic(a * b, g); }

inline Poly powmod(const Poly& a, Int e, const Poly& g) {
    Poly acc = Poly::constant(a.ring, 1), b = mod_monic(a, g);
    while (e > 0) {
        if ((e & 1) != 0) acc = mulmod(acc, b, g);
        e >>= 1;
        if (e > 0) b = mulmod(b, b, g);
    }
    return acc;
}

inline Poly derivative(const Poly& a) {
    Poly r(a.ring);
    if (a.c.size() <= 1) return r;
    r.c.resize(a.c.size() - 1);
    for (size_t i = 1; i < a.c.size(); ++i) r.c[i - 1] = a.ring.mul(a.c[i], i % a.ring.pk);
    r.trim();
    return r;
}

// --- field-only helpers (k = 1) ---------------------------------------------

inline Poly make_monic_field(const Poly& a) {
    if (a.is_zero()) return a;
    return a.ring.inv(a.lead()) * a;
}

inline Poly gcd_field(Poly a, Poly b) {
    if (a.ring.k != 1) throw invariant_error("poly gcd needs k = 1");
    while (!b.is_zero()) {
        Poly m = make_monic_field(b);
        Poly r = mod_monic(a, m);
        a = m;
        b = r;
    }
    return make_monic_field(a);
}

// g = gcd(a,b) monic with s*a + t*b = g, over F_p.
inline Poly xgcd_field(const Poly& a, const Poly& b, Poly& s, Poly& t) {
    if (a.ring.k != 1) throw invariant_error("poly xgcd needs k = 1");
    Poly r0 = a, r1 = b;
    Poly s0 = Poly::constant(a.ring, 1), s1(a.ring);
    Poly t0(a.ring), t1 = Poly::constant(a.ring, 1);
    while (!r1.is_zero()) {
        std::uint64_t lc = r1.lead();
        Poly m = a.ring.inv(lc) * r1;
        Poly q(a.ring), rem(a.ring);
        divmod_monic(r0, m, q, rem);
        q = a.ring.inv(lc) * q;
        Poly r2 = r0 - q * r1;
        Poly s2 = s0 - q * s1;
        Poly t2 = t0 - q * t1;
        r0 = r1; s0 = s1; t0 = t1;
        r1 = r2; s1 = s2; t1 = t2;
    }
    if (r0.is_zero()) {
        s = s0; t = t0;
        return r0;
    }
    std::uint64_t u = a.ring.inv(r0.lead());
    s = u * s0;
    t = u * t0;
    return u * r0;
}

}  // namespace pkmod
