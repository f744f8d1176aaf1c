#pragma once

#include <vector>

#include "pkmod/mat.hpp"

namespace pkmod {

// Polynomials with n x n matrix coefficients over Z/p^k, lowest degree
// first, trailing zero matrices trimmed.
struct MatPoly {
    size_t n = 0;
    RingParams ring;
    std::vector<Mat> c;

    MatPoly() = default;
    MatPoly(size_t n_, RingParams r) : n(n_), ring(r) {}
    MatPoly(size_t n_, RingParams r, std::vector<Mat> coeffs)
        : n(n_), ring(r), c(std::move(coeffs)) {
        trim();
    }

    static MatPoly from_constant(const Mat& m) { return MatPoly(m.rows, m.ring, {m}); }

    void trim() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }

    bool is_zero() const { return c.empty(); }
    bool is_constant() const { return c.size() <= 1; }
    std::optional<size_t> degree() const {
        if (c.empty()) return std::nullopt;
        return c.size() - 1;
    }
    Mat coeff(size_t i) const { return i < c.size() ? c[i] : Mat(n, n, ring); }
    Mat constant_term() const { return coeff(0); }

    // all nonconstant terms (r - r(0) in the division iteration)
    MatPoly tail() const {
        if (c.size() <= 1) return MatPoly(n, ring);
        MatPoly t = *this;
        t.c[0] = Mat(n, n, ring);
        return t;
    }

    // exact division by t (constant term must vanish)
    MatPoly shift_down() const {
        if (!c.empty() && !c[0].is_zero())
            throw invariant_error("division by t of a polynomial with constant term");
        MatPoly s(n, ring);
        if (c.size() > 1) s.c.assign(c.begin() + 1, c.end());
        return s;
    }

    bool operator==(const MatPoly& o) const {
        if (c.size() != o.c.size()) return false;
        for (size_t i = 0; i < c.size(); ++i)
            if (!(c[i] == o.c[i])) return false;
        return true;
    }
};

inline MatPoly operator+(const MatPoly& a, const MatPoly& b) {
    MatPoly r(a.n, a.ring);
    size_t m = std::max(a.c.size(), b.c.size());
    r.c.reserve(m);
    for (size_t i = 0; i < m; ++i) r.c.push_back(a.coeff(i) + b.coeff(i));
    r.trim();
    return r;
}

inline MatPoly operator-(const MatPoly& a, const MatPoly& b) {
    MatPoly r(a.n, a.ring);
    size_t m = std::max(a.c.size(), b.c.size());
    r.c.reserve(m);
    for (size_t i = 0; i < m; ++i) r.c.push_back(a.coeff(i) - b.coeff(i));
    r.trim();
    return r;
}

inline MatPoly operator*(const MatPoly& a, const MatPoly& b) {
    if (a.is_zero() || b.is_zero()) return MatPoly(a.n, a.ring);
    MatPoly r(a.n, a.ring);
    r.c.assign(a.c.size() + b.c.size() - 1, Mat(a.n, a.n, a.ring));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i].is_zero()) continue;
        for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
    }
    r.trim();
    return r;
}

namespace weierstrass {

// Divisor shape X + I t + p t^2 M(t): degree-1 coefficient is the identity,
// all coefficients from degree 2 on are divisible by p.
inline void validate_divisor(const MatPoly& g) {
    if (g.c.size() < 2 || !(g.coeff(1) == Mat::identity(g.n, g.ring)))
        throw config_error("divisor must have identity coefficient in degree 1");
    for (size_t i = 2; i < g.c.size(); ++i)
        for (auto x : g.c[i].a)
            if (x % g.ring.p != 0)
                throw config_error("divisor coefficients of degree >= 2 must be divisible by p");
}

inline MatPoly make_divisor(const Mat& x, const MatPoly& m) {
    const RingParams r = x.ring;
    MatPoly g(x.rows, r);
    g.c.push_back(x);
    g.c.push_back(Mat::identity(x.rows, r));
    for (size_t i = 0; i < m.c.size(); ++i) g.c.push_back((r.p % r.pk) * m.coeff(i));
    g.trim();
    validate_divisor(g);
    return g;
}

struct TraceStep {
    std::uint64_t iter;
    long delta_num;    // delta(s_j) scaled by D (exact integer)
    unsigned delta_den;  // = D, so delta = delta_num / delta_den
    size_t deg_s;
};

struct DivisionResult {
    MatPoly quotient;
    Mat remainder;
    std::vector<TraceStep> trace;
};

// delta(s) = min over monomials a t^b of v_k(a) - b/D, scaled by D.
inline long delta_scaled(const MatPoly& s, unsigned D) {
    bool seen = false;
    long best = 0;
    for (size_t b = 0; b < s.c.size(); ++b) {
        unsigned v = kValInfinity;
        for (auto x : s.c[b].a) {
            unsigned w = s.ring.valuation(x);
            if (w != kValInfinity && (v == kValInfinity || w < v)) v = w;
        }
        if (v == kValInfinity) continue;
        long d = long(v) * long(D) - long(b);
        if (!seen || d < best) best = d, seen = true;
    }
    if (!seen) throw invariant_error("delta of the zero polynomial");
    return best;
}

// f = g q + r with r constant, by the contraction iteration
//   q_{j+1} = q_j + s_j/t,  r_{j+1} = r_j - g s_j/t,  s_j = r_j - r_j(0).
// The scaled delta-valuation of s_j increases by at least 1 per step and is
// capped by (k-1)*D, which bounds the iteration count.
inline DivisionResult divide(const MatPoly& f, const MatPoly& g) {
    validate_divisor(g);
    const unsigned D = unsigned(*g.degree());
    const unsigned k = g.ring.k;
    const size_t max_deg = std::max(f.c.size(), g.c.size()) + 2;
    const std::uint64_t cap = std::uint64_t(k) * D * max_deg + 16;

    DivisionResult out;
    out.quotient = MatPoly(f.n, f.ring);
    MatPoly r = f;
    std::uint64_t iter = 0;
    while (true) {
        MatPoly s = r.tail();
        if (s.is_zero()) break;
        out.trace.push_back({iter, delta_scaled(s, D), D, *s.degree()});
        if (++iter > cap)
            throw invariant_error("division iteration exceeded its hard cap at step " +
                                  std::to_string(iter));
        MatPoly s_over_t = s.shift_down();
        out.quotient = out.quotient + s_over_t;
        r = r - g * s_over_t;
    }
    out.remainder = r.constant_term();
    return out;
}

struct PrepResult {
    MatPoly unit;  // U(t), congruent to I mod p
    Mat shifted;   // X', congruent to X mod p
};

// (X + I t + p t^2 M) U = X' + I t + p t^2 N, via division of
// f = I t + p t^2 N by g = X + I t + p t^2 M; U = q and X' = -r.
inline PrepResult prepare(const Mat& x, const MatPoly& m, const MatPoly& n_poly) {
    const RingParams ring = x.ring;
    MatPoly g = make_divisor(x, m);
    MatPoly f(x.rows, ring);
    f.c.push_back(Mat(x.rows, x.rows, ring));
    f.c.push_back(Mat::identity(x.rows, ring));
    for (size_t i = 0; i < n_poly.c.size(); ++i)
        f.c.push_back((ring.p % ring.pk) * n_poly.coeff(i));
    f.trim();

    DivisionResult d = divide(f, g);
    PrepResult res{d.quotient, Mat(x.rows, x.rows, ring) - d.remainder};

    // the unit and shift congruences always hold; verify them exactly
    if (!(g * res.unit == f - MatPoly::from_constant(d.remainder)))
        throw invariant_error("preparation identity failed");
    if (!(res.unit.coeff(0).reduced_mod_p() == Mat::identity(x.rows, RingParams(ring.p, 1))))
        throw invariant_error("preparation unit is not I mod p");
    for (size_t i = 1; i < res.unit.c.size(); ++i)
        if (!res.unit.c[i].reduced_mod_p().is_zero())
            throw invariant_error("preparation unit is not I mod p");
    if (!(res.shifted.reduced_mod_p() == x.reduced_mod_p()))
        throw invariant_error("preparation did not preserve the residue");
    return res;
}

// The measure-preserving pair: eliminate_tail sends X to the X' whose plain
// pencil X' + I t is equivalent to X + I t + p t^2 M(t); restore_tail is its
// inverse (swap the roles of M and 0).
inline Mat eliminate_tail(const Mat& x, const MatPoly& m) {
    return prepare(x, m, MatPoly(x.rows, x.ring)).shifted;
}

inline Mat restore_tail(const Mat& x_shifted, const MatPoly& m) {
    return prepare(x_shifted, MatPoly(x_shifted.rows, x_shifted.ring), m).shifted;
}

}  // namespace weierstrass
}  // namespace pkmod
