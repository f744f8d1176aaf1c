#pragma once

#include <algorithm>
#include <vector>

#include "pkmod/module.hpp"

namespace pkmod {

// Exact probability/count formulas. Everything here is big-rational
// arithmetic; no floating point.

// prod_{i=a}^{b} (1 - q^{-i}); empty when a > b
inline Rat unit_density(const Int& q, long a, long b) {
    Rat acc = 1;
    for (long i = a; i <= b; ++i) {
        if (i <= 0) throw invariant_error("unit density with a nonpositive exponent");
        Int qi = 1;
        for (long t = 0; t < i; ++t) qi *= q;
        acc *= Rat(qi - 1, qi);
    }
    return acc;
}

// |Aut| of the abelian p-group with partition e_1 >= e_2 >= ... (Hillar-Rhea).
inline Int abelian_aut_order(std::uint64_t p, const std::vector<unsigned>& partition) {
    std::vector<unsigned> e(partition.begin(), partition.end());
    std::sort(e.begin(), e.end());  // increasing
    const size_t n = e.size();
    if (n == 0) return 1;
    std::vector<size_t> dmax(n), cmin(n);
    for (size_t k = 0; k < n; ++k) {
        size_t d = k, c = k;
        while (d + 1 < n && e[d + 1] == e[k]) ++d;
        while (c > 0 && e[c - 1] == e[k]) --c;
        dmax[k] = d + 1;  // 1-based max index with the same part
        cmin[k] = c + 1;  // 1-based min index with the same part
    }
    Int total = 1;
    for (size_t k = 0; k < n; ++k)
        total *= int_pow(p, dmax[k]) - int_pow(p, k);  // p^{d_k} - p^{k-1} (k 1-based)
    for (size_t j = 0; j < n; ++j)
        total *= int_pow(p, std::uint64_t(e[j]) * (n - dmax[j]));
    for (size_t i = 0; i < n; ++i)
        total *= int_pow(p, std::uint64_t(e[i] - 1) * (n - cmin[i] + 1));
    return total;
}

// ---------------------------------------------------------------------------
// Probability that an n x n Haar matrix over the p-adic integers has cokernel
// isomorphic to a fixed abelian p-group with r_p = r and |Aut| = aut.
// Note the unconditioned density uses (1 - p^{-i}); the variant with a
// positive exponent fails the exhaustive 1x1 oracle.
// ---------------------------------------------------------------------------
inline Rat haar_cok_prob(std::uint64_t p, unsigned n, size_t r, const Int& aut) {
    if (n < r) return 0;
    Int q = p;
    return Rat(1, aut) * unit_density(q, 1, long(n)) * unit_density(q, long(n - r + 1), long(n));
}

inline Rat haar_cok_prob(std::uint64_t p, unsigned n, const GroupType& g) {
    return haar_cok_prob(p, n, g.rank(), abelian_aut_order(p, g.parts));
}

// Conditional probability given a fixed residue A with cok(A) = G/pG:
// p^{r^2} prod_{i<=r}(1-p^{-i})^2 / |Aut(G)|. Independent of n.
inline Rat fixed_residue_cok_prob(std::uint64_t p, size_t r, const Int& aut) {
    Rat d = unit_density(Int(p), 1, long(r));
    return Rat(int_pow(p, r * r), aut) * d * d;
}

inline Rat fixed_residue_cok_prob(std::uint64_t p, const GroupType& g) {
    return fixed_residue_cok_prob(p, g.rank(), abelian_aut_order(p, g.parts));
}

// ---------------------------------------------------------------------------
// Haar cokernel law over a finite local ring with residue field F_q, for
// n x (n+u) matrices, in terms of the Betti pair of the target module:
//   1/(|Aut(G)| |G|^u) prod_{i=u+b0-b1+1}^{n+u} (1-q^{-i})
//                      prod_{j=n-b0+1}^{n}   (1-q^{-j})
// and 0 unless n >= b0 >= b1 - u. The +1 in the first lower index is pinned
// by the exhaustive (Z/4, n=1, G=Z/2) regression oracle.
// ---------------------------------------------------------------------------
inline Rat local_cok_prob(const Int& q, unsigned n, unsigned u, size_t b0, size_t b1,
                          const Int& aut, const Int& size) {
    if (!(n >= b0 && b0 + u >= b1)) return 0;
    Int size_u = 1;
    for (unsigned i = 0; i < u; ++i) size_u *= size;
    return Rat(1, aut * size_u) * unit_density(q, long(u + b0 - b1) + 1, long(n + u)) *
           unit_density(q, long(n - b0) + 1, long(n));
}

// Conditional law over a finite local ring given a residue matrix mod an
// ideal a: |Aut(G/aG)| / (|Aut(G)| |aG|^u) prod_{i=u+b0-b1+1}^{u+b0-b1'} (1-q^{-i}),
// with b1' the first Betti number of G/aG over R/a. Independent of n.
inline Rat fiber_cok_prob(const Int& q, unsigned u, size_t b0, size_t b1, size_t b1p,
                          const Int& aut_quot, const Int& aut, const Int& size_aG) {
    if (b1p > b1) throw config_error("fiber law requires b1' <= b1");
    if (b0 + u < b1) return 0;
    Int size_u = 1;
    for (unsigned i = 0; i < u; ++i) size_u *= size_aG;
    return Rat(aut_quot, aut * size_u) *
           unit_density(q, long(u + b0 - b1) + 1, long(u + b0 - b1p));
}

// Number of submodules of R^n with quotient isomorphic to G (finite local R):
// |G|^n/|Aut(G)| prod_{i=n-b0+1}^{n}(1-q^{-i}); always an integer.
inline Int submodule_count(const Int& q, unsigned n, const Int& sizeG, const Int& aut,
                           size_t b0) {
    if (n < b0) throw config_error("submodule count needs n >= b0");
    Int sn = 1;
    for (unsigned i = 0; i < n; ++i) sn *= sizeG;
    Rat r = Rat(sn, aut) * unit_density(q, long(n - b0) + 1, long(n));
    if (denominator(r) != 1) throw invariant_error("submodule count is not an integer");
    return numerator(r);
}

// Probability that a uniformly random R-linear map R^n -> G is onto
// (only the residue ranks matter): prod_{i=n-b+1}^{n} (1-q^{-i}).
inline Rat sur_prob(const Int& q, unsigned n, size_t b) {
    if (n < b) return 0;
    return unit_density(q, long(n - b) + 1, long(n));
}

// ---------------------------------------------------------------------------
// The main law: probability that the cokernel of the linear pencil attached
// to a uniform lift of the concentrated residue is isomorphic to G, in terms
// of the parent quotient ring's blocks:
//   |Aut(G/pG)| prod_j prod_{i=1}^{u_j(G/pG)} (1 - p^{-i d_j}) / |Aut(G)|
// when G is realizable, and 0 otherwise.
// ---------------------------------------------------------------------------
inline Rat pushforward_cok_prob(const FiniteModule& G) {
    const QuotRingPtr& R = G.ring();
    if (!is_realizable(G)) return 0;
    FiniteModule Gbar = G.quotient_mod_p();
    Int aut_bar = aut_count(Gbar);
    Int aut = aut_count(G);
    Rat acc = Rat(aut_bar, aut);
    for (size_t j = 0; j < R->blocks.size(); ++j) {
        size_t uj = u_invariant(Gbar, j);
        acc *= unit_density(R->blocks[j].res_size, 1, long(uj));
    }
    return acc;
}

// Counts surjections R^n -> H whose composition with the concentrated-residue
// pencil lands in pH: |Sur_{R/pR}(r, H/pH)| * |pH|^n.
inline Int restricted_sur_count(const FiniteModule& residue, const FiniteModule& H, unsigned n) {
    require_same_ring(residue, H);
    FiniteModule Hbar = H.quotient_mod_p();
    Int surs = sur_count(residue, Hbar);
    size_t pH_log = H.size_log() - Hbar.size_log();
    return surs * int_pow(H.ring()->params.p, pH_log * n);
}

// n -> infinity limit of the law: 1/|Aut(G)| prod_j prod_{i>=1} (1-p^{-i d_j})
// when realizable, else exactly 0. The infinite product is truncated at
// index T per block; the returned interval [lo, hi] brackets the true value
// using 0 <= 1 - prod_{i>T}(1-x_i) <= sum_{i>T} x_i (geometric tail bound).
struct RatInterval {
    Rat lo, hi;
};

inline RatInterval limit_cok_prob(const FiniteModule& G, unsigned truncation) {
    if (!is_realizable(G)) return {0, 0};
    Rat partial = Rat(1, Int(aut_count(G)));
    Rat tail_factor = 1;
    for (const auto& blk : G.ring()->blocks) {
        partial *= unit_density(blk.res_size, 1, long(truncation));
        // sum_{i>T} q^{-i} = q^{-T}/(q-1)... exactly q^{-(T+1)} * q/(q-1)
        Int qT = 1;
        for (unsigned i = 0; i <= truncation; ++i) qT *= blk.res_size;
        Rat tail = Rat(blk.res_size, (blk.res_size - 1)) / Rat(qT);
        Rat lower = 1 - tail;
        if (lower < 0) lower = 0;
        tail_factor *= lower;
    }
    return {partial * tail_factor, partial};
}

}  // namespace pkmod
