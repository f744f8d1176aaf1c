#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "pkmod/base.hpp"
#include "pkmod/poly.hpp"

namespace pkmod {

// Factorization of a monic polynomial over F_p into distinct irreducible
// powers: squarefree decomposition, then distinct-degree splitting, then
// Cantor-Zassenhaus equal-degree splitting (trace map for p = 2).
// Randomization uses a fixed-seed substream, so results are deterministic.

namespace detail {

inline Poly random_poly_below(RingParams fp, size_t deg_bound, SplitMix64& rng) {
    std::vector<std::uint64_t> c(deg_bound, 0);
    for (auto& x : c) x = rng.below(fp.p);
    return Poly(fp, std::move(c));
}

// Splits f (monic, squarefree, all irreducible factors of degree d) into
// its irreducible factors.
inline void equal_degree_split(const Poly& f, size_t d, std::vector<Poly>& out, SplitMix64& rng) {
    const RingParams fp = f.ring;
    const size_t n = *f.degree();
    if (n == d) {
        out.push_back(f);
        return;
    }
    Poly factor(fp);
    for (int attempt = 0; attempt < 256 && factor.is_zero(); ++attempt) {
        Poly r = random_poly_below(fp, n, rng);
        if (r.degree().value_or(0) == 0) continue;
        Poly g = gcd_field(r, f);
        if (!g.is_zero() && *g.degree() > 0 && *g.degree() < n) {
            factor = g;
            break;
        }
        Poly u(fp);
        if (fp.p == 2) {
            // trace map of F_{2^d} over F_2 applied to r, mod f
            Poly acc = mod_monic(r, f), term = acc;
            for (size_t i = 1; i < d; ++i) {
                term = mulmod(term, term, f);
                acc = acc + term;
            }
            u = acc;
        } else {
            Int e = (int_pow(fp.p, d) - 1) / 2;
            u = powmod(r, e, f) - Poly::constant(fp, 1);
        }
        if (u.is_zero()) continue;
        Poly g2 = gcd_field(u, f);
        if (!g2.is_zero() && *g2.degree() > 0 && *g2.degree() < n) factor = g2;
    }
    if (factor.is_zero())
        throw invariant_error("equal-degree splitting failed to find a factor");
    Poly q(fp), rem(fp);
    divmod_monic(f, factor, q, rem);
    if (!rem.is_zero()) throw invariant_error("equal-degree split produced a non-divisor");
    equal_degree_split(factor, d, out, rng);
    equal_degree_split(q, d, out, rng);
}

// f monic squarefree over F_p -> irreducible factors.
inline void factor_squarefree(const Poly& f, std::vector<Poly>& out, SplitMix64& rng) {
    const RingParams fp = f.ring;
    Poly h = Poly::monomial(fp, 1, 1);  // t
    Poly rest = f;
    size_t d = 0;
    while (!rest.is_zero() && *rest.degree() > 0) {
        ++d;
        if (2 * d > *rest.degree()) {
            out.push_back(rest);  // what remains is irreducible
            return;
        }
        h = powmod(h, Int(fp.p), rest);  // t^(p^d) mod rest
        Poly g = gcd_field(h - Poly::monomial(fp, 1, 1), rest);
        if (!g.is_zero() && *g.degree() > 0) {
            equal_degree_split(g, d, out, rng);
            Poly q(fp), rem(fp);
            divmod_monic(rest, g, q, rem);
            rest = q;
            h = mod_monic(h, rest);
        }
    }
}

}  // namespace detail

// Monic f over F_p -> sorted list of (monic irreducible, multiplicity).
inline std::vector<std::pair<Poly, unsigned>> factor_mod_p(const Poly& fbar) {
    if (fbar.ring.k != 1) throw invariant_error("factor_mod_p needs k = 1");
    if (!fbar.is_monic() || *fbar.degree() < 1)
        throw config_error("factorization requires a monic non-constant polynomial");
    SplitMix64 rng(0x5eedf00du, *fbar.degree());

    // Yun-style squarefree decomposition, with p-th root recursion for the
    // inseparable part.
    std::map<std::vector<std::uint64_t>, unsigned> mult;
    struct Item { Poly f; unsigned m; };
    std::vector<Item> stack{{fbar, 1}};
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        Poly f = it.f;
        if (*f.degree() == 0) continue;
        Poly df = derivative(f);
        if (df.is_zero()) {
            // f = g(t^p); take p-th root (coefficients are already p-th powers
            // over F_p by Frobenius)
            Poly g(f.ring);
            g.c.assign(*f.degree() / f.ring.p + 1, 0);
            for (size_t i = 0; i < f.c.size(); i += f.ring.p) g.c[i / f.ring.p] = f.c[i];
            g.trim();
            stack.push_back({g, it.m * unsigned(f.ring.p)});
            continue;
        }
        Poly g0 = gcd_field(f, df);
        Poly sqfree(f.ring), rem(f.ring);
        divmod_monic(f, g0, sqfree, rem);
        std::vector<Poly> irr;
        detail::factor_squarefree(sqfree, irr, rng);
        for (auto& h : irr) {
            // multiplicity of h in f
            unsigned e = 0;
            Poly cur = f;
            while (true) {
                Poly q(f.ring), r(f.ring);
                divmod_monic(cur, h, q, r);
                if (!r.is_zero()) break;
                ++e;
                cur = q;
            }
            mult[h.c] += e * it.m;
        }
        if (*g0.degree() > 0) {
            // strip the found factors out of g0 and recurse on what is left
            Poly leftover = g0;
            for (auto& h : irr) {
                while (true) {
                    Poly q(f.ring), r(f.ring);
                    divmod_monic(leftover, h, q, r);
                    if (!r.is_zero()) break;
                    leftover = q;
                }
            }
            if (*leftover.degree() > 0) stack.push_back({leftover, it.m});
        }
    }

    std::vector<std::pair<Poly, unsigned>> out;
    for (auto& [coeffs, m] : mult) out.emplace_back(Poly(fbar.ring, coeffs), m);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.c.size() != b.first.c.size()) return a.first.c.size() < b.first.c.size();
        return a.first.c < b.first.c;
    });

    // exact reassembly check
    Poly prod = Poly::constant(fbar.ring, 1);
    for (auto& [h, m] : out)
        for (unsigned i = 0; i < m; ++i) prod = prod * h;
    if (!(prod == fbar)) throw invariant_error("mod-p factorization failed to reassemble");
    return out;
}

}  // namespace pkmod
