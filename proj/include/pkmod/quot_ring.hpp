#pragma once

#include <memory>
#include <vector>

#include "pkmod/base.hpp"
#include "pkmod/factor.hpp"
#include "pkmod/poly.hpp"

namespace pkmod {

// One local factor of the quotient ring: Q ~ pbar^m (mod p), so
// (Z/p^k)[t]/(Q) is local with residue field F_q, q = p^deg(pbar).
struct LocalBlock {
    Poly modulus;      // Q, monic over Z/p^k
    Poly pbar;         // monic irreducible over F_p (k = 1 coefficients)
    unsigned mult;     // m >= 1
    unsigned res_deg;  // d = deg(pbar)
    Int res_size;      // q = p^d
};

class QuotRing;
using QuotRingPtr = std::shared_ptr<const QuotRing>;

// R = (Z/p^k)[t]/(P) for monic non-constant P, with its decomposition into
// local blocks (Hensel-lifted from the factorization of P mod p) and the CRT
// idempotents. Immutable after construction.
class QuotRing {
public:
    RingParams params;
    Poly modulus;                   // P, monic, degree >= 1
    std::vector<LocalBlock> blocks; // sorted by (deg pbar, pbar, ...)
    std::vector<Poly> idempotents;  // e_j = 1 mod Q_j, 0 mod Q_i (i != j)

    static QuotRingPtr make(RingParams params, Poly modulus) {
        return QuotRingPtr(new QuotRing(std::move(params), std::move(modulus)));
    }

    size_t deg() const { return *modulus.degree(); }
    Int size() const { return int_pow(params.p, params.k * deg()); }
    size_t size_log() const { return params.k * deg(); }  // log_p |R|

    bool same_ring(const QuotRing& o) const {
        return params == o.params && modulus == o.modulus;
    }

    // --- element arithmetic (elements are Polys of degree < deg(P)) ---------

    Poly reduce(const Poly& a) const { return mod_monic(a, modulus); }
    Poly zero() const { return Poly(params); }
    Poly one() const { return Poly::constant(params, 1); }
    Poly t_gen() const { return reduce(Poly::monomial(params, 1, 1)); }
    Poly add(const Poly& a, const Poly& b) const { return a + b; }
    Poly mul(const Poly& a, const Poly& b) const { return mulmod(a, b, modulus); }

    // Unit iff the image in every residue field is nonzero.
    bool is_unit(const Poly& a) const {
        Poly abar = a.reduced_mod_p();
        for (const auto& b : blocks)
            if (mod_monic(abar, b.pbar).is_zero()) return false;
        return true;
    }

    // Inverse of a unit: invert mod p via the Euclidean algorithm in F_p[t],
    // then Newton-lift x -> x(2 - ax) to full precision.
    Poly inv(const Poly& a) const {
        if (!is_unit(a)) throw invariant_error("inverse of a non-unit in the quotient ring");
        Poly abar = reduce(a).reduced_mod_p();
        Poly pbar_mod = modulus.reduced_mod_p();
        Poly s(abar.ring), t(abar.ring);
        Poly g = xgcd_field(abar, pbar_mod, s, t);
        if (g.degree() != std::optional<size_t>(0))
            throw invariant_error("unit has a non-invertible residue");
        s = abar.ring.inv(g.coeff(0)) * s;
        Poly x(params, s.c);  // lift the mod-p inverse verbatim
        Poly two = Poly::constant(params, 2);
        for (unsigned prec = 1; prec < params.k; prec *= 2)
            x = mul(x, two - mul(reduce(a), x));
        if (!(mul(reduce(a), x) == one())) throw invariant_error("unit inversion failed");
        return x;
    }

    // x -> (x mod Q_1, ..., x mod Q_l)
    std::vector<Poly> crt_split(const Poly& x) const {
        std::vector<Poly> out;
        out.reserve(blocks.size());
        for (const auto& b : blocks) out.push_back(mod_monic(reduce(x), b.modulus));
        return out;
    }

    // exact inverse of crt_split via the precomputed idempotents
    Poly crt_join(const std::vector<Poly>& parts) const {
        if (parts.size() != blocks.size())
            throw config_error("crt_join: wrong number of components");
        Poly acc(params);
        for (size_t j = 0; j < parts.size(); ++j) acc = acc + mul(idempotents[j], parts[j]);
        return reduce(acc);
    }

    // Block ring R_j = (Z/p^k)[t]/(Q_j); local, single block.
    QuotRingPtr block_ring(size_t j) const {
        return QuotRing::make(params, blocks[j].modulus);
    }

private:
    QuotRing(RingParams params_, Poly modulus_)
        : params(params_), modulus(std::move(modulus_)) {
        if (!modulus.is_monic() || *modulus.degree() < 1)
            throw config_error("quotient modulus must be monic and non-constant");

        auto fac = factor_mod_p(modulus.reduced_mod_p());
        std::vector<Poly> targets;  // pbar_j^{m_j} over F_p
        for (auto& [pb, m] : fac) {
            Poly pw = Poly::constant(pb.ring, 1);
            for (unsigned i = 0; i < m; ++i) pw = pw * pb;
            targets.push_back(pw);
        }
        std::vector<Poly> lifted = hensel_lift_factors(modulus, targets);

        for (size_t j = 0; j < fac.size(); ++j) {
            LocalBlock b;
            b.modulus = lifted[j];
            b.pbar = fac[j].first;
            b.mult = fac[j].second;
            b.res_deg = unsigned(*fac[j].first.degree());
            b.res_size = int_pow(params.p, b.res_deg);
            blocks.push_back(std::move(b));
        }

        // exact product and pairwise comaximality checks
        Poly prod = Poly::constant(params, 1);
        for (const auto& b : blocks) prod = prod * b.modulus;
        if (!(prod == modulus)) throw invariant_error("Hensel factors do not multiply back");
        for (size_t i = 0; i < blocks.size(); ++i)
            for (size_t j = i + 1; j < blocks.size(); ++j) {
                Poly g = gcd_field(blocks[i].modulus.reduced_mod_p(),
                                   blocks[j].modulus.reduced_mod_p());
                if (g.degree() != std::optional<size_t>(0))
                    throw invariant_error("Hensel factors are not comaximal");
            }

        compute_idempotents();
    }

    // Lift a pairwise-coprime factorization of P mod p to Z/p^k, one linear
    // digit at a time, recursively splitting the factor list in halves.
    std::vector<Poly> hensel_lift_factors(const Poly& target, const std::vector<Poly>& fbars) const {
        if (fbars.size() == 1) {
            // target is monic, reduces to fbars[0], and has the same degree:
            // it is itself the lift of the single factor
            return {target};
        }
        size_t half = fbars.size() / 2;
        Poly fbar = Poly::constant(fbars[0].ring, 1);
        for (size_t i = 0; i < half; ++i) fbar = fbar * fbars[i];
        Poly gbar = Poly::constant(fbars[0].ring, 1);
        for (size_t i = half; i < fbars.size(); ++i) gbar = gbar * fbars[i];

        auto [f, g] = hensel_lift_pair(target, fbar, gbar);
        std::vector<Poly> left = hensel_lift_factors(
            f, std::vector<Poly>(fbars.begin(), fbars.begin() + half));
        std::vector<Poly> right = hensel_lift_factors(
            g, std::vector<Poly>(fbars.begin() + half, fbars.end()));
        left.insert(left.end(), right.begin(), right.end());
        return left;
    }

    std::pair<Poly, Poly> hensel_lift_pair(const Poly& target, const Poly& fbar,
                                           const Poly& gbar) const {
        RingParams fp(params.p, 1);
        Poly a(fp), b(fp);
        Poly gg = xgcd_field(fbar, gbar, a, b);  // a*fbar + b*gbar = 1
        if (gg.degree() != std::optional<size_t>(0))
            throw invariant_error("Hensel lifting requires coprime factors mod p");

        Poly f = Poly(params, fbar.c);
        Poly g = Poly(params, gbar.c);
        std::uint64_t pj = 1;
        for (unsigned j = 1; j < params.k; ++j) {
            pj *= params.p;  // p^j
            Poly diff = target - f * g;
            // diff is divisible by p^j; its digit is a polynomial over F_p
            Poly delta(fp);
            delta.c.reserve(diff.c.size());
            for (auto x : diff.c) {
                if (x % pj != 0) throw invariant_error("Hensel step lost divisibility");
                delta.c.push_back((x / pj) % params.p);
            }
            delta.trim();
            if (delta.is_zero()) continue;
            // solve s*gbar + t*fbar = delta with deg s < deg fbar
            Poly q(fp), s(fp);
            divmod_monic(b * delta, fbar, q, s);
            Poly t = a * delta + q * gbar;
            f = f + pj * Poly(params, s.c);
            g = g + pj * Poly(params, mod_monic(t, gbar).c);
        }
        if (!(f * g == target)) throw invariant_error("Hensel pair lift failed");
        return {f, g};
    }

    void compute_idempotents() {
        idempotents.clear();
        if (blocks.size() == 1) {
            idempotents.push_back(one());
            return;
        }
        for (size_t j = 0; j < blocks.size(); ++j) {
            Poly mj = Poly::constant(params, 1);
            for (size_t i = 0; i < blocks.size(); ++i)
                if (i != j) mj = mj * blocks[i].modulus;
            // invert mj mod Q_j: mod p by Euclid, then Newton lift
            RingParams fp(params.p, 1);
            Poly mbar = mod_monic(mj, blocks[j].modulus).reduced_mod_p();
            Poly qbar = blocks[j].modulus.reduced_mod_p();
            Poly s(fp), t(fp);
            Poly g = xgcd_field(mbar, qbar, s, t);
            if (g.degree() != std::optional<size_t>(0))
                throw invariant_error("CRT cofactor not invertible");
            s = fp.inv(g.coeff(0)) * s;
            Poly x(params, s.c);
            Poly two = Poly::constant(params, 2);
            const Poly& Q = blocks[j].modulus;
            for (unsigned prec = 1; prec < params.k; prec *= 2)
                x = mod_monic(x * (two - mod_monic(mj * x, Q)), Q);
            if (!(mod_monic(mj * x, Q) == Poly::constant(params, 1)))
                throw invariant_error("CRT inverse lift failed");
            idempotents.push_back(mod_monic(mj * x, modulus));
        }
        // verify: sum of idempotents = 1
        Poly sum(params);
        for (const auto& e : idempotents) sum = sum + e;
        if (!(sum == one())) throw invariant_error("CRT idempotents do not sum to 1");
    }
};

}  // namespace pkmod
