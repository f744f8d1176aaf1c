#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "pkmod/quot_mat.hpp"

namespace pkmod {

// A finite module over R = (Z/p^k)[t]/(P), given by a presentation
// M = R^g / (column span of rels). Construction minimizes the presentation
// (unit pivots removed) and caches the linearized relation lattice, size and
// underlying group type. Instances are immutable.
class FiniteModule {
public:
    FiniteModule(QuotRingPtr ring, QMat pres)
        : ring_(std::move(ring)), pres_(std::move(pres)) {
        if (pres_.ring == nullptr || !pres_.ring->same_ring(*ring_))
            throw config_error("presentation ring mismatch");
        w_ = minimize(pres_);
        amb_ = w_.rows * ring_->deg();
        rel_ = column_span(w_.lin());
        size_log_ = ring_->params.k * amb_ - rel_.size_log();
        gtype_ = cokernel_type(w_.lin());
    }

    static FiniteModule zero(QuotRingPtr ring) {
        return FiniteModule(ring, QMat(0, 0, ring));
    }

    static FiniteModule free_of_rank(QuotRingPtr ring, size_t g) {
        return FiniteModule(ring, QMat(g, 0, ring));
    }

    // R^g modulo one diagonal relation per generator plus optional shared ones.
    static FiniteModule cyclic(QuotRingPtr ring, const std::vector<Poly>& rels) {
        QMat w(1, rels.size(), ring);
        for (size_t j = 0; j < rels.size(); ++j) w.set_entry(0, j, rels[j]);
        return FiniteModule(ring, w);
    }

    // direct sum of Z/p^{e_i} with t acting as 0
    static FiniteModule trivial_t(QuotRingPtr ring, const std::vector<unsigned>& parts) {
        size_t g = parts.size();
        QMat w(g, 2 * g, ring);
        for (size_t i = 0; i < g; ++i) {
            w.set_entry(i, 2 * i, Poly::constant(ring->params, ring->params.p_power(parts[i])));
            w.set_entry(i, 2 * i + 1, ring->t_gen());
        }
        return FiniteModule(ring, w);
    }

    // Module on (Z/p^k)^n with t acting by the matrix T, modulo the lattice
    // spanned by extra_rels (vectors of length n). The caller supplies
    // t-stable data; the presentation is [t*I - T | extra_rels].
    static FiniteModule from_operator(QuotRingPtr ring, const Mat& T,
                                      const std::vector<std::vector<std::uint64_t>>& extra_rels) {
        size_t n = T.rows;
        QMat w(n, n + extra_rels.size(), ring);
        Poly t = ring->t_gen();
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                Poly e = (i == j) ? t : Poly(ring->params);
                e = e - Poly::constant(ring->params, T.at(i, j));
                w.set_entry(i, j, e);
            }
        for (size_t s = 0; s < extra_rels.size(); ++s)
            for (size_t i = 0; i < n; ++i)
                w.set_entry(i, n + s, Poly::constant(ring->params, extra_rels[s][i]));
        return FiniteModule(ring, w);
    }

    const QuotRingPtr& ring() const { return ring_; }
    const QMat& presentation() const { return pres_; }
    const QMat& reduced_presentation() const { return w_; }
    size_t gens() const { return w_.rows; }
    size_t ambient_dim() const { return amb_; }
    const HowellForm& relation_lattice() const { return rel_; }
    size_t size_log() const { return size_log_; }
    Int size() const { return int_pow(ring_->params.p, size_log_); }
    const GroupType& group_type() const { return gtype_; }
    bool is_zero_module() const { return size_log_ == 0; }

    // --- element arithmetic (canonical coset representatives) ---------------

    std::vector<std::uint64_t> zero_elem() const { return std::vector<std::uint64_t>(amb_, 0); }

    std::vector<std::uint64_t> canon(std::vector<std::uint64_t> v) const {
        return rel_.reduce(std::move(v));
    }

    std::vector<std::uint64_t> add(const std::vector<std::uint64_t>& x,
                                   const std::vector<std::uint64_t>& y) const {
        std::vector<std::uint64_t> r(amb_);
        for (size_t i = 0; i < amb_; ++i) r[i] = ring_->params.add(x[i], y[i]);
        return canon(std::move(r));
    }

    // multiplication by a ring element, sliced per generator
    std::vector<std::uint64_t> scale(const Poly& e, const std::vector<std::uint64_t>& x) const {
        const size_t D = ring_->deg();
        std::vector<std::uint64_t> r(amb_, 0);
        for (size_t c = 0; c * D < amb_; ++c) {
            Poly s(ring_->params);
            s.c.assign(x.begin() + c * D, x.begin() + (c + 1) * D);
            s.trim();
            if (s.is_zero()) continue;
            Poly prod = ring_->mul(e, s);
            for (size_t l = 0; l < D; ++l) r[c * D + l] = prod.coeff(l);
        }
        return canon(std::move(r));
    }

    // all canonical representatives, mixed-radix over the free coordinates
    std::vector<std::vector<std::uint64_t>> elements() const {
        if (size() > Int(kEnumGuard)) throw resource_error("module too large to enumerate");
        std::vector<std::uint64_t> bound(amb_, ring_->params.pk);
        for (size_t i = 0; i < rel_.rows.size(); ++i)
            bound[rel_.pivot_col[i]] = ring_->params.p_power(rel_.pivot_val[i]);
        std::vector<std::vector<std::uint64_t>> out;
        std::vector<std::uint64_t> cur(amb_, 0);
        while (true) {
            out.push_back(cur);
            size_t c = 0;
            while (c < amb_ && ++cur[c] == bound[c]) cur[c++] = 0;
            if (c == amb_) break;
        }
        return out;
    }

    // --- derived modules -----------------------------------------------------

    FiniteModule quotient_mod_p() const {
        return quotient_by(Poly::constant(ring_->params, ring_->params.p));
    }

    // M / (f * M)
    FiniteModule quotient_by(const Poly& f) const {
        size_t g = w_.rows;
        QMat w2(g, w_.cols + g, ring_);
        for (size_t i = 0; i < g; ++i) {
            for (size_t j = 0; j < w_.cols; ++j) w2.set_entry(i, j, w_.entry(i, j));
            w2.set_entry(i, w_.cols + i, f);
        }
        return FiniteModule(ring_, w2);
    }

    // M tensored with the local block ring R_j
    FiniteModule block_component(size_t j, const QuotRingPtr& block) const {
        return FiniteModule(block, w_.block_component(j, block));
    }

    // The same module presented over the verbatim coefficient lift of the ring
    // at precision k2 > k (adds p^k * identity relations).
    FiniteModule lifted(const QuotRingPtr& lifted_ring) const {
        unsigned k = ring_->params.k;
        QMat wl = w_.lifted(lifted_ring);
        size_t g = wl.rows;
        QMat w2(g, wl.cols + g, lifted_ring);
        std::uint64_t pk = lifted_ring->params.p_power(k);
        for (size_t i = 0; i < g; ++i) {
            for (size_t j = 0; j < wl.cols; ++j) w2.set_entry(i, j, wl.entry(i, j));
            w2.set_entry(i, wl.cols + i, Poly::constant(lifted_ring->params, pk));
        }
        return FiniteModule(lifted_ring, w2);
    }

    bool is_killed_by(const Poly& f) const {
        // f*M = 0 iff f*e_c reduces to 0 for every generator slice
        const size_t D = ring_->deg();
        for (size_t c = 0; c * D < amb_; ++c) {
            std::vector<std::uint64_t> e(amb_, 0);
            e[c * D] = 1;
            auto img = scale(f, e);
            if (std::any_of(img.begin(), img.end(), [](std::uint64_t x) { return x != 0; }))
                return false;
        }
        return true;
    }

private:
    // Remove unit pivots: a unit entry lets one generator be expressed by the
    // others, shrinking the presentation without changing the cokernel.
    QMat minimize(QMat w) const {
        while (true) {
            size_t ui = 0, uj = 0;
            bool found = false;
            for (size_t i = 0; i < w.rows && !found; ++i)
                for (size_t j = 0; j < w.cols && !found; ++j)
                    if (ring_->is_unit(w.entry(i, j))) {
                        ui = i;
                        uj = j;
                        found = true;
                    }
            if (!found) return w;
            Poly inv = ring_->inv(w.entry(ui, uj));
            // clear the pivot column from the other rows is unnecessary: we
            // eliminate relation uj and generator ui directly
            QMat next(w.rows - 1, w.cols - 1, ring_);
            for (size_t j = 0; j < w.cols; ++j) {
                if (j == uj) continue;
                // coefficient of generator ui in relation j
                Poly f = ring_->mul(inv, w.entry(ui, j));
                size_t jj = j < uj ? j : j - 1;
                for (size_t i = 0; i < w.rows; ++i) {
                    if (i == ui) continue;
                    size_t ii = i < ui ? i : i - 1;
                    Poly v = w.entry(i, j) - ring_->mul(w.entry(i, uj), f);
                    next.set_entry(ii, jj, v);
                }
            }
            w = std::move(next);
        }
    }

    QuotRingPtr ring_;
    QMat pres_;
    QMat w_;
    size_t amb_ = 0;
    HowellForm rel_;
    size_t size_log_ = 0;
    GroupType gtype_;
};

inline void require_same_ring(const FiniteModule& a, const FiniteModule& b) {
    if (!a.ring()->same_ring(*b.ring())) throw config_error("modules live over different rings");
}

// log_p of the cardinality of a lattice sum inside (Z/p^k)^amb
inline size_t span_size_log(const std::vector<std::vector<std::uint64_t>>& gens, size_t amb,
                            RingParams ring) {
    return howell_form(gens, amb, ring).size_log();
}

// ---------------------------------------------------------------------------
// Hom counting (exact, no enumeration). |Hom(M, N)| is always a power of p;
// the exponent is computed from lattice sizes:
//   log|Hom| = k*g*ambN + m*log|L_N| - log|T*A + L_N^m| - g*log|L_N|
// where T x = (sum_c w_{cj} x_c)_j is the relation-evaluation map.
// ---------------------------------------------------------------------------
inline size_t hom_count_log(const FiniteModule& M, const FiniteModule& N) {
    require_same_ring(M, N);
    const QuotRingPtr& R = M.ring();
    const size_t D = R->deg();
    const QMat& w = M.reduced_presentation();
    const size_t g = w.rows, m = w.cols;
    const size_t ambN = N.ambient_dim();
    const auto& LN = N.relation_lattice();

    if (g == 0) return 0;  // Hom(0, N) = {0}
    if (m == 0)            // Hom(R^g, N) = N^g
        return g * N.size_log();

    std::vector<std::vector<std::uint64_t>> gens;
    gens.reserve(g * ambN + m * LN.rows.size());
    // images of the domain basis vectors under T
    for (size_t c = 0; c < g; ++c)
        for (size_t b = 0; b < ambN; ++b) {
            std::vector<std::uint64_t> row(m * ambN, 0);
            size_t slice = b / D, pos = b % D;
            for (size_t j = 0; j < m; ++j) {
                Poly e = w.entry(c, j);
                if (e.is_zero()) continue;
                Poly prod = R->mul(e, Poly::monomial(R->params, 1, pos));
                for (size_t l = 0; l < D; ++l)
                    row[j * ambN + slice * D + l] = prod.coeff(l);
            }
            gens.push_back(std::move(row));
        }
    // L_N in every component
    for (size_t j = 0; j < m; ++j)
        for (const auto& lr : LN.rows) {
            std::vector<std::uint64_t> row(m * ambN, 0);
            std::copy(lr.begin(), lr.end(), row.begin() + j * ambN);
            gens.push_back(std::move(row));
        }

    size_t img = span_size_log(gens, m * ambN, R->params);
    size_t lN = LN.size_log();
    return R->params.k * g * ambN + m * lN - img - g * lN;
}

inline Int hom_count(const FiniteModule& M, const FiniteModule& N) {
    return int_pow(M.ring()->params.p, hom_count_log(M, N));
}

// ---------------------------------------------------------------------------
// Hom enumeration: candidate images of the g generators of M in N, filtered
// by the relations. Hard 2^24 guard.
// ---------------------------------------------------------------------------
struct HomVisit {
    // images of generators, canonical representatives in N
    const std::vector<std::vector<std::uint64_t>>& images;
};

inline std::uint64_t enumerate_homs(const FiniteModule& M, const FiniteModule& N,
                                    const std::function<bool(const HomVisit&)>& visit) {
    require_same_ring(M, N);
    const QMat& w = M.reduced_presentation();
    const size_t g = w.rows, m = w.cols;

    Int candidates = 1;
    for (size_t c = 0; c < g; ++c) {
        candidates *= N.size();
        if (candidates > kEnumGuard)
            throw resource_error("hom enumeration exceeds the 2^24 guard");
    }

    if (g == 0) {
        static const std::vector<std::vector<std::uint64_t>> no_images;
        HomVisit hv{no_images};
        visit(hv);
        return 1;
    }

    std::vector<std::vector<std::uint64_t>> elems = N.elements();
    std::vector<size_t> idx(g, 0);
    std::vector<std::vector<std::uint64_t>> images(g, N.zero_elem());
    std::uint64_t count = 0;
    while (true) {
        for (size_t c = 0; c < g; ++c) images[c] = elems[idx[c]];
        bool ok = true;
        for (size_t j = 0; j < m && ok; ++j) {
            std::vector<std::uint64_t> acc = N.zero_elem();
            for (size_t c = 0; c < g; ++c) {
                Poly e = w.entry(c, j);
                if (e.is_zero()) continue;
                acc = N.add(acc, N.scale(e, images[c]));
            }
            ok = std::all_of(acc.begin(), acc.end(), [](std::uint64_t x) { return x == 0; });
        }
        if (ok) {
            ++count;
            HomVisit hv{images};
            if (!visit(hv)) return count;
        }
        size_t c = 0;
        while (c < g && ++idx[c] == elems.size()) idx[c++] = 0;
        if (c == g) break;
    }
    return count;
}

// Surjectivity test by Nakayama: f is onto iff the module span of the
// generator images together with (L_N + radical * ambient) covers the
// ambient space mod p. The module span closes the images under the t
// action (t^a x for a < deg P).
class SurjTester {
public:
    explicit SurjTester(const FiniteModule& N)
        : module_(&N), fp_(N.ring()->params.p, 1), amb_(N.ambient_dim()) {
        const QuotRingPtr& R = N.ring();
        const size_t D = R->deg();
        Poly rad = Poly::constant(R->params, 1);
        for (const auto& b : R->blocks) rad = R->mul(rad, Poly(R->params, b.pbar.c));

        std::vector<std::vector<std::uint64_t>> rows;
        for (const auto& r : N.relation_lattice().rows) {
            std::vector<std::uint64_t> v(amb_);
            for (size_t i = 0; i < amb_; ++i) v[i] = r[i] % fp_.p;
            rows.push_back(std::move(v));
        }
        for (size_t c = 0; c * D < amb_; ++c)
            for (size_t pos = 0; pos < D; ++pos) {
                Poly e = R->mul(rad, Poly::monomial(R->params, 1, pos));
                std::vector<std::uint64_t> v(amb_, 0);
                for (size_t l = 0; l < D; ++l) v[c * D + l] = e.coeff(l) % fp_.p;
                rows.push_back(std::move(v));
            }
        for (auto& v : rows) insert(v);
    }

    bool surjective(const std::vector<std::vector<std::uint64_t>>& images) const {
        std::vector<std::vector<std::uint64_t>> extra;
        size_t rank = ech_.size();
        if (rank == amb_) return true;
        const size_t D = module_->ring()->deg();
        Poly tg = module_->ring()->t_gen();
        for (const auto& im : images) {
            std::vector<std::uint64_t> shifted = im;
            for (size_t a = 0; a < D; ++a) {
                if (a > 0) shifted = module_->scale(tg, shifted);
                std::vector<std::uint64_t> v(amb_);
                for (size_t i = 0; i < amb_; ++i) v[i] = shifted[i] % fp_.p;
                if (try_insert_local(extra, v)) {
                    if (++rank == amb_) return true;
                }
            }
        }
        return rank == amb_;
    }

private:
    size_t lead_of(const std::vector<std::uint64_t>& v) const {
        for (size_t i = 0; i < amb_; ++i)
            if (v[i]) return i;
        return amb_;
    }
    void normalize(std::vector<std::uint64_t>& v, size_t lead) const {
        std::uint64_t inv = fp_.inv(v[lead]);
        for (auto& x : v) x = fp_.mul(inv, x);
    }
    static const std::vector<std::uint64_t>* find_lead(
        const std::vector<std::vector<std::uint64_t>>& basis,
        const std::vector<size_t>& leads, size_t l) {
        for (size_t i = 0; i < basis.size(); ++i)
            if (leads[i] == l) return &basis[i];
        return nullptr;
    }
    // Reduce v to a new pivot row or to zero; each reduction step strictly
    // increases the lead, so the loop is exact in any insertion order.
    bool try_insert_local(std::vector<std::vector<std::uint64_t>>& extra,
                          std::vector<std::uint64_t>& v) const {
        std::vector<size_t> extra_leads;
        extra_leads.reserve(extra.size());
        for (const auto& r : extra) extra_leads.push_back(lead_of(r));
        while (true) {
            size_t l = lead_of(v);
            if (l == amb_) return false;
            const std::vector<std::uint64_t>* row = find_lead(ech_, ech_leads_, l);
            if (!row) row = find_lead(extra, extra_leads, l);
            if (!row) {
                normalize(v, l);
                extra.push_back(v);
                return true;
            }
            std::uint64_t f = v[l];
            for (size_t i = l; i < amb_; ++i) v[i] = fp_.sub(v[i], fp_.mul(f, (*row)[i]));
        }
    }
    void insert(std::vector<std::uint64_t> v) {
        while (true) {
            size_t l = lead_of(v);
            if (l == amb_) return;
            const std::vector<std::uint64_t>* row = find_lead(ech_, ech_leads_, l);
            if (!row) {
                normalize(v, l);
                ech_.push_back(std::move(v));
                ech_leads_.push_back(l);
                return;
            }
            std::uint64_t f = v[l];
            for (size_t i = l; i < amb_; ++i) v[i] = fp_.sub(v[i], fp_.mul(f, (*row)[i]));
        }
    }

    const FiniteModule* module_;
    RingParams fp_;
    size_t amb_;
    std::vector<std::vector<std::uint64_t>> ech_;
    std::vector<size_t> ech_leads_;
};

inline std::uint64_t sur_count(const FiniteModule& M, const FiniteModule& N) {
    SurjTester tester(N);
    std::uint64_t surs = 0;
    enumerate_homs(M, N, [&](const HomVisit& hv) {
        if (tester.surjective(hv.images)) ++surs;
        return true;
    });
    return surs;
}

// surjective self-maps of a finite module are bijective
inline std::uint64_t aut_count(const FiniteModule& G) { return sur_count(G, G); }

inline bool is_isomorphic(const FiniteModule& M, const FiniteModule& N) {
    require_same_ring(M, N);
    if (M.size_log() != N.size_log()) return false;
    if (!(M.group_type() == N.group_type())) return false;
    SurjTester tester(N);
    bool found = false;
    enumerate_homs(M, N, [&](const HomVisit& hv) {
        if (tester.surjective(hv.images)) {
            found = true;
            return false;  // early exit on the first surjection
        }
        return true;
    });
    return found;
}

// ---------------------------------------------------------------------------
// Betti numbers over a local ring: b0 = dim_Fq(G / mG) and b1 = minimal
// generator count of the relation lattice of the minimized presentation,
// measured as dim_Fq(K / mK) via lattice sizes.
// ---------------------------------------------------------------------------
struct BettiPair {
    size_t b0 = 0, b1 = 0;
};

inline BettiPair betti_local(const FiniteModule& G) {
    const QuotRingPtr& R = G.ring();
    if (R->blocks.size() != 1) throw config_error("Betti numbers need a local ring");
    const unsigned d = R->blocks[0].res_deg;
    const size_t D = R->deg();
    const size_t amb = G.ambient_dim();
    const RingParams& pr = R->params;
    Poly pi = Poly(pr, R->blocks[0].pbar.c);  // lift of the residue irreducible

    // entries of the minimized presentation are in m, so gens == b0
    size_t b0 = G.gens();

    // K = relation lattice; mK = p*K + pi*K
    const auto& K = G.relation_lattice();
    std::vector<std::vector<std::uint64_t>> mk;
    for (const auto& r : K.rows) {
        std::vector<std::uint64_t> pv(amb);
        for (size_t i = 0; i < amb; ++i) pv[i] = pr.mul(pr.p % pr.pk, r[i]);
        mk.push_back(std::move(pv));
        // pi * r, slice by slice
        std::vector<std::uint64_t> qv(amb, 0);
        for (size_t c = 0; c * D < amb; ++c) {
            Poly s(pr);
            s.c.assign(r.begin() + c * D, r.begin() + (c + 1) * D);
            s.trim();
            if (s.is_zero()) continue;
            Poly prod = R->mul(pi, s);
            for (size_t l = 0; l < D; ++l) qv[c * D + l] = prod.coeff(l);
        }
        mk.push_back(std::move(qv));
    }
    size_t mk_log = span_size_log(mk, amb, pr);
    size_t diff = K.size_log() - mk_log;
    if (diff % d != 0) throw invariant_error("K/mK dimension is not a multiple of deg(residue)");
    return BettiPair{b0, diff / d};
}

// Betti pair of the j-th block component at the emulated infinite precision
// k+1 (stable once the precision exceeds the module exponent by one).
inline BettiPair betti_lifted(const FiniteModule& G, size_t j) {
    const QuotRingPtr& R = G.ring();
    QuotRingPtr lifted_block = QuotRing::make(
        R->params.with_precision(R->params.k + 1), R->blocks[j].modulus.lifted(R->params.k + 1));
    // component first (over R_j at precision k), then lift verbatim
    QuotRingPtr block = R->block_ring(j);
    FiniteModule Gj = G.block_component(j, block);
    return betti_local(Gj.lifted(lifted_block));
}

// Betti pair of the j-th block component at native precision k.
inline BettiPair betti_block(const FiniteModule& G, size_t j) {
    return betti_local(G.block_component(j, G.ring()->block_ring(j)));
}

// dim_Fp(G / pG)
inline size_t residue_rank(const FiniteModule& G) {
    const RingParams& pr = G.ring()->params;
    size_t amb = G.ambient_dim();
    std::vector<std::vector<std::uint64_t>> gens = G.relation_lattice().rows;
    for (size_t c = 0; c < amb; ++c) {
        std::vector<std::uint64_t> v(amb, 0);
        v[c] = pr.p % pr.pk;
        gens.push_back(std::move(v));
    }
    return pr.k * amb - span_size_log(gens, amb, pr);
}

// dim_{F_{q_j}} of G / m_j G
inline size_t residue_rank_block(const FiniteModule& G, size_t j) {
    const QuotRingPtr& R = G.ring();
    const RingParams& pr = R->params;
    const size_t D = R->deg();
    size_t amb = G.ambient_dim();
    Poly pi = Poly(pr, R->blocks[j].pbar.c);
    std::vector<std::vector<std::uint64_t>> gens = G.relation_lattice().rows;
    for (size_t c = 0; c * D < amb; ++c) {
        std::vector<std::uint64_t> v(amb, 0);
        v[c * D] = pr.p % pr.pk;
        gens.push_back(std::move(v));
        for (size_t pos = 0; pos < D; ++pos) {
            Poly e = R->mul(pi, Poly::monomial(pr, 1, pos));
            std::vector<std::uint64_t> w(amb, 0);
            for (size_t l = 0; l < D; ++l) w[c * D + l] = e.coeff(l);
            gens.push_back(std::move(w));
        }
    }
    size_t quot = pr.k * amb - span_size_log(gens, amb, pr);
    unsigned d = R->blocks[j].res_deg;
    if (quot % d != 0) throw invariant_error("block residue rank not divisible by deg");
    return quot / d;
}

// u_j(M) = dim_{F_{q_j}}(pbar_j^{m_j - 1} * M_j) for a module killed by p,
// where M_j = M / Q_j M.
inline size_t u_invariant(const FiniteModule& M, size_t j) {
    const QuotRingPtr& R = M.ring();
    const RingParams& pr = R->params;
    if (!M.is_killed_by(Poly::constant(pr, pr.p)))
        throw config_error("u-invariant requires a module killed by p");
    const size_t D = R->deg();
    const LocalBlock& blk = R->blocks[j];

    FiniteModule Mj = M.quotient_by(mod_monic(blk.modulus, R->modulus));
    size_t amb = Mj.ambient_dim();

    Poly pw = Poly::constant(pr, 1);
    Poly pi = Poly(pr, blk.pbar.c);
    for (unsigned i = 0; i + 1 < blk.mult; ++i) pw = R->mul(pw, pi);

    std::vector<std::vector<std::uint64_t>> gens = Mj.relation_lattice().rows;
    size_t base = Mj.relation_lattice().size_log();
    for (size_t c = 0; c * D < amb; ++c)
        for (size_t pos = 0; pos < D; ++pos) {
            Poly e = R->mul(pw, Poly::monomial(pr, 1, pos));
            std::vector<std::uint64_t> v(amb, 0);
            for (size_t l = 0; l < D; ++l) v[c * D + l] = e.coeff(l);
            gens.push_back(std::move(v));
        }
    size_t img = span_size_log(gens, amb, pr) - base;
    if (img % blk.res_deg != 0) throw invariant_error("u-invariant not divisible by deg");
    return img / blk.res_deg;
}

// Whether G can occur as such a cokernel at all: the lifted Betti numbers of
// every block component balance (b0 = b1). Requires p^{k-1} G = 0 so that the
// finite-precision data faithfully represents the infinite-precision module.
inline std::vector<bool> realizable_blocks(const FiniteModule& G) {
    const RingParams& pr = G.ring()->params;
    Poly pk1 = Poly::constant(pr, pr.p_power(pr.k - 1));
    if (!G.is_killed_by(pk1))
        throw config_error("realizability requires p^(k-1) G = 0");
    std::vector<bool> out;
    for (size_t j = 0; j < G.ring()->blocks.size(); ++j) {
        BettiPair b = betti_lifted(G, j);
        out.push_back(b.b0 == b.b1);
    }
    return out;
}

inline bool is_realizable(const FiniteModule& G) {
    for (bool ok : realizable_blocks(G))
        if (!ok) return false;
    return true;
}

}  // namespace pkmod
