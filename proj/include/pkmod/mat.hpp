#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "pkmod/base.hpp"
#include "pkmod/zmod.hpp"

namespace pkmod {

// Dense matrix over Z/p^k, row-major canonical residues.
struct Mat {
    size_t rows = 0, cols = 0;
    RingParams ring;
    std::vector<std::uint64_t> a;

    Mat() = default;
    Mat(size_t r, size_t c, RingParams rg) : rows(r), cols(c), ring(rg), a(r * c, 0) {}

    static Mat identity(size_t n, RingParams rg) {
        Mat m(n, n, rg);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = 1 % rg.pk;
        return m;
    }

    std::uint64_t& at(size_t i, size_t j) { return a[i * cols + j]; }
    std::uint64_t at(size_t i, size_t j) const { return a[i * cols + j]; }

    bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }

    bool is_zero() const {
        for (auto x : a)
            if (x) return false;
        return true;
    }

    Mat reduced_mod(std::uint64_t m) const {
        Mat r = *this;
        for (auto& x : r.a) x %= m;
        return r;
    }

    Mat reduced_mod_p() const {
        Mat r(rows, cols, RingParams(ring.p, 1));
        for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] % ring.p;
        return r;
    }

    Mat lifted(unsigned k2) const {
        Mat r(rows, cols, ring.with_precision(k2));
        r.a = a;
        return r;
    }

};

inline Mat operator+(const Mat& x, const Mat& y) {
    Mat r = x;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.ring.add(x.a[i], y.a[i]);
    return r;
}

inline Mat operator-(const Mat& x, const Mat& y) {
    Mat r = x;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.ring.sub(x.a[i], y.a[i]);
    return r;
}

inline Mat operator*(const Mat& x, const Mat& y) {
    Mat r(x.rows, y.cols, x.ring);
    for (size_t i = 0; i < x.rows; ++i)
        for (size_t l = 0; l < x.cols; ++l) {
            std::uint64_t v = x.at(i, l);
            if (!v) continue;
            for (size_t j = 0; j < y.cols; ++j)
                r.at(i, j) = x.ring.add(r.at(i, j), x.ring.mul(v, y.at(l, j)));
        }
    return r;
}

inline Mat operator*(std::uint64_t s, const Mat& x) {
    Mat r = x;
    for (auto& v : r.a) v = x.ring.mul(s, v);
    return r;
}

inline std::vector<std::uint64_t> mat_vec(const Mat& m, const std::vector<std::uint64_t>& v) {
    std::vector<std::uint64_t> r(m.rows, 0);
    for (size_t i = 0; i < m.rows; ++i) {
        std::uint64_t acc = 0;
        for (size_t j = 0; j < m.cols; ++j) acc = m.ring.add(acc, m.ring.mul(m.at(i, j), v[j]));
        r[i] = acc;
    }
    return r;
}

// det mod p (Gaussian elimination over F_p); invertibility over Z/p^k is
// equivalent to a unit determinant mod p.
inline std::uint64_t det_mod_p(const Mat& m) {
    if (m.rows != m.cols) throw invariant_error("determinant of a non-square matrix");
    const std::uint64_t p = m.ring.p;
    Mat w = m.reduced_mod_p();
    RingParams fp = w.ring;
    std::uint64_t det = 1 % p;
    for (size_t c = 0; c < w.cols; ++c) {
        size_t piv = c;
        while (piv < w.rows && w.at(piv, c) == 0) ++piv;
        if (piv == w.rows) return 0;
        if (piv != c) {
            for (size_t j = 0; j < w.cols; ++j) std::swap(w.at(piv, j), w.at(c, j));
            det = fp.mul(det, p - 1);
        }
        det = fp.mul(det, w.at(c, c));
        std::uint64_t inv = fp.inv(w.at(c, c));
        for (size_t i = c + 1; i < w.rows; ++i) {
            std::uint64_t f = fp.mul(inv, w.at(i, c));
            if (!f) continue;
            for (size_t j = c; j < w.cols; ++j)
                w.at(i, j) = fp.sub(w.at(i, j), fp.mul(f, w.at(c, j)));
        }
    }
    return det;
}

inline bool is_invertible(const Mat& m) { return m.rows == m.cols && det_mod_p(m) != 0; }

inline Mat random_mat(size_t r, size_t c, RingParams ring, SplitMix64& rng) {
    Mat m(r, c, ring);
    for (auto& x : m.a) x = rng.below(ring.pk);
    return m;
}

inline Mat random_invertible(size_t n, RingParams ring, SplitMix64& rng) {
    for (int tries = 0; tries < 4096; ++tries) {
        Mat m = random_mat(n, n, ring, rng);
        if (is_invertible(m)) return m;
    }
    throw invariant_error("failed to sample an invertible matrix");
}

// ---------------------------------------------------------------------------
// Howell form: the canonical echelon generating set of a row span over
// Z/p^k. Unlike plain echelon forms it is closed under the span property
// (any span element supported past column c lies in the span of the rows
// with pivot past c), which makes kernels and membership tests exact.
// ---------------------------------------------------------------------------
struct HowellForm {
    size_t ncols = 0;
    RingParams ring;
    std::vector<std::vector<std::uint64_t>> rows;  // sorted by pivot column
    std::vector<size_t> pivot_col;
    std::vector<unsigned> pivot_val;  // pivot entry is p^val

    size_t size_log() const {  // log_p of the span cardinality
        size_t s = 0;
        for (auto v : pivot_val) s += ring.k - v;
        return s;
    }

    // canonical coset representative of v modulo the span (entry at each
    // pivot column reduced into [0, p^val))
    std::vector<std::uint64_t> reduce(std::vector<std::uint64_t> v) const {
        for (size_t i = 0; i < rows.size(); ++i) {
            std::uint64_t piv = ring.p_power(pivot_val[i]);
            std::uint64_t q = v[pivot_col[i]] / piv;
            if (!q) continue;
            for (size_t j = pivot_col[i]; j < ncols; ++j)
                v[j] = ring.sub(v[j], ring.mul(q, rows[i][j]));
        }
        return v;
    }

    bool contains(const std::vector<std::uint64_t>& v) const {
        auto r = reduce(v);
        return std::all_of(r.begin(), r.end(), [](std::uint64_t x) { return x == 0; });
    }
};

inline HowellForm howell_form(std::vector<std::vector<std::uint64_t>> gens, size_t ncols,
                              RingParams ring) {
    std::vector<std::optional<std::vector<std::uint64_t>>> piv(ncols);
    std::vector<std::vector<std::uint64_t>> work = std::move(gens);

    auto val_of = [&](std::uint64_t x) { return ring.valuation(x); };

    while (!work.empty()) {
        std::vector<std::uint64_t> v = std::move(work.back());
        work.pop_back();
        for (size_t c = 0; c < ncols; ++c) {
            if (v[c] % ring.pk == 0) {
                v[c] = 0;
                continue;
            }
            unsigned b = val_of(v[c]);
            if (!piv[c]) {
                std::uint64_t u_inv = ring.inv(ring.unit_part(v[c]));
                for (auto& x : v) x = ring.mul(x, u_inv);
                if (b > 0) {
                    std::vector<std::uint64_t> extra(ncols);
                    std::uint64_t f = ring.p_power(ring.k - b);
                    for (size_t j = 0; j < ncols; ++j) extra[j] = ring.mul(f, v[j]);
                    extra[c] = 0;  // p^(k-b) * p^b = 0
                    work.push_back(std::move(extra));
                }
                piv[c] = std::move(v);
                break;
            }
            auto& u = *piv[c];
            unsigned a = val_of(u[c]);
            if (b >= a) {
                std::uint64_t q = v[c] / ring.p_power(a);
                for (size_t j = c; j < ncols; ++j) v[j] = ring.sub(v[j], ring.mul(q, u[j]));
            } else {
                // v takes over the pivot; the old pivot row is reworked
                std::uint64_t u_inv = ring.inv(ring.unit_part(v[c]));
                for (auto& x : v) x = ring.mul(x, u_inv);
                std::vector<std::uint64_t> old = std::move(u);
                std::uint64_t q = old[c] / ring.p_power(b);
                for (size_t j = c; j < ncols; ++j)
                    old[j] = ring.sub(old[j], ring.mul(q, v[j]));
                work.push_back(std::move(old));
                if (b > 0) {
                    std::vector<std::uint64_t> extra(ncols);
                    std::uint64_t f = ring.p_power(ring.k - b);
                    for (size_t j = 0; j < ncols; ++j) extra[j] = ring.mul(f, v[j]);
                    extra[c] = 0;
                    work.push_back(std::move(extra));
                }
                piv[c] = std::move(v);
                break;
            }
        }
    }

    HowellForm h;
    h.ncols = ncols;
    h.ring = ring;
    for (size_t c = 0; c < ncols; ++c)
        if (piv[c]) {
            h.rows.push_back(std::move(*piv[c]));
            h.pivot_col.push_back(c);
            h.pivot_val.push_back(ring.valuation(h.rows.back()[c]));
        }
    // back-reduce entries above each pivot into [0, p^val)
    for (size_t i = 0; i < h.rows.size(); ++i)
        for (size_t j = i + 1; j < h.rows.size(); ++j) {
            size_t c = h.pivot_col[j];
            std::uint64_t piv_pw = ring.p_power(h.pivot_val[j]);
            std::uint64_t q = h.rows[i][c] / piv_pw;
            if (!q) continue;
            for (size_t l = c; l < ncols; ++l)
                h.rows[i][l] = ring.sub(h.rows[i][l], ring.mul(q, h.rows[j][l]));
        }
    return h;
}

// Howell form of the column span of m (columns as generators).
inline HowellForm column_span(const Mat& m) {
    std::vector<std::vector<std::uint64_t>> gens;
    gens.reserve(m.cols);
    for (size_t j = 0; j < m.cols; ++j) {
        std::vector<std::uint64_t> g(m.rows);
        for (size_t i = 0; i < m.rows; ++i) g[i] = m.at(i, j);
        gens.push_back(std::move(g));
    }
    return howell_form(std::move(gens), m.rows, m.ring);
}

// Columns generating {v : m v = 0}, canonical via the Howell form of
// [m^T | I]: rows vanishing on the first block carry the kernel.
inline Mat kernel_basis(const Mat& m) {
    const size_t n = m.rows, w = m.cols;
    std::vector<std::vector<std::uint64_t>> gens;
    gens.reserve(w);
    for (size_t i = 0; i < w; ++i) {
        std::vector<std::uint64_t> g(n + w, 0);
        for (size_t j = 0; j < n; ++j) g[j] = m.at(j, i);
        g[n + i] = 1 % m.ring.pk;
        gens.push_back(std::move(g));
    }
    HowellForm h = howell_form(std::move(gens), n + w, m.ring);
    std::vector<std::vector<std::uint64_t>> ker;
    for (size_t i = 0; i < h.rows.size(); ++i)
        if (h.pivot_col[i] >= n)
            ker.emplace_back(h.rows[i].begin() + n, h.rows[i].end());
    Mat K(w, ker.size(), m.ring);
    for (size_t j = 0; j < ker.size(); ++j)
        for (size_t i = 0; i < w; ++i) K.at(i, j) = ker[j][i];
    return K;
}

// ---------------------------------------------------------------------------
// Smith normal form over the chain ring Z/p^k: U m V = D with D diagonal,
// diagonal entries powers of p (or 0) of nondecreasing valuation, U and V
// invertible. Pivoting picks the minimal-valuation entry, ties row-major,
// so the output is deterministic.
// ---------------------------------------------------------------------------
struct SmithForm {
    Mat u, d, v;
    std::vector<unsigned> diag_val;  // valuation of each diagonal entry (k if 0)
};

inline SmithForm smith_normal_form(const Mat& m) {
    const RingParams ring = m.ring;
    SmithForm s{Mat::identity(m.rows, ring), m, Mat::identity(m.cols, ring), {}};
    Mat& d = s.d;
    Mat& u = s.u;
    Mat& v = s.v;
    const size_t steps = std::min(m.rows, m.cols);

    for (size_t t = 0; t < steps; ++t) {
        size_t bi = t, bj = t;
        unsigned best = kValInfinity;
        for (size_t i = t; i < d.rows; ++i)
            for (size_t j = t; j < d.cols; ++j) {
                unsigned w = ring.valuation(d.at(i, j));
                if (w < best) {
                    best = w;
                    bi = i;
                    bj = j;
                }
            }
        if (best == kValInfinity) break;  // remaining block is zero

        if (bi != t)
            for (size_t j = 0; j < d.cols; ++j) std::swap(d.at(bi, j), d.at(t, j));
        if (bi != t)
            for (size_t j = 0; j < u.cols; ++j) std::swap(u.at(bi, j), u.at(t, j));
        if (bj != t)
            for (size_t i = 0; i < d.rows; ++i) std::swap(d.at(i, bj), d.at(i, t));
        if (bj != t)
            for (size_t i = 0; i < v.rows; ++i) std::swap(v.at(i, bj), v.at(i, t));

        std::uint64_t unit_inv = ring.inv(ring.unit_part(d.at(t, t)));
        for (size_t j = 0; j < d.cols; ++j) d.at(t, j) = ring.mul(unit_inv, d.at(t, j));
        for (size_t j = 0; j < u.cols; ++j) u.at(t, j) = ring.mul(unit_inv, u.at(t, j));

        const std::uint64_t piv = d.at(t, t);  // p^best
        for (size_t i = t + 1; i < d.rows; ++i) {
            std::uint64_t q = d.at(i, t) / piv;  // exact: val >= best
            if (!q) continue;
            for (size_t j = 0; j < d.cols; ++j)
                d.at(i, j) = ring.sub(d.at(i, j), ring.mul(q, d.at(t, j)));
            for (size_t j = 0; j < u.cols; ++j)
                u.at(i, j) = ring.sub(u.at(i, j), ring.mul(q, u.at(t, j)));
        }
        for (size_t j = t + 1; j < d.cols; ++j) {
            std::uint64_t q = d.at(t, j) / piv;
            if (!q) continue;
            for (size_t i = 0; i < d.rows; ++i)
                d.at(i, j) = ring.sub(d.at(i, j), ring.mul(q, d.at(i, t)));
            for (size_t i = 0; i < v.rows; ++i)
                v.at(i, j) = ring.sub(v.at(i, j), ring.mul(q, v.at(i, t)));
        }
    }

    for (size_t t = 0; t < steps; ++t) {
        unsigned w = ring.valuation(d.at(t, t));
        s.diag_val.push_back(w == kValInfinity ? ring.k : w);
    }
    if (!is_invertible(u) || !is_invertible(v))
        throw invariant_error("Smith transforms failed the invertibility check");
    if (!(u * m * v == d)) throw invariant_error("Smith identity U*M*V = D failed");
    return s;
}

// Partition describing the cokernel of a matrix over Z/p^k as an abelian
// group: weakly decreasing parts in [1, k], at most #rows of them.
struct GroupType {
    std::vector<unsigned> parts;

    bool operator==(const GroupType&) const = default;
    bool operator<(const GroupType& o) const { return parts < o.parts; }

    size_t size_log() const {  // log_p of the group order
        size_t s = 0;
        for (auto e : parts) s += e;
        return s;
    }

    size_t rank() const { return parts.size(); }  // minimal generators

    std::string str(std::uint64_t p) const {
        if (parts.empty()) return "0";
        std::string s;
        for (size_t i = 0; i < parts.size(); ++i) {
            if (i) s += "+";
            std::uint64_t q = 1;
            for (unsigned j = 0; j < parts[i]; ++j) q *= p;
            s += "Z/" + std::to_string(q);
        }
        return s;
    }
};

inline GroupType cokernel_type(const Mat& m) {
    SmithForm s = smith_normal_form(m);
    GroupType g;
    for (auto w : s.diag_val) {
        // (Z/p^k)/(p^a) = Z/p^a: a diagonal entry of valuation a contributes a
        // part of size a; zero entries (valuation clamped to k) contribute k
        unsigned part = std::min(w, m.ring.k);
        if (part) g.parts.push_back(part);
    }
    // rows with no diagonal entry contribute free Z/p^k summands
    for (size_t i = std::min(m.rows, m.cols); i < m.rows; ++i) g.parts.push_back(m.ring.k);
    std::sort(g.parts.begin(), g.parts.end(), std::greater<>());
    return g;
}

}  // namespace pkmod
