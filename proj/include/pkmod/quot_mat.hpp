#pragma once

#include <vector>

#include "pkmod/mat.hpp"
#include "pkmod/quot_ring.hpp"

namespace pkmod {

// Dense matrix over R = (Z/p^k)[t]/(P). Entries are stored as fixed-stride
// coefficient slices of length deg(P), reduced mod P.
struct QMat {
    size_t rows = 0, cols = 0;
    QuotRingPtr ring;
    size_t stride = 0;                // deg(P)
    std::vector<std::uint64_t> a;     // rows*cols*stride coefficients

    QMat() = default;
    QMat(size_t r, size_t c, QuotRingPtr rg)
        : rows(r), cols(c), ring(std::move(rg)), stride(ring->deg()), a(r * c * stride, 0) {}

    std::uint64_t* slice(size_t i, size_t j) { return a.data() + (i * cols + j) * stride; }
    const std::uint64_t* slice(size_t i, size_t j) const {
        return a.data() + (i * cols + j) * stride;
    }

    Poly entry(size_t i, size_t j) const {
        Poly e(ring->params);
        e.c.assign(slice(i, j), slice(i, j) + stride);
        e.trim();
        return e;
    }

    void set_entry(size_t i, size_t j, const Poly& v) {
        Poly r = ring->reduce(v);
        std::uint64_t* s = slice(i, j);
        for (size_t l = 0; l < stride; ++l) s[l] = r.coeff(l);
    }

    static QMat identity(size_t n, QuotRingPtr rg) {
        QMat m(n, n, rg);
        for (size_t i = 0; i < n; ++i) m.slice(i, i)[0] = 1;
        return m;
    }

    // constant embedding of a matrix over Z/p^k
    static QMat from_scalar_mat(const Mat& m, QuotRingPtr rg) {
        QMat q(m.rows, m.cols, rg);
        for (size_t i = 0; i < m.rows; ++i)
            for (size_t j = 0; j < m.cols; ++j) q.slice(i, j)[0] = m.at(i, j);
        return q;
    }

    bool operator==(const QMat& o) const {
        return rows == o.rows && cols == o.cols && a == o.a;
    }

    // The Z/p^k matrix of the same map on R^cols = (Z/p^k)^(cols*deg):
    // column (j, l) is the linearization of t^l * (column j).
    Mat lin() const {
        const size_t D = stride;
        Mat L(rows * D, cols * D, ring->params);
        for (size_t i = 0; i < rows; ++i)
            for (size_t j = 0; j < cols; ++j) {
                Poly e = entry(i, j);
                Poly shifted = e;
                for (size_t l = 0; l < D; ++l) {
                    if (l > 0) shifted = ring->mul(shifted, Poly::monomial(ring->params, 1, 1));
                    for (size_t r = 0; r < D; ++r) L.at(i * D + r, j * D + l) = shifted.coeff(r);
                }
            }
        return L;
    }

    // entries reduced mod Q_j, as a matrix over the local block ring
    QMat block_component(size_t j, const QuotRingPtr& block) const {
        QMat out(rows, cols, block);
        for (size_t i = 0; i < rows; ++i)
            for (size_t c = 0; c < cols; ++c)
                out.set_entry(i, c, mod_monic(entry(i, c), ring->blocks[j].modulus));
        return out;
    }

    // coefficients lifted verbatim into the same modulus at precision k2 >= k
    QMat lifted(const QuotRingPtr& lifted_ring) const {
        QMat out(rows, cols, lifted_ring);
        for (size_t i = 0; i < rows; ++i)
            for (size_t c = 0; c < cols; ++c) {
                Poly e = entry(i, c);
                out.set_entry(i, c, Poly(lifted_ring->params, e.c));
            }
        return out;
    }
};

inline QMat operator*(const QMat& x, const QMat& y) {
    QMat r(x.rows, y.cols, x.ring);
    for (size_t i = 0; i < x.rows; ++i)
        for (size_t l = 0; l < x.cols; ++l) {
            Poly e = x.entry(i, l);
            if (e.is_zero()) continue;
            for (size_t j = 0; j < y.cols; ++j)
                r.set_entry(i, j, r.entry(i, j) + x.ring->mul(e, y.entry(l, j)));
        }
    return r;
}

// X - t*I over R, the linear pencil whose cokernel carries the R-module
// structure of cok(P(X)) with t acting as X.
inline QMat linearize(const Mat& x, const QuotRingPtr& ring) {
    if (x.rows != x.cols) throw config_error("linearize requires a square matrix");
    if (!(x.ring == ring->params)) throw config_error("matrix/ring parameter mismatch");
    QMat z = QMat::from_scalar_mat(x, ring);
    Poly t = ring->t_gen();
    for (size_t i = 0; i < x.rows; ++i) z.set_entry(i, i, z.entry(i, i) - t);
    return z;
}

// sum_i coeff[i] * t^i as a matrix over R (all coeff matrices same shape)
inline QMat from_coefficient_mats(const std::vector<Mat>& coeffs, const QuotRingPtr& ring) {
    if (coeffs.empty()) throw config_error("empty coefficient list");
    QMat z(coeffs[0].rows, coeffs[0].cols, ring);
    for (size_t i = 0; i < z.rows; ++i)
        for (size_t j = 0; j < z.cols; ++j) {
            Poly e(ring->params);
            for (size_t l = 0; l < coeffs.size(); ++l)
                e = e + coeffs[l].at(i, j) * Poly::monomial(ring->params, 1, l);
            z.set_entry(i, j, e);
        }
    return z;
}

// P evaluated at a square matrix over Z/p^k (Horner).
inline Mat poly_at_mat(const Poly& pol, const Mat& x) {
    Mat acc(x.rows, x.cols, x.ring);
    for (size_t i = pol.c.size(); i-- > 0;) {
        acc = acc * x;
        for (size_t d = 0; d < x.rows; ++d)
            acc.at(d, d) = x.ring.add(acc.at(d, d), pol.coeff(i));
    }
    return acc;
}

}  // namespace pkmod
