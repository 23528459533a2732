#pragma once

#include <optional>

#include "lpacket/int_matrix.hpp"

namespace lpacket {

// U*A*V = D with U, V unimodular and D diagonal, d1 | d2 | ... | dk >= 0.
struct SmithDecomposition {
    IntMatrix U, D, V;

    std::vector<Int> diagonal() const {
        std::size_t k = std::min(D.rows, D.cols);
        std::vector<Int> d(k);
        for (std::size_t i = 0; i < k; ++i) d[i] = D(i, i);
        return d;
    }

    // Diagonal entries > 1, i.e. the factors of the torsion part.
    std::vector<Int> invariant_factors() const {
        std::vector<Int> f;
        for (const auto& d : diagonal())
            if (d > 1) f.push_back(d);
        return f;
    }

    std::size_t rank() const {
        std::size_t r = 0;
        for (const auto& d : diagonal())
            if (d != 0) ++r;
        return r;
    }
};

namespace detail {

inline void swap_rows(IntMatrix& m, std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < m.cols; ++k) std::swap(m(i, k), m(j, k));
}

inline void swap_cols(IntMatrix& m, std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < m.rows; ++k) std::swap(m(k, i), m(k, j));
}

inline void add_row(IntMatrix& m, std::size_t dst, std::size_t src, const Int& f) {
    for (std::size_t k = 0; k < m.cols; ++k) m(dst, k) += f * m(src, k);
}

inline void add_col(IntMatrix& m, std::size_t dst, std::size_t src, const Int& f) {
    for (std::size_t k = 0; k < m.rows; ++k) m(k, dst) += f * m(k, src);
}

inline void negate_row(IntMatrix& m, std::size_t i) {
    for (std::size_t k = 0; k < m.cols; ++k) m(i, k) = -m(i, k);
}

}  // namespace detail

inline SmithDecomposition snf(const IntMatrix& A) {
    using namespace detail;
    SmithDecomposition s;
    s.D = A;
    s.U = IntMatrix::identity(A.rows);
    s.V = IntMatrix::identity(A.cols);
    IntMatrix& D = s.D;
    IntMatrix& U = s.U;
    IntMatrix& V = s.V;
    std::size_t n = std::min(A.rows, A.cols);

    for (std::size_t t = 0; t < n; ++t) {
        // Move a minimal nonzero entry of the trailing block to (t,t),
        // then clear its row and column; repeat until both are clear.
        for (;;) {
            std::size_t pi = t, pj = t;
            bool found = false;
            for (std::size_t i = t; i < D.rows; ++i)
                for (std::size_t j = t; j < D.cols; ++j) {
                    if (D(i, j) == 0) continue;
                    if (!found || cmp(abs(D(i, j)), abs(D(pi, pj))) < 0) {
                        pi = i;
                        pj = j;
                        found = true;
                    }
                }
            if (!found) goto done;
            if (pi != t) {
                swap_rows(D, pi, t);
                swap_rows(U, pi, t);
            }
            if (pj != t) {
                swap_cols(D, pj, t);
                swap_cols(V, pj, t);
            }
            bool clean = true;
            for (std::size_t i = t + 1; i < D.rows; ++i) {
                if (D(i, t) == 0) continue;
                Int q = floordiv(D(i, t), D(t, t));
                if (q != 0) {
                    add_row(D, i, t, -q);
                    add_row(U, i, t, -q);
                }
                if (D(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < D.cols; ++j) {
                if (D(t, j) == 0) continue;
                Int q = floordiv(D(t, j), D(t, t));
                if (q != 0) {
                    add_col(D, j, t, -q);
                    add_col(V, j, t, -q);
                }
                if (D(t, j) != 0) clean = false;
            }
            if (!clean) continue;
            // Divisibility fix-up: fold in any entry the pivot misses.
            bool divides_all = true;
            for (std::size_t i = t + 1; i < D.rows && divides_all; ++i)
                for (std::size_t j = t + 1; j < D.cols; ++j)
                    if (!divides(D(t, t), D(i, j))) {
                        add_row(D, t, i, 1);
                        add_row(U, t, i, 1);
                        divides_all = false;
                        break;
                    }
            if (divides_all) break;
        }
        if (D(t, t) < 0) {
            negate_row(D, t);
            negate_row(U, t);
        }
    }
done:
    return s;
}

// Basis rows of {z : z * A = 0}; the trailing rows of U once D has run out
// of nonzero pivots.
inline std::vector<Vec> left_kernel(const IntMatrix& A) {
    SmithDecomposition s = snf(A);
    std::size_t r = s.rank();
    std::vector<Vec> basis;
    for (std::size_t i = r; i < A.rows; ++i) basis.push_back(s.U.row(i));
    return basis;
}

// One integral solution of z * A = t, if any.
inline std::optional<Vec> solve_left(const IntMatrix& A, const Vec& t) {
    if (t.size() != A.cols) throw std::invalid_argument("solve_left: size mismatch");
    SmithDecomposition s = snf(A);
    std::size_t n = std::min(A.rows, A.cols);
    // z*A = t  <=>  (z*Uinv)*D = t*V
    Vec tv(A.cols, 0);
    for (std::size_t j = 0; j < A.cols; ++j)
        for (std::size_t k = 0; k < A.cols; ++k) tv[j] += t[k] * s.V(k, j);
    Vec w(A.rows, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (s.D(i, i) == 0) {
            if (tv[i] != 0) return std::nullopt;
        } else {
            if (!divides(s.D(i, i), tv[i])) return std::nullopt;
            w[i] = tv[i] / s.D(i, i);
        }
    }
    for (std::size_t i = n; i < A.cols; ++i)
        if (tv[i] != 0) return std::nullopt;
    Vec z(A.rows, 0);
    for (std::size_t j = 0; j < A.rows; ++j)
        for (std::size_t k = 0; k < A.rows; ++k) z[j] += w[k] * s.U(k, j);
    return z;
}

}  // namespace lpacket
