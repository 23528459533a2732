#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>

#include "lpacket/numeric.hpp"

namespace lpacket {

// Dense matrix of arbitrary-precision integers, row-major.
struct IntMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Int> a;

    IntMatrix() = default;
    IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}
    IntMatrix(std::size_t r, std::size_t c, std::vector<Int> entries)
        : rows(r), cols(c), a(std::move(entries)) {
        if (a.size() != rows * cols) throw std::invalid_argument("IntMatrix: entry count");
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static IntMatrix from_rows(const std::vector<Vec>& rws, std::size_t ncols) {
        IntMatrix m(rws.size(), ncols);
        for (std::size_t i = 0; i < rws.size(); ++i) {
            if (rws[i].size() != ncols) throw std::invalid_argument("IntMatrix: row length");
            for (std::size_t j = 0; j < ncols; ++j) m(i, j) = rws[i][j];
        }
        return m;
    }

    Int& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    Vec row(std::size_t i) const {
        Vec r(cols);
        for (std::size_t j = 0; j < cols; ++j) r[j] = (*this)(i, j);
        return r;
    }

    bool operator==(const IntMatrix& o) const {
        return rows == o.rows && cols == o.cols && a == o.a;
    }

    IntMatrix transpose() const {
        IntMatrix t(cols, rows);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    IntMatrix operator*(const IntMatrix& o) const {
        if (cols != o.rows) throw std::invalid_argument("IntMatrix: mul shape");
        IntMatrix p(rows, o.cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t k = 0; k < cols; ++k) {
                if ((*this)(i, k) == 0) continue;
                for (std::size_t j = 0; j < o.cols; ++j)
                    p(i, j) += (*this)(i, k) * o(k, j);
            }
        return p;
    }

    IntMatrix operator+(const IntMatrix& o) const {
        if (rows != o.rows || cols != o.cols) throw std::invalid_argument("IntMatrix: add shape");
        IntMatrix s(rows, cols);
        for (std::size_t i = 0; i < a.size(); ++i) s.a[i] = a[i] + o.a[i];
        return s;
    }

    IntMatrix operator-(const IntMatrix& o) const {
        if (rows != o.rows || cols != o.cols) throw std::invalid_argument("IntMatrix: sub shape");
        IntMatrix s(rows, cols);
        for (std::size_t i = 0; i < a.size(); ++i) s.a[i] = a[i] - o.a[i];
        return s;
    }

    IntMatrix operator-() const {
        IntMatrix s(rows, cols);
        for (std::size_t i = 0; i < a.size(); ++i) s.a[i] = -a[i];
        return s;
    }

    // Matrix acting on a column vector.
    Vec apply(const Vec& v) const {
        if (v.size() != cols) throw std::invalid_argument("IntMatrix: apply size");
        Vec r(rows, 0);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    QVec apply(const QVec& v) const {
        if (v.size() != cols) throw std::invalid_argument("IntMatrix: apply size");
        QVec r(rows, Rat(0));
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) r[i] += Rat((*this)(i, j)) * v[j];
        return r;
    }

    bool is_identity() const {
        if (rows != cols) return false;
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                if ((*this)(i, j) != Int(i == j ? 1 : 0)) return false;
        return true;
    }
};

// Dense rational matrix; only the exact solve/inverse plumbing lives here.
struct QMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Rat> a;

    QMatrix() = default;
    QMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, Rat(0)) {}

    static QMatrix identity(std::size_t n) {
        QMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static QMatrix from_int(const IntMatrix& m) {
        QMatrix q(m.rows, m.cols);
        for (std::size_t i = 0; i < m.a.size(); ++i) q.a[i] = Rat(m.a[i]);
        return q;
    }

    static QMatrix from_rows(const std::vector<QVec>& rws, std::size_t ncols) {
        QMatrix m(rws.size(), ncols);
        for (std::size_t i = 0; i < rws.size(); ++i) {
            if (rws[i].size() != ncols) throw std::invalid_argument("QMatrix: row length");
            for (std::size_t j = 0; j < ncols; ++j) m(i, j) = rws[i][j];
        }
        return m;
    }

    Rat& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    QVec row(std::size_t i) const {
        QVec r(cols);
        for (std::size_t j = 0; j < cols; ++j) r[j] = (*this)(i, j);
        return r;
    }

    QMatrix operator*(const QMatrix& o) const {
        if (cols != o.rows) throw std::invalid_argument("QMatrix: mul shape");
        QMatrix p(rows, o.cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t k = 0; k < cols; ++k) {
                if ((*this)(i, k) == 0) continue;
                for (std::size_t j = 0; j < o.cols; ++j)
                    p(i, j) += (*this)(i, k) * o(k, j);
            }
        return p;
    }

    QVec apply(const QVec& v) const {
        if (v.size() != cols) throw std::invalid_argument("QMatrix: apply size");
        QVec r(rows, Rat(0));
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }
};

// Solve M x = b exactly; nullopt when inconsistent.  Underdetermined systems
// get free variables set to zero.
inline std::optional<QVec> solve(const QMatrix& m, const QVec& b) {
    if (b.size() != m.rows) throw std::invalid_argument("solve: size mismatch");
    QMatrix w = m;
    QVec rhs = b;
    std::vector<std::ptrdiff_t> pivot_of_col(m.cols, -1);
    std::size_t prow = 0;
    for (std::size_t col = 0; col < m.cols && prow < m.rows; ++col) {
        std::size_t sel = prow;
        while (sel < m.rows && w(sel, col) == 0) ++sel;
        if (sel == m.rows) continue;
        if (sel != prow) {
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(w(sel, j), w(prow, j));
            std::swap(rhs[sel], rhs[prow]);
        }
        Rat inv = Rat(1) / w(prow, col);
        for (std::size_t j = col; j < m.cols; ++j) w(prow, j) *= inv;
        rhs[prow] *= inv;
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == prow || w(i, col) == 0) continue;
            Rat f = w(i, col);
            for (std::size_t j = col; j < m.cols; ++j) w(i, j) -= f * w(prow, j);
            rhs[i] -= f * rhs[prow];
        }
        pivot_of_col[col] = static_cast<std::ptrdiff_t>(prow);
        ++prow;
    }
    for (std::size_t i = prow; i < m.rows; ++i)
        if (rhs[i] != 0) return std::nullopt;
    QVec x(m.cols, Rat(0));
    for (std::size_t col = 0; col < m.cols; ++col)
        if (pivot_of_col[col] >= 0) x[col] = rhs[static_cast<std::size_t>(pivot_of_col[col])];
    return x;
}

inline std::optional<QMatrix> inverse(const QMatrix& m) {
    if (m.rows != m.cols) return std::nullopt;
    std::size_t n = m.rows;
    QMatrix w = m, inv = QMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t sel = col;
        while (sel < n && w(sel, col) == 0) ++sel;
        if (sel == n) return std::nullopt;
        if (sel != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(w(sel, j), w(col, j));
                std::swap(inv(sel, j), inv(col, j));
            }
        Rat f = Rat(1) / w(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            w(col, j) *= f;
            inv(col, j) *= f;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || w(i, col) == 0) continue;
            Rat g = w(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                w(i, j) -= g * w(col, j);
                inv(i, j) -= g * inv(col, j);
            }
        }
    }
    return inv;
}

// Exact inverse of an integer matrix with det = +-1.
inline IntMatrix inverse_unimodular(const IntMatrix& m) {
    auto qi = inverse(QMatrix::from_int(m));
    if (!qi) throw std::invalid_argument("inverse_unimodular: singular");
    IntMatrix r(m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) {
            Rat x = (*qi)(i, j);
            x.canonicalize();
            if (x.get_den() != 1)
                throw std::invalid_argument("inverse_unimodular: not unimodular");
            r(i, j) = x.get_num();
        }
    return r;
}

inline Rat det(const QMatrix& m) {
    if (m.rows != m.cols) throw std::invalid_argument("det: not square");
    QMatrix w = m;
    std::size_t n = m.rows;
    Rat d = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t sel = col;
        while (sel < n && w(sel, col) == 0) ++sel;
        if (sel == n) return Rat(0);
        if (sel != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(w(sel, j), w(col, j));
            d = -d;
        }
        d *= w(col, col);
        Rat f = Rat(1) / w(col, col);
        for (std::size_t i = col + 1; i < n; ++i) {
            if (w(i, col) == 0) continue;
            Rat g = w(i, col) * f;
            for (std::size_t j = col; j < n; ++j) w(i, j) -= g * w(col, j);
        }
    }
    d.canonicalize();
    return d;
}

inline Int det(const IntMatrix& m) {
    Rat d = det(QMatrix::from_int(m));
    if (d.get_den() != 1) throw std::logic_error("det: integer matrix with fractional det");
    return d.get_num();
}

inline bool is_unimodular(const IntMatrix& m) {
    if (m.rows != m.cols) return false;
    Int d = det(m);
    return d == 1 || d == -1;
}

}  // namespace lpacket
