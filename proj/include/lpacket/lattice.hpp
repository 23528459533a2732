#pragma once

#include "lpacket/abelian.hpp"

namespace lpacket {

namespace detail {

// Row Hermite form over Z: returns a canonical basis of the row span
// (pivots positive, entries above pivots reduced), zero rows dropped.
inline IntMatrix row_hermite(IntMatrix m) {
    std::size_t r = 0;
    for (std::size_t col = 0; col < m.cols && r < m.rows; ++col) {
        // Clear the column below row r with gcd row operations.
        for (std::size_t i = r + 1; i < m.rows; ++i) {
            while (m(i, col) != 0) {
                if (m(r, col) == 0) {
                    detail::swap_rows(m, r, i);
                    continue;
                }
                Int q = floordiv(m(i, col), m(r, col));
                detail::add_row(m, i, r, -q);
                if (m(i, col) != 0) detail::swap_rows(m, r, i);
            }
        }
        if (m(r, col) == 0) continue;
        if (m(r, col) < 0) detail::negate_row(m, r);
        for (std::size_t i = 0; i < r; ++i) {
            Int q = floordiv(m(i, col), m(r, col));
            if (q != 0) detail::add_row(m, i, r, -q);
        }
        ++r;
    }
    IntMatrix out(r, m.cols);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) out(i, j) = m(i, j);
    return out;
}

}  // namespace detail

// Lattice in Q^n given by basis rows; scale holds the common denominator,
// so the actual basis is int_basis / scale.
struct Lattice {
    IntMatrix int_basis;  // rank x n, a Z-basis after dividing by scale
    Int scale = 1;
    std::size_t ambient = 0;

    std::size_t rank() const { return int_basis.rows; }

    static Lattice standard(std::size_t n) {
        Lattice l;
        l.int_basis = IntMatrix::identity(n);
        l.ambient = n;
        return l;
    }

    static Lattice from_generators(const std::vector<RationalVector>& gens, std::size_t n) {
        Int d = 1;
        for (const auto& g : gens) {
            if (g.size() != n) throw std::invalid_argument("Lattice: generator size");
            d = lcm(d, g.den);
        }
        IntMatrix m(gens.size(), n);
        for (std::size_t i = 0; i < gens.size(); ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = gens[i].num[j] * (d / gens[i].den);
        Lattice l;
        l.int_basis = detail::row_hermite(m);
        l.scale = d;
        l.ambient = n;
        l.reduce_scale();
        return l;
    }

    static Lattice from_int_rows(const IntMatrix& rows) {
        Lattice l;
        l.int_basis = detail::row_hermite(rows);
        l.scale = 1;
        l.ambient = rows.cols;
        return l;
    }

    void reduce_scale() {
        Int g = scale;
        for (const auto& x : int_basis.a) g = gcd(g, x);
        if (g > 1) {
            scale /= g;
            for (auto& x : int_basis.a) x /= g;
        }
    }

    RationalVector basis_vector(std::size_t i) const {
        return RationalVector(int_basis.row(i), scale);
    }

    std::vector<RationalVector> basis_vectors() const {
        std::vector<RationalVector> out;
        for (std::size_t i = 0; i < rank(); ++i) out.push_back(basis_vector(i));
        return out;
    }

    // Rational coordinates c with v = c * basis; nullopt when v is outside
    // the Q-span.
    std::optional<QVec> coords(const RationalVector& v) const {
        if (v.size() != ambient) throw std::invalid_argument("Lattice: coords size");
        QMatrix bt(ambient, rank());
        for (std::size_t i = 0; i < rank(); ++i)
            for (std::size_t j = 0; j < ambient; ++j)
                bt(j, i) = make_rat(int_basis(i, j), scale);
        return solve(bt, v.to_qvec());
    }

    bool contains(const RationalVector& v) const {
        auto c = coords(v);
        if (!c) return false;
        for (const auto& x : *c)
            if (!is_integral(x)) return false;
        return true;
    }

    std::optional<Vec> int_coords(const RationalVector& v) const {
        auto c = coords(v);
        if (!c) return std::nullopt;
        Vec out(c->size());
        for (std::size_t i = 0; i < c->size(); ++i) {
            Rat x = (*c)[i];
            x.canonicalize();
            if (x.get_den() != 1) return std::nullopt;
            out[i] = x.get_num();
        }
        return out;
    }

    bool contains_lattice(const Lattice& other) const {
        for (std::size_t i = 0; i < other.rank(); ++i)
            if (!contains(other.basis_vector(i))) return false;
        return true;
    }

    bool equals(const Lattice& other) const {
        return contains_lattice(other) && other.contains_lattice(*this);
    }

    // Image of this lattice under an integer matrix (columns convention).
    Lattice image(const IntMatrix& m) const {
        std::vector<RationalVector> gens;
        for (std::size_t i = 0; i < rank(); ++i) {
            Vec r = m.apply(int_basis.row(i));
            gens.emplace_back(r, scale);
        }
        return from_generators(gens, m.rows);
    }

    Lattice sum(const Lattice& other) const {
        if (ambient != other.ambient) throw std::invalid_argument("Lattice: sum ambient");
        auto gens = basis_vectors();
        auto og = other.basis_vectors();
        gens.insert(gens.end(), og.begin(), og.end());
        return from_generators(gens, ambient);
    }

    // Dual lattice {y : <y, L> in Z}; requires full rank.
    Lattice dual() const {
        if (rank() != ambient) throw std::invalid_argument("Lattice: dual needs full rank");
        QMatrix b(ambient, ambient);
        for (std::size_t i = 0; i < ambient; ++i)
            for (std::size_t j = 0; j < ambient; ++j) b(i, j) = make_rat(int_basis(i, j), scale);
        auto binv = inverse(b);
        if (!binv) throw std::logic_error("Lattice: singular basis");
        std::vector<RationalVector> gens;
        for (std::size_t j = 0; j < ambient; ++j) {
            QVec col(ambient);
            for (std::size_t i = 0; i < ambient; ++i) col[i] = (*binv)(i, j);
            gens.push_back(RationalVector::from_qvec(col));
        }
        return from_generators(gens, ambient);
    }

    // Matrix of an integer involution/endomorphism restricted to this
    // lattice, in basis coordinates.  nullopt when not stable.
    std::optional<IntMatrix> restricted_matrix(const IntMatrix& m) const {
        IntMatrix out(rank(), rank());
        for (std::size_t i = 0; i < rank(); ++i) {
            Vec img = m.apply(int_basis.row(i));
            auto c = int_coords(RationalVector(img, scale));
            if (!c) return std::nullopt;
            for (std::size_t j = 0; j < rank(); ++j) out(i, j) = (*c)[j];
        }
        return out;
    }

    bool stable_under(const IntMatrix& m) const { return restricted_matrix(m).has_value(); }
};

// Saturated eigenlattice {v in L : m v = sign * v}.
inline Lattice eigenlattice(const Lattice& l, const IntMatrix& m, int sign) {
    if (m.rows != m.cols || m.rows != l.ambient)
        throw std::invalid_argument("eigenlattice: shape");
    if (!(m * m).is_identity()) throw std::invalid_argument("eigenlattice: not an involution");
    auto restricted = l.restricted_matrix(m);
    if (!restricted) throw std::invalid_argument("eigenlattice: lattice not stable");
    // Row condition x * (R -+ I) = 0 where row x holds basis coordinates:
    // sigma(x*B) = x*R*B with R = restricted matrix rows.
    IntMatrix cond = *restricted;
    for (std::size_t i = 0; i < cond.rows; ++i) cond(i, i) -= Int(sign);
    std::vector<Vec> ker = left_kernel(cond);
    std::vector<RationalVector> gens;
    for (const auto& x : ker) {
        Vec v(l.ambient, 0);
        for (std::size_t j = 0; j < l.ambient; ++j)
            for (std::size_t i = 0; i < l.rank(); ++i) v[j] += x[i] * l.int_basis(i, j);
        gens.emplace_back(v, l.scale);
    }
    return Lattice::from_generators(gens, l.ambient);
}

// (1 - m) L as a lattice.
inline Lattice one_minus_image(const IntMatrix& m, const Lattice& l) {
    IntMatrix om = IntMatrix::identity(m.rows) - m;
    return l.image(om);
}

// Finitely generated abelian quotient M/N with projection and torsion
// representatives; N must be contained in M.
struct LatticeQuotient {
    Lattice big;    // M
    Lattice small;  // N
    detail::ZQuotient zq;

    FinAbGroup group;  // torsion part
    std::size_t free_rank = 0;

    static LatticeQuotient make(const Lattice& m, const Lattice& n) {
        LatticeQuotient q;
        q.big = m;
        q.small = n;
        IntMatrix rel(n.rank(), m.rank());
        for (std::size_t i = 0; i < n.rank(); ++i) {
            auto c = m.int_coords(n.basis_vector(i));
            if (!c) throw std::invalid_argument("LatticeQuotient: N not a sublattice of M");
            for (std::size_t j = 0; j < m.rank(); ++j) rel(i, j) = (*c)[j];
        }
        q.zq = detail::ZQuotient::from_relations(m.rank(), rel);
        q.group = q.zq.torsion;
        q.free_rank = q.zq.free_rank;
        return q;
    }

    // Torsion residues and free coordinates of the class of v.
    std::pair<Vec, Vec> project_full(const RationalVector& v) const {
        auto c = big.int_coords(v);
        if (!c) throw std::invalid_argument("LatticeQuotient: vector not in M");
        return zq.project(*c);
    }

    Vec project(const RationalVector& v) const {
        auto [t, f] = project_full(v);
        for (const auto& x : f)
            if (x != 0) throw std::invalid_argument("LatticeQuotient: class not torsion");
        return t;
    }

    bool in_domain(const RationalVector& v) const { return big.contains(v); }

    // Canonical torsion representative.
    RationalVector representative(const Vec& t) const {
        Vec c = zq.representative(t);
        Vec v(big.ambient, 0);
        for (std::size_t j = 0; j < big.ambient; ++j)
            for (std::size_t i = 0; i < big.rank(); ++i) v[j] += c[i] * big.int_basis(i, j);
        return RationalVector(v, big.scale);
    }

    std::vector<RationalVector> torsion_generator_reps() const {
        std::vector<RationalVector> out;
        for (std::size_t i = 0; i < group.ngens(); ++i) {
            Vec t = group.zero();
            t[i] = 1;
            out.push_back(representative(t));
        }
        return out;
    }
};

// Quotient Z^n / <relation rows>, the spec-level finite_quotient.
inline LatticeQuotient finite_quotient(std::size_t ambient_rank, const IntMatrix& relations) {
    if (relations.cols != ambient_rank)
        throw std::invalid_argument("finite_quotient: relation width != ambient rank");
    Lattice zn = Lattice::standard(ambient_rank);
    std::vector<RationalVector> gens;
    for (std::size_t i = 0; i < relations.rows; ++i)
        gens.emplace_back(relations.row(i), Int(1));
    Lattice rel = gens.empty() ? Lattice::from_generators({}, ambient_rank)
                               : Lattice::from_generators(gens, ambient_rank);
    return LatticeQuotient::make(zn, rel);
}

// Torsion part of a presented quotient.
inline FinAbGroup torsion_subgroup(const LatticeQuotient& q) { return q.group; }

}  // namespace lpacket
