#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpacket {

using Int = mpz_class;
using Rat = mpq_class;

inline Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

// g = p*a + q*b
inline Int gcdext(const Int& a, const Int& b, Int& p, Int& q) {
    Int g;
    mpz_gcdext(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

// Floor division and the matching nonnegative remainder (m > 0).
inline Int floordiv(const Int& a, const Int& m) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return q;
}

inline Int mod_floor(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline bool divides(const Int& d, const Int& a) {
    if (d == 0) return a == 0;
    return mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t()) != 0;
}

// Two-argument Rat construction requires canonicalization before any use.
inline Rat make_rat(const Int& num, const Int& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Reduce a rational into [0,1).
inline Rat mod_one(const Rat& x) {
    Rat y = x;
    y.canonicalize();
    Int fl = floordiv(y.get_num(), y.get_den());
    y -= Rat(fl);
    y.canonicalize();
    return y;
}

inline bool is_integral(const Rat& x) {
    Rat y = x;
    y.canonicalize();
    return y.get_den() == 1;
}

using Vec = std::vector<Int>;
using QVec = std::vector<Rat>;

inline QVec to_qvec(const Vec& v) {
    QVec q(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) q[i] = Rat(v[i]);
    return q;
}

inline Rat dot(const QVec& a, const QVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Int dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Rat dot(const Vec& a, const QVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += Rat(a[i]) * b[i];
    return s;
}

// Vector of rationals over one positive denominator, fully reduced.
// This is the exchange format for torus points, lambda, J-lattice bases.
struct RationalVector {
    Vec num;
    Int den = 1;

    RationalVector() = default;
    explicit RationalVector(std::size_t n) : num(n, 0), den(1) {}
    RationalVector(Vec n, Int d) : num(std::move(n)), den(std::move(d)) { normalize(); }

    static RationalVector from_qvec(const QVec& q) {
        RationalVector r;
        r.den = 1;
        for (const auto& x : q) r.den = lcm(r.den, Rat(x).get_den());
        r.num.resize(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) {
            Rat y = q[i] * Rat(r.den);
            y.canonicalize();
            r.num[i] = y.get_num();
        }
        r.normalize();
        return r;
    }

    QVec to_qvec() const {
        QVec q(num.size());
        for (std::size_t i = 0; i < num.size(); ++i) {
            q[i] = make_rat(num[i], den);
        }
        return q;
    }

    std::size_t size() const { return num.size(); }

    void normalize() {
        if (den == 0) throw std::invalid_argument("RationalVector: zero denominator");
        if (den < 0) {
            den = -den;
            for (auto& x : num) x = -x;
        }
        Int g = den;
        for (const auto& x : num) g = gcd(g, x);
        if (g > 1) {
            den /= g;
            for (auto& x : num) x /= g;
        }
    }

    bool operator==(const RationalVector& o) const {
        if (num.size() != o.num.size()) return false;
        for (std::size_t i = 0; i < num.size(); ++i)
            if (num[i] * o.den != o.num[i] * den) return false;
        return true;
    }

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < num.size(); ++i) {
            if (i) s += ",";
            s += num[i].get_str();
        }
        s += ")";
        if (den != 1) s += "/" + den.get_str();
        return s;
    }
};

}  // namespace lpacket
