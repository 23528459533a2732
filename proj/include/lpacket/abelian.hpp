#pragma once

#include <functional>
#include <map>
#include <numeric>

#include "lpacket/smith.hpp"

namespace lpacket {

// Finite abelian group in invariant-factor form: factors f1 | f2 | ... , all >= 2.
// An element is its vector of residues, entry i reduced mod factors[i].
struct FinAbGroup {
    std::vector<Int> factors;

    FinAbGroup() = default;
    explicit FinAbGroup(std::vector<Int> f) : factors(std::move(f)) {
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (factors[i] < 2) throw std::invalid_argument("FinAbGroup: factor < 2");
            if (i + 1 < factors.size() && !divides(factors[i], factors[i + 1]))
                throw std::invalid_argument("FinAbGroup: factors not a divisibility chain");
        }
    }

    std::size_t ngens() const { return factors.size(); }

    Int order() const {
        Int o = 1;
        for (const auto& f : factors) o *= f;
        return o;
    }

    bool is_trivial() const { return factors.empty(); }

    Vec zero() const { return Vec(factors.size(), 0); }

    Vec reduce(Vec v) const {
        if (v.size() != factors.size()) throw std::invalid_argument("FinAbGroup: element size");
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = mod_floor(v[i], factors[i]);
        return v;
    }

    Vec add(const Vec& x, const Vec& y) const {
        Vec r(factors.size());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = mod_floor(x[i] + y[i], factors[i]);
        return r;
    }

    Vec neg(const Vec& x) const {
        Vec r(factors.size());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = mod_floor(-x[i], factors[i]);
        return r;
    }

    Vec scale(const Int& k, const Vec& x) const {
        Vec r(factors.size());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = mod_floor(k * x[i], factors[i]);
        return r;
    }

    bool is_zero(const Vec& x) const {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (mod_floor(x[i], factors[i]) != 0) return false;
        return true;
    }

    Int element_order(const Vec& x) const {
        Int o = 1;
        for (std::size_t i = 0; i < x.size(); ++i) {
            Int r = mod_floor(x[i], factors[i]);
            if (r == 0) continue;
            o = lcm(o, factors[i] / gcd(factors[i], r));
        }
        return o;
    }

    // Entire element list, mixed-radix order.  Guarded: only for small groups.
    std::vector<Vec> elements(const Int& limit = Int(1 << 20)) const {
        if (order() > limit) throw std::runtime_error("FinAbGroup: enumeration too large");
        std::vector<Vec> out;
        Vec cur = zero();
        out.push_back(cur);
        for (Int c = 1; c < order(); ++c) {
            std::size_t i = factors.size();
            while (i > 0) {
                --i;
                cur[i] += 1;
                if (cur[i] < factors[i]) break;
                cur[i] = 0;
            }
            out.push_back(cur);
        }
        return out;
    }

    std::string str() const {
        if (factors.empty()) return "1";
        std::string s;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) s += " x ";
            s += "Z/" + factors[i].get_str();
        }
        return s;
    }
};

// Pontryagin dual: same invariant factors; a character chi pairs with a as
// sum_i a_i chi_i / f_i in Q/Z.
struct DualGroup {
    FinAbGroup group;  // the dual, canonically isomorphic presentation

    Rat pair(const Vec& a, const Vec& chi) const {
        if (a.size() != group.factors.size() || chi.size() != group.factors.size())
            throw std::invalid_argument("DualGroup: pairing size");
        Rat s = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
            s += make_rat(a[i] * chi[i], group.factors[i]);
        return mod_one(s);
    }
};

inline DualGroup dual_group(const FinAbGroup& g) { return DualGroup{g}; }

// Homomorphism between finite abelian groups, stored via generator images.
struct GroupHom {
    FinAbGroup domain, codomain;
    std::vector<Vec> images;  // images[i] = image of the i-th canonical generator

    GroupHom() = default;
    GroupHom(FinAbGroup dom, FinAbGroup cod, std::vector<Vec> img)
        : domain(std::move(dom)), codomain(std::move(cod)), images(std::move(img)) {
        if (images.size() != domain.ngens())
            throw std::invalid_argument("GroupHom: generator image count");
        for (auto& v : images) v = codomain.reduce(v);
    }

    static GroupHom identity(const FinAbGroup& g) {
        std::vector<Vec> img;
        for (std::size_t i = 0; i < g.ngens(); ++i) {
            Vec e = g.zero();
            e[i] = 1;
            img.push_back(e);
        }
        return GroupHom(g, g, img);
    }

    // Generator orders must be respected.
    bool well_defined() const {
        for (std::size_t i = 0; i < images.size(); ++i)
            if (!codomain.is_zero(codomain.scale(domain.factors[i], images[i])))
                return false;
        return true;
    }

    Vec apply(const Vec& x) const {
        Vec r = codomain.zero();
        for (std::size_t i = 0; i < images.size(); ++i)
            r = codomain.add(r, codomain.scale(x[i], images[i]));
        return r;
    }

    GroupHom compose_after(const GroupHom& first) const {
        // this o first
        std::vector<Vec> img;
        for (const auto& v : first.images) img.push_back(apply(v));
        return GroupHom(first.domain, codomain, img);
    }

    // Kernel as a finite abelian group, computed through the lattice of
    // integral solutions of x * IMG = 0 mod codomain factors.
    FinAbGroup kernel() const;
    Int kernel_order() const { return kernel().order(); }
    bool is_injective() const { return kernel_order() == 1; }
    Int image_order() const { return domain.order() / kernel_order(); }
    bool is_surjective() const { return image_order() == codomain.order(); }
    bool is_isomorphism() const {
        return domain.order() == codomain.order() && is_injective();
    }

    // Inverse of an isomorphism, solved generator by generator.
    GroupHom inverse() const;
};

namespace detail {

// Quotient structure of Z^k / rowspan(C); diagonal of the SNF drives both
// the invariant factors and the free rank.
struct ZQuotient {
    std::vector<Int> diag;  // full diagonal padded with zeros up to k
    IntMatrix V, Vinv;
    std::vector<std::size_t> torsion_idx, free_idx;
    FinAbGroup torsion;
    std::size_t free_rank = 0;

    static ZQuotient from_relations(std::size_t k, const IntMatrix& C) {
        if (C.cols != k) throw std::invalid_argument("ZQuotient: relation width");
        ZQuotient q;
        SmithDecomposition s = snf(C);
        q.V = s.V;
        q.Vinv = inverse_unimodular(s.V);
        q.diag.assign(k, 0);
        std::size_t n = std::min(C.rows, C.cols);
        for (std::size_t i = 0; i < n; ++i) q.diag[i] = s.D(i, i);
        std::vector<Int> fac;
        for (std::size_t i = 0; i < k; ++i) {
            if (q.diag[i] > 1) {
                q.torsion_idx.push_back(i);
                fac.push_back(q.diag[i]);
            } else if (q.diag[i] == 0) {
                q.free_idx.push_back(i);
            }
        }
        q.torsion = FinAbGroup(fac);
        q.free_rank = q.free_idx.size();
        return q;
    }

    // coordinates c (row) -> (torsion residues, free integers)
    std::pair<Vec, Vec> project(const Vec& c) const {
        Vec cp(diag.size(), 0);
        for (std::size_t j = 0; j < diag.size(); ++j)
            for (std::size_t i = 0; i < diag.size(); ++i) cp[j] += c[i] * V(i, j);
        Vec t, f;
        for (std::size_t i : torsion_idx) t.push_back(mod_floor(cp[i], diag[i]));
        for (std::size_t i : free_idx) f.push_back(cp[i]);
        return {t, f};
    }

    // A coordinate-row representative of a torsion element.
    Vec representative(const Vec& t) const {
        if (t.size() != torsion_idx.size()) throw std::invalid_argument("ZQuotient: rep size");
        Vec cp(diag.size(), 0);
        for (std::size_t i = 0; i < t.size(); ++i) cp[torsion_idx[i]] = t[i];
        Vec c(diag.size(), 0);
        for (std::size_t j = 0; j < diag.size(); ++j)
            for (std::size_t i = 0; i < diag.size(); ++i) c[j] += cp[i] * Vinv(i, j);
        return c;
    }
};

}  // namespace detail

inline FinAbGroup GroupHom::kernel() const {
    std::size_t k = domain.ngens(), m = codomain.ngens();
    // Solutions x of x*IMG = y*diag(codomain): left kernel of the stack.
    IntMatrix stack(k + m, m);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < m; ++j) stack(i, j) = images[i][j];
    for (std::size_t j = 0; j < m; ++j) stack(k + j, j) = -codomain.factors[j];
    std::vector<Vec> zk = left_kernel(stack);
    std::vector<Vec> xs;
    for (const auto& z : zk) xs.push_back(Vec(z.begin(), z.begin() + k));
    // Kernel subgroup = K / diag(domain) Z^k where K is generated by xs
    // together with diag(domain) itself.
    IntMatrix gens(xs.size() + k, k);
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < k; ++j) gens(i, j) = xs[i][j];
    for (std::size_t j = 0; j < k; ++j) gens(xs.size() + j, j) = domain.factors[j];
    // Reduce gens to a basis of K, then present K / diag(domain).
    SmithDecomposition sk = snf(gens);
    std::size_t r = sk.rank();
    // Basis rows of K: first r rows of D*Vinv = U*gens.
    IntMatrix ug = sk.U * gens;
    IntMatrix kbasis(r, k);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < k; ++j) kbasis(i, j) = ug(i, j);
    // Coordinates of diag(domain) rows in kbasis.
    QMatrix kb_t(k, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < k; ++j) kb_t(j, i) = Rat(kbasis(i, j));
    IntMatrix rel(k, r);
    for (std::size_t j = 0; j < k; ++j) {
        QVec rhs(k, Rat(0));
        rhs[j] = Rat(domain.factors[j]);
        auto sol = solve(kb_t, rhs);
        if (!sol) throw std::logic_error("GroupHom::kernel: relation outside kernel lattice");
        for (std::size_t i = 0; i < r; ++i) {
            Rat x = (*sol)[i];
            x.canonicalize();
            if (x.get_den() != 1) throw std::logic_error("GroupHom::kernel: non-integral coords");
            rel(j, i) = x.get_num();
        }
    }
    auto zq = detail::ZQuotient::from_relations(r, rel);
    if (zq.free_rank != 0) throw std::logic_error("GroupHom::kernel: unexpected free rank");
    return zq.torsion;
}

inline GroupHom GroupHom::inverse() const {
    if (!is_isomorphism()) throw std::invalid_argument("GroupHom::inverse: not an isomorphism");
    std::size_t k = domain.ngens(), m = codomain.ngens();
    // Solve x*IMG = e_j - y*diag(cod) for each codomain generator.
    IntMatrix stack(k + m, m);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < m; ++j) stack(i, j) = images[i][j];
    for (std::size_t j = 0; j < m; ++j) stack(k + j, j) = codomain.factors[j];
    std::vector<Vec> img;
    for (std::size_t j = 0; j < m; ++j) {
        Vec t(m, 0);
        t[j] = 1;
        auto z = solve_left(stack, t);
        if (!z) throw std::logic_error("GroupHom::inverse: generator not in image");
        img.push_back(domain.reduce(Vec(z->begin(), z->begin() + k)));
    }
    return GroupHom(codomain, domain, img);
}

}  // namespace lpacket
