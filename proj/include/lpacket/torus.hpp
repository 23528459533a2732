#pragma once

#include "lpacket/lattice.hpp"

namespace lpacket {

// Finite-order point of a torus: exp(2 pi i v) with v rational mod Z^n.
struct TorusPoint {
    RationalVector v;

    TorusPoint() = default;
    explicit TorusPoint(RationalVector w) : v(std::move(w)) { normalize(); }

    void normalize() {
        for (auto& x : v.num) x = mod_floor(x, v.den);
        v.normalize();
    }

    std::size_t rank() const { return v.size(); }

    static TorusPoint zero(std::size_t n) { return TorusPoint(RationalVector(n)); }

    TorusPoint add(const TorusPoint& o) const {
        Int d = lcm(v.den, o.v.den);
        Vec n(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            n[i] = v.num[i] * (d / v.den) + o.v.num[i] * (d / o.v.den);
        return TorusPoint(RationalVector(n, d));
    }

    TorusPoint neg() const {
        Vec n(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) n[i] = -v.num[i];
        return TorusPoint(RationalVector(n, v.den));
    }

    bool is_zero() const {
        for (const auto& x : v.num)
            if (x != 0) return false;
        return true;
    }

    Int order() const { return v.den; }

    bool operator==(const TorusPoint& o) const { return v == o.v; }
    bool operator<(const TorusPoint& o) const {
        if (v.den != o.v.den) return v.den < o.v.den;
        return v.num < o.v.num;
    }
};

inline TorusPoint point_mod_lattice(const RationalVector& v) { return TorusPoint(v); }

// Torus with Galois involution sigma acting on the cocharacter lattice Z^n.
struct TorusWithInvolution {
    std::size_t rank = 0;
    IntMatrix sigma;

    TorusWithInvolution() = default;
    TorusWithInvolution(std::size_t n, IntMatrix s) : rank(n), sigma(std::move(s)) {
        if (sigma.rows != rank || sigma.cols != rank)
            throw std::invalid_argument("TorusWithInvolution: sigma shape");
        if (!(sigma * sigma).is_identity())
            throw std::invalid_argument("TorusWithInvolution: sigma not an involution");
    }

    Lattice cochar() const { return Lattice::standard(rank); }
};

// sigma-stable overlattice X <= L <= X tensor Q modelling the central
// subgroup J = L/X.
struct OverlatticeJ {
    Lattice l;

    OverlatticeJ() = default;
    OverlatticeJ(const TorusWithInvolution& t, Lattice lat) : l(std::move(lat)) {
        if (l.ambient != t.rank) throw std::invalid_argument("OverlatticeJ: ambient");
        if (l.rank() != t.rank) throw std::invalid_argument("OverlatticeJ: not full rank");
        if (!l.contains_lattice(Lattice::standard(t.rank)))
            throw std::invalid_argument("OverlatticeJ: does not contain the cocharacter lattice");
        if (!l.stable_under(t.sigma))
            throw std::invalid_argument("OverlatticeJ: not sigma-stable");
    }

    static OverlatticeJ pure(const TorusWithInvolution& t) {
        return OverlatticeJ(t, Lattice::standard(t.rank));
    }

    Int index(const TorusWithInvolution& t) const {
        return LatticeQuotient::make(l, Lattice::standard(t.rank)).group.order();
    }
};

// X^{-sigma} / (1-sigma) X
inline LatticeQuotient pure_real_forms(const TorusWithInvolution& t) {
    Lattice anti = eigenlattice(t.cochar(), t.sigma, -1);
    Lattice norm = one_minus_image(t.sigma, t.cochar());
    return LatticeQuotient::make(anti, norm);
}

// L^{-sigma} / (1-sigma) X
inline LatticeQuotient type_J_forms(const TorusWithInvolution& t, const OverlatticeJ& j) {
    Lattice anti = eigenlattice(j.l, t.sigma, -1);
    Lattice norm = one_minus_image(t.sigma, t.cochar());
    return LatticeQuotient::make(anti, norm);
}

// pi0(S^theta) = M^{-theta,sat} / (1-theta) M together with the point map
// exp(2 pi i v) -> class of (theta - 1) v.
struct Pi0Fixed {
    LatticeQuotient quo;
    IntMatrix theta;

    Vec point_class(const TorusPoint& p) const {
        QVec w = theta.apply(p.v.to_qvec());
        QVec pv = p.v.to_qvec();
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= pv[i];
        RationalVector x = RationalVector::from_qvec(w);
        if (!quo.big.contains(x))
            throw std::invalid_argument("pi0: point not in the fixed subgroup");
        return quo.project(x);
    }
};

inline Pi0Fixed pi0_fixed(const TorusWithInvolution& s) {
    Pi0Fixed p;
    p.theta = s.sigma;
    Lattice anti = eigenlattice(s.cochar(), s.sigma, -1);
    Lattice norm = one_minus_image(s.sigma, s.cochar());
    p.quo = LatticeQuotient::make(anti, norm);
    return p;
}

// Class of a strong real form: lambda1 with sigma lambda1 = -lambda1, taken
// mod (1-sigma)X.  Classes live in an infinite group, so equality is decided
// by lattice membership and normal forms are coordinates against (1-sigma)X.
struct StrongFormClass {
    RationalVector lambda1;       // the input representative
    RationalVector normal_form;   // canonical representative
    enum class Type { pure, type_j, general } type = Type::general;
};

inline StrongFormClass strong_form_class(const TorusWithInvolution& t,
                                         const RationalVector& lambda1,
                                         const OverlatticeJ* j = nullptr) {
    QVec img = t.sigma.apply(lambda1.to_qvec());
    QVec l = lambda1.to_qvec();
    for (std::size_t i = 0; i < l.size(); ++i)
        if (img[i] != -l[i])
            throw std::invalid_argument("strong_form_class: sigma lambda1 != -lambda1");
    Lattice norm = one_minus_image(t.sigma, t.cochar());
    // Canonical representative: reduce coordinates against (1-sigma)X to [0,1).
    auto c = norm.coords(lambda1);
    if (!c) throw std::logic_error("strong_form_class: representative outside the span");
    QVec frac(c->size());
    for (std::size_t i = 0; i < c->size(); ++i) frac[i] = mod_one((*c)[i]);
    QVec nf(t.rank, Rat(0));
    for (std::size_t i = 0; i < frac.size(); ++i)
        for (std::size_t k = 0; k < t.rank; ++k)
            nf[k] += frac[i] * make_rat(norm.int_basis(i, k), norm.scale);
    StrongFormClass out;
    out.lambda1 = lambda1;
    out.normal_form = RationalVector::from_qvec(nf);
    if (Lattice::standard(t.rank).contains(lambda1))
        out.type = StrongFormClass::Type::pure;
    else if (j && j->l.contains(lambda1))
        out.type = StrongFormClass::Type::type_j;
    return out;
}

inline bool same_strong_form_class(const TorusWithInvolution& t, const RationalVector& a,
                                   const RationalVector& b) {
    Lattice norm = one_minus_image(t.sigma, t.cochar());
    QVec d = a.to_qvec();
    QVec bb = b.to_qvec();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= bb[i];
    return norm.contains(RationalVector::from_qvec(d));
}

// Component group data of the preimage of the fixed subgroup in the
// hat-J cover of the dual torus.
//
//   qj  = L^{-sigma}/(1-sigma)X            (strong real forms of type J)
//   pi0 = Y^{-theta,sat}/(1-theta)L^*      (component group of the cover)
//
// and the pairing <x, lambda>/2 in Q/Z between them is perfect; component
// elements are handed out as characters of qj through that pairing.
struct CoverComponentGroup {
    LatticeQuotient qj;
    LatticeQuotient pi0;
    IntMatrix theta_on_dual;  // transpose of sigma

    Rat tn_pair(const RationalVector& component_rep, const RationalVector& strong_rep) const {
        return mod_one(dot(component_rep.to_qvec(), strong_rep.to_qvec()) / 2);
    }

    Rat pair_classes(const Vec& component_elt, const Vec& strong_elt) const {
        return tn_pair(pi0.representative(component_elt), qj.representative(strong_elt));
    }
};

inline CoverComponentGroup cover_component_group(const TorusWithInvolution& t,
                                                 const IntMatrix& theta_on_dual,
                                                 const OverlatticeJ& j) {
    if (!(theta_on_dual.transpose() == t.sigma))
        throw std::invalid_argument("cover_component_group: sigma is not the transpose of theta");
    CoverComponentGroup c;
    c.theta_on_dual = theta_on_dual;
    c.qj = type_J_forms(t, j);
    Lattice y = Lattice::standard(t.rank);
    Lattice lstar = j.l.dual();
    Lattice anti = eigenlattice(y, theta_on_dual, -1);
    Lattice norm = one_minus_image(theta_on_dual, lstar);
    c.pi0 = LatticeQuotient::make(anti, norm);
    return c;
}

// ker(dual isogeny) = Y / L^*, abstractly Hom(J, C^x).
inline FinAbGroup dual_isogeny_kernel(const TorusWithInvolution& t, const OverlatticeJ& j) {
    Lattice y = Lattice::standard(t.rank);
    return LatticeQuotient::make(y, j.l.dual()).group;
}

// Evaluated cup-product point: (k! lambda1)(exp(pi i / k!)) = exp(pi i lambda1).
inline TorusPoint cup_product_value(const TorusWithInvolution& t, const OverlatticeJ& j,
                                    const RationalVector& lambda1, const Int& k) {
    Int jorder = j.index(t);
    if (k <= 0 || (jorder > 1 && !divides(jorder, k)))
        throw std::invalid_argument("cup_product_value: k not divisible by |J|");
    Lattice anti = eigenlattice(j.l, t.sigma, -1);
    if (!anti.contains(lambda1))
        throw std::invalid_argument("cup_product_value: lambda1 not in L^{-sigma}");
    Int kfact = 1;
    for (Int i = 2; i <= k; ++i) kfact *= i;
    // mu = k! * lambda1 is an honest cocharacter; evaluate it at exp(pi i / k!).
    QVec mu = lambda1.to_qvec();
    for (auto& x : mu) x *= Rat(kfact);
    for (auto& x : mu) {
        x.canonicalize();
        if (x.get_den() != 1)
            throw std::logic_error("cup_product_value: k! lambda1 not integral");
    }
    QVec val(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) val[i] = mu[i] * make_rat(Int(1), 2 * kfact);
    TorusPoint p(RationalVector::from_qvec(val));
    // The evaluation collapses to exp(pi i lambda1) independently of k.
    QVec half = lambda1.to_qvec();
    for (auto& x : half) x /= 2;
    TorusPoint direct(RationalVector::from_qvec(half));
    if (!(p == direct)) throw std::logic_error("cup_product_value: evaluation mismatch");
    return p;
}

// Certificate that torsion(L/(1-sigma)X) equals L^{-sigma}/(1-sigma)X via
// the inclusion-induced map.
struct TorsionAntifixedCertificate {
    bool holds = false;
    FinAbGroup torsion_side;
    FinAbGroup antifixed_side;
};

inline TorsionAntifixedCertificate torsion_equals_antifixed(const TorusWithInvolution& t,
                                                            const OverlatticeJ& j) {
    TorsionAntifixedCertificate cert;
    Lattice norm = one_minus_image(t.sigma, t.cochar());
    LatticeQuotient full = LatticeQuotient::make(j.l, norm);
    LatticeQuotient anti = type_J_forms(t, j);
    cert.torsion_side = full.group;
    cert.antifixed_side = anti.group;
    if (cert.torsion_side.factors != cert.antifixed_side.factors) return cert;
    // Inclusion-induced map on generators must be a bijection onto the
    // torsion part.
    std::vector<Vec> images;
    for (const auto& rep : anti.torsion_generator_reps()) {
        auto [tors, free] = full.project_full(rep);
        for (const auto& f : free)
            if (f != 0) return cert;
        images.push_back(tors);
    }
    GroupHom inc(anti.group, full.group, images);
    if (!inc.well_defined() || !inc.is_isomorphism()) return cert;
    cert.holds = true;
    return cert;
}

}  // namespace lpacket
