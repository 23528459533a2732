#pragma once

#include <memory>
#include <random>

#include "lpacket/packet.hpp"

namespace lpacket {

// Deterministic seeded sampling used by the property suites.  Core
// computations never consume randomness.
struct Sampler {
    std::mt19937_64 rng;

    explicit Sampler(std::uint64_t seed) : rng(seed) {}

    long pick(long lo, long hi) {
        std::uniform_int_distribution<long> d(lo, hi);
        return d(rng);
    }

    template <typename T>
    const T& choose(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(pick(0, static_cast<long>(v.size()) - 1))];
    }
};

inline IntMatrix random_unimodular(Sampler& s, std::size_t n) {
    IntMatrix u = IntMatrix::identity(n);
    long ops = s.pick(2, 8);
    for (long o = 0; o < ops; ++o) {
        std::size_t i = static_cast<std::size_t>(s.pick(0, static_cast<long>(n) - 1));
        std::size_t j = static_cast<std::size_t>(s.pick(0, static_cast<long>(n) - 1));
        switch (s.pick(0, 2)) {
            case 0:
                if (i != j) detail::add_row(u, i, j, Int(s.pick(-2, 2)));
                break;
            case 1:
                if (i != j) detail::swap_rows(u, i, j);
                break;
            default:
                detail::negate_row(u, i);
                break;
        }
    }
    return u;
}

// Random lattice involution: a conjugated block matrix of +1, -1 and swaps.
inline IntMatrix random_involution(Sampler& s, std::size_t n) {
    IntMatrix b(n, n);
    std::size_t i = 0;
    while (i < n) {
        long kind = s.pick(0, 2);
        if (kind == 2 && i + 1 < n) {
            b(i, i + 1) = 1;
            b(i + 1, i) = 1;
            i += 2;
        } else {
            b(i, i) = (kind == 0) ? 1 : -1;
            i += 1;
        }
    }
    IntMatrix u = random_unimodular(s, n);
    return u * b * inverse_unimodular(u);
}

// sigma-stable overlattice of Z^n with index at most max_index.
inline Lattice random_overlattice(Sampler& s, const IntMatrix& sigma, const Int& max_index) {
    std::size_t n = sigma.rows;
    Lattice x = Lattice::standard(n);
    for (int attempt = 0; attempt < 60; ++attempt) {
        std::vector<RationalVector> gens = x.basis_vectors();
        long count = s.pick(1, 2);
        Int den(s.pick(2, 6));
        for (long c = 0; c < count; ++c) {
            Vec v(n);
            for (std::size_t k = 0; k < n; ++k) v[k] = Int(s.pick(-3, 3));
            RationalVector rv(v, den);
            gens.push_back(rv);
            gens.emplace_back(sigma.apply(rv.num), rv.den);
        }
        Lattice l = Lattice::from_generators(gens, n);
        if (l.rank() != n) continue;
        Int idx = LatticeQuotient::make(l, x).group.order();
        if (idx >= 1 && idx <= max_index) return l;
    }
    return x;
}

// Catalog of small based root data in X/Y coordinates.
struct DatumSpec {
    std::string name;
    std::size_t rank;
    std::vector<Vec> roots, coroots;
};

inline std::vector<DatumSpec> datum_catalog() {
    return {
        {"A1_sc_dual", 1, {{2}}, {{1}}},
        {"A1_adj_dual", 1, {{1}}, {{2}}},
        {"A1xA1", 2, {{2, 0}, {0, 1}}, {{1, 0}, {0, 2}}},
        {"A1_torus", 2, {{2, 0}}, {{1, 0}}},
        {"A2_sc_dual", 2, {{2, -1}, {-1, 2}}, {{1, 0}, {0, 1}}},
        {"A2_adj_dual", 2, {{1, 0}, {0, 1}}, {{2, -1}, {-1, 2}}},
        {"so5_dual", 2, {{1, -1}, {0, 1}}, {{1, -1}, {0, 2}}},
        {"sp4_dual", 2, {{1, -1}, {0, 2}}, {{1, -1}, {0, 1}}},
        {"A1xA1xA1", 3, {{2, 0, 0}, {0, 2, 0}, {0, 0, 1}}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 2}}},
        {"A2xA1", 3, {{2, -1, 0}, {-1, 2, 0}, {0, 0, 1}}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 2}}},
        {"so5xA1", 3, {{1, -1, 0}, {0, 1, 0}, {0, 0, 2}}, {{1, -1, 0}, {0, 2, 0}, {0, 0, 1}}},
        {"sp4xtorus", 4,
         {{1, -1, 0, 0}, {0, 2, 0, 0}},
         {{1, -1, 0, 0}, {0, 1, 0, 0}}},
        {"so7_dual", 3,
         {{1, -1, 0}, {0, 1, -1}, {0, 0, 1}},
         {{1, -1, 0}, {0, 1, -1}, {0, 0, 2}}},
        {"so5_dual_b", 2, {{1, -1}, {0, 1}}, {{1, -1}, {0, 2}}},
    };
}

// Random involution of the datum: +-(Weyl word), filtered to involutions.
inline IntMatrix random_datum_involution(Sampler& s, const BasedRootDatum& d) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        IntMatrix w = IntMatrix::identity(d.rank);
        long len = s.pick(0, 3);
        for (long i = 0; i < len; ++i) {
            std::size_t r = static_cast<std::size_t>(s.pick(0, static_cast<long>(d.nroots()) - 1));
            w = d.reflection_on_x(r) * w;
        }
        if (s.pick(0, 1)) w = -w;
        if (!(w * w).is_identity()) continue;
        bool perm = true;
        for (std::size_t i = 0; i < d.nroots() && perm; ++i)
            if (!d.is_root(w.apply(d.roots[i]))) perm = false;
        if (perm) return w;
    }
    return IntMatrix::identity(d.rank);
}

// Linear grading from a vector pairing integrally with every root; this is
// the shape of a grading coming from an honest group element.
inline std::set<std::size_t> random_linear_grading(Sampler& s, const BasedRootDatum& d,
                                                   const InvolutionState& shell) {
    std::size_t k = d.nsimple();
    QVec v(d.rank, Rat(0));
    if (k > 0) {
        QMatrix m(k, d.rank);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < d.rank; ++j) m(i, j) = Rat(d.simple_roots[i][j]);
        for (std::size_t i = 0; i < k; ++i) {
            QVec e(k, Rat(0));
            e[i] = Rat(s.pick(0, 1));
            auto w = solve(m, e);
            if (!w) continue;
            for (std::size_t j = 0; j < d.rank; ++j) v[j] += (*w)[j];
        }
    }
    std::set<std::size_t> nonc;
    for (std::size_t i = 0; i < d.nroots(); ++i) {
        if (shell.classify(i) != RootKind::imaginary) continue;
        Rat p = dot(d.roots[i], v);
        p.canonicalize();
        if (p.get_den() != 1) throw std::logic_error("random_linear_grading: non-integral pairing");
        if (mod_floor(p.get_num(), 2) == 1) nonc.insert(i);
    }
    return nonc;
}

// Singular lambda: a random rational vector killed by a random subset of the
// simple roots.
inline RationalVector random_singular_lambda(Sampler& s, const BasedRootDatum& d) {
    if (s.pick(0, 2) == 0) return RationalVector(d.rank);  // fully singular
    std::vector<Vec> constraints;
    for (std::size_t i = 0; i < d.nsimple(); ++i)
        if (s.pick(0, 1)) constraints.push_back(d.simple_roots[i]);
    // kernel of the constraint rows
    IntMatrix c = IntMatrix::from_rows(constraints, d.rank);
    IntMatrix ct = c.transpose();  // rows: ambient, cols: constraints
    std::vector<Vec> basis = left_kernel(ct);
    QVec lam(d.rank, Rat(0));
    for (const auto& b : basis) {
        Rat coeff = make_rat(Int(s.pick(-2, 2)), Int(s.pick(1, 2)));
        for (std::size_t j = 0; j < d.rank; ++j) lam[j] += coeff * Rat(b[j]);
    }
    return RationalVector::from_qvec(lam);
}

// Maximal strongly orthogonal set of noncompact imaginary lambda-singular
// roots, greedy in a sampled order.
inline std::vector<std::size_t> maximal_delta_phi(Sampler* s, const BasedRootDatum& d,
                                                  const InvolutionState& state,
                                                  const RationalVector& lambda) {
    QVec lam = lambda.to_qvec();
    std::vector<std::size_t> candidates;
    std::set<std::size_t> used;
    for (std::size_t i = 0; i < d.nroots(); ++i) {
        if (used.count(d.negative_of(i))) continue;
        if (state.classify(i) != RootKind::imaginary || !state.is_noncompact(i)) continue;
        if (dot(d.roots[i], lam) != 0) continue;
        candidates.push_back(i);
        used.insert(i);
    }
    if (s)
        std::shuffle(candidates.begin(), candidates.end(), s->rng);
    std::vector<std::size_t> out;
    for (std::size_t c : candidates) {
        bool ok = true;
        for (std::size_t o : out) {
            if (dot(d.roots[c], d.coroots[o]) != 0) {
                ok = false;
                break;
            }
            Vec sum(d.rank), diff(d.rank);
            for (std::size_t k = 0; k < d.rank; ++k) {
                sum[k] = d.roots[c][k] + d.roots[o][k];
                diff[k] = d.roots[c][k] - d.roots[o][k];
            }
            if (d.is_root(sum) || d.is_root(diff)) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Central sigma-stable overlattice for the datum (coroot-integral).
inline Lattice random_central_overlattice(Sampler& s, const BasedRootDatum& d,
                                          const IntMatrix& sigma) {
    Lattice x = Lattice::standard(d.rank);
    for (int attempt = 0; attempt < 40; ++attempt) {
        Vec v(d.rank);
        Int den(s.pick(2, 4));
        for (std::size_t k = 0; k < d.rank; ++k) v[k] = Int(s.pick(-2, 2));
        RationalVector rv(v, den);
        bool central = true;
        for (std::size_t i = 0; i < d.nroots() && central; ++i)
            if (!is_integral(dot(d.coroots[i], rv.to_qvec()))) central = false;
        if (!central) continue;
        std::vector<RationalVector> gens = x.basis_vectors();
        gens.push_back(rv);
        gens.emplace_back(sigma.apply(rv.num), rv.den);
        Lattice l = Lattice::from_generators(gens, d.rank);
        if (l.rank() != d.rank) continue;
        Int idx = LatticeQuotient::make(l, x).group.order();
        if (idx > 1 && idx <= 16) return l;
    }
    return x;
}

struct SampledParameter {
    BasedRootDatum datum;
    DualParameter p;  // p.datum points into this->datum
};

// A full random parameter with a paper-realizable shape.  The initial
// involution is trivial, so y = exp(pi i (lambda + nu)) with nu integral
// realizes the data: the grading of a root is <alpha, nu> mod 2, and
// delta_phi is a strongly orthogonal set of singular noncompact roots.
//
// Not every such set belongs to a tempered parameter.  Two rejection rules
// keep the sample inside the family the comparison theorem covers: the set
// must be maximal (a surviving strongly orthogonal noncompact singular root
// would belong to the attached system), and the transform may not create
// real roots beyond the transformed set itself (extra real roots mean the
// parameter fails to be discrete modulo center on its Levi).
inline std::shared_ptr<SampledParameter> random_parameter(Sampler& s) {
    auto catalog = datum_catalog();
    for (int attempt = 0; attempt < 2000; ++attempt) {
        const DatumSpec& spec = s.choose(catalog);
        auto sp = std::make_shared<SampledParameter>();
        sp->datum = BasedRootDatum(spec.rank, spec.roots, spec.coroots);
        const BasedRootDatum& d = sp->datum;
        IntMatrix theta = IntMatrix::identity(d.rank);
        Vec nu(d.rank);
        for (auto& x : nu) x = Int(s.pick(0, 1));
        std::set<std::size_t> nonc;
        for (std::size_t i = 0; i < d.nroots(); ++i)
            if (mod_floor(dot(d.roots[i], nu), 2) == 1) nonc.insert(i);
        InvolutionState state(d, theta, nonc);
        RationalVector lambda = random_singular_lambda(s, d);
        Lattice j = random_central_overlattice(s, d, theta);
        for (int dtry = 0; dtry < 10; ++dtry) {
            std::vector<std::size_t> dphi = maximal_delta_phi(&s, d, state, lambda);
            std::shared_ptr<SampledParameter> cand = std::make_shared<SampledParameter>(*sp);
            try {
                cand->p = validate_parameter(cand->datum, InvolutionState(cand->datum, theta, nonc),
                                             lambda, dphi, j, IntMatrix::identity(d.rank));
                cand->p.datum = &cand->datum;
            } catch (const ParameterError&) {
                continue;
            }
            SingularTransform sh = singular_transform(cand->p);
            bool aligned = true;
            for (std::size_t i = 0; i < d.nroots() && aligned; ++i) {
                if (sh.state.classify(i) != RootKind::real) continue;
                bool in_dphi = false;
                for (std::size_t a : dphi)
                    if (i == a || i == d.negative_of(a)) in_dphi = true;
                if (!in_dphi) aligned = false;
            }
            if (aligned) return cand;
        }
    }
    throw std::runtime_error("random_parameter: sampling failed");
}

}  // namespace lpacket
