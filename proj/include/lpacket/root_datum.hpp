#pragma once

#include <map>
#include <set>

#include "lpacket/torus.hpp"

namespace lpacket {

enum class RootKind { real, imaginary, complex_pair };

inline const char* kind_name(RootKind k) {
    switch (k) {
        case RootKind::real: return "real";
        case RootKind::imaginary: return "imaginary";
        default: return "complex";
    }
}

// Based root datum: roots live in the character lattice X (rows), coroots in
// the cocharacter lattice Y (rows); the pairing is the dot product.  The full
// root list is generated from the simple ones and sorted lexicographically,
// so root indices are stable across runs.
struct BasedRootDatum {
    std::size_t rank = 0;
    std::vector<Vec> simple_roots;
    std::vector<Vec> simple_coroots;
    std::vector<Vec> roots;
    std::vector<Vec> coroots;

    BasedRootDatum() = default;
    BasedRootDatum(std::size_t n, std::vector<Vec> sr, std::vector<Vec> sc)
        : rank(n), simple_roots(std::move(sr)), simple_coroots(std::move(sc)) {
        if (simple_roots.size() != simple_coroots.size())
            throw std::invalid_argument("BasedRootDatum: root/coroot count mismatch");
        for (const auto& r : simple_roots)
            if (r.size() != rank) throw std::invalid_argument("BasedRootDatum: root size");
        for (const auto& c : simple_coroots)
            if (c.size() != rank) throw std::invalid_argument("BasedRootDatum: coroot size");
        validate_cartan();
        generate();
    }

    std::size_t nroots() const { return roots.size(); }
    std::size_t nsimple() const { return simple_roots.size(); }

    Int pairing(const Vec& root, const Vec& coroot) const { return dot(root, coroot); }

    void validate_cartan() const {
        for (std::size_t i = 0; i < nsimple(); ++i) {
            if (dot(simple_roots[i], simple_coroots[i]) != 2)
                throw std::invalid_argument("BasedRootDatum: <a_i, a_i^> != 2");
            for (std::size_t j = 0; j < nsimple(); ++j) {
                if (i == j) continue;
                Int c = dot(simple_roots[i], simple_coroots[j]);
                if (c > 0 || c < -3)
                    throw std::invalid_argument("BasedRootDatum: Cartan entry out of range");
            }
        }
    }

    // Reflection in the root with the given index, acting on X.
    IntMatrix reflection_on_x(std::size_t idx) const {
        const Vec& a = roots.at(idx);
        const Vec& av = coroots.at(idx);
        IntMatrix s = IntMatrix::identity(rank);
        for (std::size_t i = 0; i < rank; ++i)
            for (std::size_t j = 0; j < rank; ++j) s(i, j) -= a[i] * av[j];
        return s;
    }

    // The same reflection on Y (the transpose).
    IntMatrix reflection_on_y(std::size_t idx) const { return reflection_on_x(idx).transpose(); }

    std::ptrdiff_t root_index(const Vec& r) const {
        auto it = std::lower_bound(roots.begin(), roots.end(), r);
        if (it == roots.end() || *it != r) return -1;
        return it - roots.begin();
    }

    bool is_root(const Vec& r) const { return root_index(r) >= 0; }

    std::size_t negative_of(std::size_t idx) const {
        Vec n = roots.at(idx);
        for (auto& x : n) x = -x;
        std::ptrdiff_t i = root_index(n);
        if (i < 0) throw std::logic_error("BasedRootDatum: missing negative root");
        return static_cast<std::size_t>(i);
    }

    // Largest k with root - k*other still a root (string reach downwards).
    Int string_down(std::size_t idx, std::size_t through) const {
        Int k = 0;
        Vec r = roots.at(idx);
        const Vec& a = roots.at(through);
        for (;;) {
            for (std::size_t i = 0; i < rank; ++i) r[i] -= a[i];
            if (!is_root(r)) break;
            ++k;
        }
        return k;
    }

  private:
    void generate() {
        std::set<Vec> seen(simple_roots.begin(), simple_roots.end());
        std::map<Vec, Vec> coroot_of;
        for (std::size_t i = 0; i < nsimple(); ++i) coroot_of[simple_roots[i]] = simple_coroots[i];
        std::vector<Vec> queue = simple_roots;
        while (!queue.empty()) {
            Vec r = queue.back();
            queue.pop_back();
            Vec cr = coroot_of[r];
            for (std::size_t i = 0; i < nsimple(); ++i) {
                Int c = dot(r, simple_coroots[i]);
                Vec nr(rank), ncr(rank);
                for (std::size_t k = 0; k < rank; ++k) nr[k] = r[k] - c * simple_roots[i][k];
                Int cc = dot(simple_roots[i], cr);
                for (std::size_t k = 0; k < rank; ++k) ncr[k] = cr[k] - cc * simple_coroots[i][k];
                if (!seen.count(nr)) {
                    seen.insert(nr);
                    coroot_of[nr] = ncr;
                    queue.push_back(nr);
                    if (seen.size() > 1000)
                        throw std::invalid_argument("BasedRootDatum: root system does not close");
                }
            }
            // also close under negation
            Vec neg = r, negc = cr;
            for (auto& x : neg) x = -x;
            for (auto& x : negc) x = -x;
            if (!seen.count(neg)) {
                seen.insert(neg);
                coroot_of[neg] = negc;
                queue.push_back(neg);
            }
        }
        roots.assign(seen.begin(), seen.end());
        std::sort(roots.begin(), roots.end());
        coroots.clear();
        for (const auto& r : roots) coroots.push_back(coroot_of[r]);
        for (std::size_t i = 0; i < roots.size(); ++i)
            if (dot(roots[i], coroots[i]) != 2)
                throw std::logic_error("BasedRootDatum: generated coroot pairing != 2");
    }
};

// Root subsystem selected by a predicate; returns sorted indices.
template <typename Pred>
std::vector<std::size_t> root_subsystem(const BasedRootDatum& datum, Pred&& pred) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < datum.nroots(); ++i)
        if (pred(i)) out.push_back(i);
    return out;
}

// Involution of the datum plus the noncompactness grading of its imaginary
// roots.  theta acts on X and is required to permute the root set; Cayley
// steps produce fresh states.
struct InvolutionState {
    const BasedRootDatum* datum = nullptr;
    IntMatrix theta;                 // action on X
    std::map<std::size_t, bool> noncompact;  // imaginary root index -> grading

    InvolutionState() = default;
    InvolutionState(const BasedRootDatum& d, IntMatrix th, const std::set<std::size_t>& noncompact_idx)
        : datum(&d), theta(std::move(th)) {
        if (theta.rows != d.rank || theta.cols != d.rank)
            throw std::invalid_argument("InvolutionState: theta shape");
        if (!(theta * theta).is_identity())
            throw std::invalid_argument("InvolutionState: theta not an involution");
        for (std::size_t i = 0; i < d.nroots(); ++i)
            if (!d.is_root(theta.apply(d.roots[i])))
                throw std::invalid_argument("InvolutionState: theta does not permute the roots");
        for (std::size_t i = 0; i < d.nroots(); ++i)
            if (classify(i) == RootKind::imaginary) noncompact[i] = false;
        for (std::size_t i : noncompact_idx) {
            if (classify(i) != RootKind::imaginary)
                throw std::invalid_argument("InvolutionState: noncompact index not imaginary");
            noncompact[i] = true;
            noncompact[d.negative_of(i)] = true;
        }
    }

    IntMatrix theta_on_y() const { return theta.transpose(); }

    RootKind classify(std::size_t idx) const {
        Vec img = theta.apply(datum->roots.at(idx));
        if (img == datum->roots[idx]) return RootKind::imaginary;
        Vec neg = img;
        for (auto& x : neg) x = -x;
        if (neg == datum->roots[idx]) return RootKind::real;
        return RootKind::complex_pair;
    }

    bool is_noncompact(std::size_t idx) const {
        auto it = noncompact.find(idx);
        if (it == noncompact.end())
            throw std::invalid_argument("InvolutionState: grading undefined (root not imaginary)");
        return it->second;
    }

    std::vector<std::size_t> imaginary_roots() const {
        return root_subsystem(*datum, [&](std::size_t i) { return classify(i) == RootKind::imaginary; });
    }

    std::vector<std::size_t> real_roots() const {
        return root_subsystem(*datum, [&](std::size_t i) { return classify(i) == RootKind::real; });
    }
};

struct CayleyStep {
    std::size_t root_index = 0;
    enum class Kind { imaginary_to_real, real_to_imaginary } kind = Kind::imaginary_to_real;
    TorusPoint alpha_minus_one_point;  // coroot/2 mod Y
};

// exp(pi i coroot) as a torus point; order divides 2.
inline TorusPoint alpha_minus_one(const BasedRootDatum& datum, std::size_t idx) {
    QVec half(datum.rank);
    for (std::size_t i = 0; i < datum.rank; ++i) half[i] = Rat(datum.coroots.at(idx)[i], 2);
    return TorusPoint(RationalVector::from_qvec(half));
}

namespace detail {

// Grading transfer onto the surviving imaginary roots of the new state.
// A surviving root is orthogonal to the transform root; its grading flips
// exactly when the string through the transform root has odd reach.
inline std::set<std::size_t> transfer_gradings(const InvolutionState& state,
                                               const InvolutionState& next_shell,
                                               std::size_t cayley_idx, bool from_imaginary) {
    std::set<std::size_t> nonc;
    const BasedRootDatum& d = *state.datum;
    for (std::size_t i = 0; i < d.nroots(); ++i) {
        if (next_shell.classify(i) != RootKind::imaginary) continue;
        if (i == cayley_idx || i == d.negative_of(cayley_idx)) continue;
        bool grading;
        if (state.classify(i) == RootKind::imaginary) {
            grading = state.is_noncompact(i);
            if (mod_floor(d.string_down(i, cayley_idx), 2) == 1) grading = !grading;
        } else {
            // A complex pair can fold to imaginary only under a real
            // transform; no grading data survives for it.
            if (from_imaginary)
                throw std::logic_error("transfer_gradings: complex root became imaginary");
            grading = false;
        }
        if (grading) nonc.insert(i);
    }
    return nonc;
}

}  // namespace detail

// Cayley transform through a noncompact imaginary root: theta -> s_alpha theta.
inline std::pair<InvolutionState, CayleyStep> cayley_imaginary(const InvolutionState& state,
                                                               std::size_t idx) {
    const BasedRootDatum& d = *state.datum;
    if (state.classify(idx) != RootKind::imaginary)
        throw std::invalid_argument("cayley_imaginary: root is not imaginary");
    if (!state.is_noncompact(idx))
        throw std::invalid_argument("cayley_imaginary: root is compact");
    IntMatrix theta2 = d.reflection_on_x(idx) * state.theta;
    InvolutionState shell(d, theta2, {});
    std::set<std::size_t> nonc = detail::transfer_gradings(state, shell, idx, true);
    InvolutionState next(d, theta2, nonc);
    CayleyStep step;
    step.root_index = idx;
    step.kind = CayleyStep::Kind::imaginary_to_real;
    step.alpha_minus_one_point = alpha_minus_one(d, idx);
    if (next.classify(idx) != RootKind::real)
        throw std::logic_error("cayley_imaginary: root did not become real");
    return {next, step};
}

// Inverse transform through a real root; the root comes back imaginary and
// noncompact.
inline std::pair<InvolutionState, CayleyStep> cayley_real(const InvolutionState& state,
                                                          std::size_t idx) {
    const BasedRootDatum& d = *state.datum;
    if (state.classify(idx) != RootKind::real)
        throw std::invalid_argument("cayley_real: root is not real");
    IntMatrix theta2 = d.reflection_on_x(idx) * state.theta;
    InvolutionState shell(d, theta2, {});
    std::set<std::size_t> nonc = detail::transfer_gradings(state, shell, idx, false);
    nonc.insert(idx);
    nonc.insert(d.negative_of(idx));
    InvolutionState next(d, theta2, nonc);
    CayleyStep step;
    step.root_index = idx;
    step.kind = CayleyStep::Kind::real_to_imaginary;
    step.alpha_minus_one_point = alpha_minus_one(d, idx);
    if (next.classify(idx) != RootKind::imaginary)
        throw std::logic_error("cayley_real: root did not become imaginary");
    return {next, step};
}

}  // namespace lpacket
