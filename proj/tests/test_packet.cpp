#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lpacket/packet.hpp"
#include "lpacket/sampling.hpp"

using namespace lpacket;

namespace {

RationalVector rv(std::vector<long> n, long d = 1) {
    Vec v(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) v[i] = Int(n[i]);
    return RationalVector(v, Int(d));
}

std::size_t idx_of(const BasedRootDatum& d, std::vector<long> r) {
    Vec v(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) v[i] = Int(r[i]);
    auto k = d.root_index(v);
    REQUIRE(k >= 0);
    return static_cast<std::size_t>(k);
}

struct Fixture {
    std::shared_ptr<BasedRootDatum> datum;
    DualParameter p;
};

Fixture make_param(std::shared_ptr<BasedRootDatum> d, IntMatrix theta,
                   std::set<std::size_t> nonc, RationalVector lambda,
                   std::vector<std::size_t> dphi, Lattice j) {
    Fixture f;
    f.datum = std::move(d);
    InvolutionState st(*f.datum, std::move(theta), nonc);
    f.p = validate_parameter(*f.datum, st, std::move(lambda), std::move(dphi), std::move(j),
                             IntMatrix::identity(f.datum->rank));
    f.p.datum = f.datum.get();
    return f;
}

Fixture a1_adjoint(Lattice j) {
    auto d = std::make_shared<BasedRootDatum>(1, std::vector<Vec>{{Int(1)}},
                                              std::vector<Vec>{{Int(2)}});
    std::size_t a = 1;  // roots sorted: (-1), (1)
    return make_param(d, IntMatrix::identity(1), {a}, rv({0}), {a}, std::move(j));
}

Fixture a1_simply_connected() {
    auto d = std::make_shared<BasedRootDatum>(1, std::vector<Vec>{{Int(2)}},
                                              std::vector<Vec>{{Int(1)}});
    std::size_t a = 1;  // roots sorted: (-2), (2)
    return make_param(d, IntMatrix::identity(1), {a}, rv({0}), {a}, Lattice::standard(1));
}

std::shared_ptr<BasedRootDatum> so5() {
    return std::make_shared<BasedRootDatum>(
        2, std::vector<Vec>{{Int(1), Int(-1)}, {Int(0), Int(1)}},
        std::vector<Vec>{{Int(1), Int(-1)}, {Int(0), Int(2)}});
}

Lattice so5_center_lattice() {
    return Lattice::from_generators({rv({1, 0}), rv({1, 1}, 2)}, 2);
}

Fixture c2_singular() {
    auto d = so5();
    std::size_t e2 = idx_of(*d, {0, 1});
    std::size_t lp = idx_of(*d, {1, 1});
    std::size_t lm = idx_of(*d, {1, -1});
    return make_param(d, IntMatrix::identity(2), {e2, lp, lm}, rv({0, 0}), {e2},
                      so5_center_lattice());
}

}  // namespace

TEST_CASE("validate_parameter accepts the A1 reference and rejects each clause") {
    auto d = std::make_shared<BasedRootDatum>(1, std::vector<Vec>{{Int(1)}},
                                              std::vector<Vec>{{Int(2)}});
    InvolutionState st(*d, IntMatrix::identity(1), {1});
    // accepted
    CHECK_NOTHROW(validate_parameter(*d, st, rv({0}), {1}, Lattice::standard(1),
                                     IntMatrix::identity(1)));
    auto code = [&](std::function<void()> f) -> std::string {
        try {
            f();
        } catch (const ParameterError& e) {
            return e.code;
        }
        return "";
    };
    CHECK(code([&] {
              validate_parameter(*d, st, rv({1}), {1}, Lattice::standard(1),
                                 IntMatrix::identity(1));
          }) == "delta_phi_not_singular");
    CHECK(code([&] {
              validate_parameter(*d, st, rv({0}), {5}, Lattice::standard(1),
                                 IntMatrix::identity(1));
          }) == "delta_phi_unknown_root");
    CHECK(code([&] {
              validate_parameter(*d, st, rv({0}), {0, 1}, Lattice::standard(1),
                                 IntMatrix::identity(1));
          }) == "delta_phi_duplicate");
    InvolutionState compact(*d, IntMatrix::identity(1), {});
    CHECK(code([&] {
              validate_parameter(*d, compact, rv({0}), {1}, Lattice::standard(1),
                                 IntMatrix::identity(1));
          }) == "delta_phi_not_noncompact");
    InvolutionState split(*d, -IntMatrix::identity(1), {});
    CHECK(code([&] {
              validate_parameter(*d, split, rv({0}), {1}, Lattice::standard(1),
                                 IntMatrix::identity(1));
          }) == "delta_phi_not_imaginary");
    IntMatrix bad_zeta(1, 1);
    bad_zeta(0, 0) = 2;
    CHECK(code([&] {
              validate_parameter(*d, st, rv({0}), {1}, Lattice::standard(1), bad_zeta);
          }) == "zeta_not_unimodular");
    // J not central: for the sc dual datum the coroot is (1), so 1/2 Z fails
    auto sc = std::make_shared<BasedRootDatum>(1, std::vector<Vec>{{Int(2)}},
                                               std::vector<Vec>{{Int(1)}});
    InvolutionState sc_st(*sc, IntMatrix::identity(1), {1});
    Lattice half = Lattice::from_generators({rv({1}, 2)}, 1);
    CHECK(code([&] {
              validate_parameter(*sc, sc_st, rv({0}), {1}, half, IntMatrix::identity(1));
          }) == "j_not_central");
}

TEST_CASE("validate_parameter rejects non strongly orthogonal sets") {
    auto d = so5();
    std::size_t e1 = idx_of(*d, {1, 0}), e2 = idx_of(*d, {0, 1});
    std::size_t a1 = idx_of(*d, {1, -1});
    InvolutionState st(*d, IntMatrix::identity(2), {e1, e2, a1, idx_of(*d, {1, 1})});
    // e1 and e1-e2 are not orthogonal
    try {
        validate_parameter(*d, st, rv({0, 0}), {e1, a1}, Lattice::standard(2),
                           IntMatrix::identity(2));
        CHECK(false);
    } catch (const ParameterError& e) {
        CHECK(e.code == "delta_phi_not_orthogonal");
    }
    // e1 and e2 are orthogonal but e1 +- e2 are roots
    try {
        validate_parameter(*d, st, rv({0, 0}), {e1, e2}, Lattice::standard(2),
                           IntMatrix::identity(2));
        CHECK(false);
    } catch (const ParameterError& e) {
        CHECK(e.code == "delta_phi_not_strongly_orthogonal");
    }
}

TEST_CASE("dL for regular, zero and partially singular lambda") {
    auto d = so5();
    InvolutionState st(*d, IntMatrix::identity(2), {});
    DualParameter reg = validate_parameter(*d, st, rv({5, 3}), {}, Lattice::standard(2),
                                           IntMatrix::identity(2));
    reg.datum = d.get();
    CHECK(build_dL(reg).empty());
    DualParameter zero = validate_parameter(*d, st, rv({0, 0}), {}, Lattice::standard(2),
                                            IntMatrix::identity(2));
    zero.datum = d.get();
    CHECK(build_dL(zero).size() == d->nroots());
    // lambda orthogonal to the long root e1+e2 only
    DualParameter part = validate_parameter(*d, st, rv({1, -1}), {}, Lattice::standard(2),
                                            IntMatrix::identity(2));
    part.datum = d.get();
    std::vector<std::size_t> dl = build_dL(part);
    REQUIRE(dl.size() == 2);
    CHECK(dl[0] == idx_of(*d, {-1, -1}));
    CHECK(dl[1] == idx_of(*d, {1, 1}));
}

TEST_CASE("singular transform in rank one") {
    Fixture f = a1_simply_connected();
    SingularTransform sh = singular_transform(f.p);
    CHECK(sh.state.theta == -IntMatrix::identity(1));
    CHECK(sh.m1_roots.size() == 2);
    CHECK(sh.steps.size() == 1);
}

TEST_CASE("empty delta_phi gives the identity transform") {
    auto d = so5();
    InvolutionState st(*d, -IntMatrix::identity(2), {});
    DualParameter p = validate_parameter(*d, st, rv({0, 0}), {}, Lattice::standard(2),
                                         IntMatrix::identity(2));
    p.datum = d.get();
    SingularTransform sh = singular_transform(p);
    CHECK(sh.state.theta == st.theta);
    CHECK(sh.m1_roots.size() == d->nroots());
    CHECK(sh.steps.empty());
}

TEST_CASE("two orthogonal steps commute") {
    auto d = std::make_shared<BasedRootDatum>(
        2, std::vector<Vec>{{Int(2), Int(0)}, {Int(0), Int(1)}},
        std::vector<Vec>{{Int(1), Int(0)}, {Int(0), Int(2)}});
    std::size_t a = idx_of(*d, {2, 0}), b = idx_of(*d, {0, 1});
    for (auto order : std::vector<std::vector<std::size_t>>{{a, b}, {b, a}}) {
        InvolutionState st(*d, IntMatrix::identity(2), {a, b});
        DualParameter p = validate_parameter(*d, st, rv({0, 0}), order, Lattice::standard(2),
                                             IntMatrix::identity(2));
        p.datum = d.get();
        SingularTransform sh = singular_transform(p);
        CHECK(sh.state.theta == -IntMatrix::identity(2));
        CHECK(sh.state.real_roots().size() == 4);
    }
}

TEST_CASE("maximally split chain collapses in one step for bare A1") {
    auto d = std::make_shared<BasedRootDatum>(1, std::vector<Vec>{{Int(1)}},
                                              std::vector<Vec>{{Int(2)}});
    InvolutionState st(*d, IntMatrix::identity(1), {1});
    DualParameter p = validate_parameter(*d, st, rv({0}), {}, Lattice::standard(1),
                                         IntMatrix::identity(1));
    p.datum = d.get();
    SingularTransform sh = singular_transform(p);
    ChainRecord rec = maximally_split_chain(p, sh.state);
    CHECK(rec.roots.size() == 1);
    CHECK(rec.final_state.theta == -IntMatrix::identity(1));
}

TEST_CASE("chain is empty when nothing noncompact remains") {
    Fixture f = a1_simply_connected();
    SingularTransform sh = singular_transform(f.p);
    ChainRecord rec = maximally_split_chain(f.p, sh.state);
    CHECK(rec.roots.empty());
}

TEST_CASE("c2 fixture: grading flip feeds a one-step chain") {
    Fixture f = c2_singular();
    SingularTransform sh = singular_transform(f.p);
    ChainRecord rec = maximally_split_chain(f.p, sh.state);
    REQUIRE(rec.roots.size() == 1);
    Vec chain_root = f.datum->roots[rec.roots[0]];
    bool is_e1 = chain_root == Vec{Int(1), Int(0)} || chain_root == Vec{Int(-1), Int(0)};
    CHECK(is_e1);
    CHECK(rec.final_state.theta == -IntMatrix::identity(2));
}

TEST_CASE("index sets of the adjoint A1 parameter with pure J") {
    Fixture f = a1_adjoint(Lattice::standard(1));
    PacketPipeline pl = build_pipeline(f.p);
    CHECK(pl.t1.qj.group.factors == std::vector<Int>{Int(2)});
    REQUIRE(pl.t1.generator_chars.size() == 1);
    CHECK(pl.t1.qj.group.is_zero(pl.t1.generator_chars[0]));  // generator trivial
    CHECK(pl.t1.admissible.size() == 2);
    CHECK(pl.dt.admissible.size() == 2);
    CHECK(pl.chain.roots.empty());
    CHECK(pl.t1.component_quotient.group.factors == std::vector<Int>{Int(2)});
    CHECK(pl.dt.component_quotient.group.factors == std::vector<Int>{Int(2)});
}

TEST_CASE("index sets of the simply connected A1 parameter") {
    Fixture f = a1_simply_connected();
    PacketPipeline pl = build_pipeline(f.p);
    CHECK(pl.t1.qj.group.factors == std::vector<Int>{Int(2)});
    REQUIRE(pl.t1.generator_chars.size() == 1);
    CHECK_FALSE(pl.t1.qj.group.is_zero(pl.t1.generator_chars[0]));  // nontrivial character
    CHECK(pl.t1.admissible.size() == 1);
    CHECK(pl.dt.admissible.size() == 1);
}

TEST_CASE("regular lambda with empty delta_phi keeps all of Q_J") {
    auto d = so5();
    InvolutionState st(*d, -IntMatrix::identity(2), {});
    DualParameter p = validate_parameter(*d, st, rv({5, 3}), {}, so5_center_lattice(),
                                         IntMatrix::identity(2));
    p.datum = d.get();
    PacketPipeline pl = build_pipeline(p);
    CHECK(pl.t1.generator_roots.empty());
    CHECK(pl.dt.generator_roots.empty());
    CHECK(Int(pl.t1.admissible.size()) == pl.t1.qj.group.order());
    ComparisonReport r = compare_packets(pl);
    CHECK(r.pass);
}

TEST_CASE("step monomorphism on the simply connected A1") {
    Fixture f = a1_simply_connected();
    StepMonomorphism m = step_monomorphism(f.p, f.p.initial, 1);
    CHECK(m.source.group.is_trivial());
    CHECK(m.target.group.is_trivial());  // alpha(-1) generates the whole pi0
    CHECK(m.hom.is_injective());
}

TEST_CASE("step monomorphism along the c2 chain has Z/2 source") {
    Fixture f = c2_singular();
    SingularTransform sh = singular_transform(f.p);
    ChainRecord rec = maximally_split_chain(f.p, sh.state);
    REQUIRE(rec.roots.size() == 1);
    StepMonomorphism m = step_monomorphism(f.p, sh.state, rec.roots[0]);
    CHECK(m.source.group.factors == std::vector<Int>{Int(2)});
    CHECK(m.hom.is_injective());
    // a real root is not a valid transform datum
    CHECK_THROWS_AS(step_monomorphism(f.p, sh.state, std::size_t(4)), std::invalid_argument);
}

TEST_CASE("chain isomorphism: empty chain is the identity on equal quotients") {
    Fixture f = a1_adjoint(Lattice::standard(1));
    PacketPipeline pl = build_pipeline(f.p);
    CHECK(pl.iso.recipe.is_isomorphism());
    CHECK(pl.iso.routes_agree);
    for (const auto& e : pl.t1.component_quotient.group.elements())
        CHECK(pl.iso.recipe.apply(e) == pl.iso.inclusion.apply(e));
}

TEST_CASE("transport on the adjoint A1 sends the nontrivial class to itself") {
    Fixture f = a1_adjoint(Lattice::standard(1));
    PacketPipeline pl = build_pipeline(f.p);
    REQUIRE(pl.t1.admissible.size() == 2);
    for (const auto& q : pl.t1.admissible) {
        Vec img = transport_character(pl, q);
        CHECK(pl.t1.qj.group.is_zero(q) == pl.dt.qj.group.is_zero(img));
    }
    // inadmissible input is rejected: fabricate a class outside the list
    Fixture sc = a1_simply_connected();
    PacketPipeline psc = build_pipeline(sc.p);
    Vec bad = psc.t1.qj.group.zero();
    bad[0] = 1;
    CHECK_THROWS_AS(transport_character(psc, bad), std::invalid_argument);
}

TEST_CASE("strong forms of characters") {
    Fixture f = a1_adjoint(Lattice::standard(1));
    PacketPipeline pl = build_pipeline(f.p);
    for (const auto& q : pl.t1.admissible) {
        StrongFormAssignment a = strong_form_of_character(pl, "T1", q);
        if (pl.t1.qj.group.is_zero(q)) {
            CHECK(a.lambda1 == rv({0}));
            CHECK(a.representative == "exp(pi*i*(0))*delta_q");
        } else {
            // the class of the fundamental cocharacter: exp(pi i) has order 2
            TorusPoint p(RationalVector(a.lambda1.num, a.lambda1.den * 2));
            CHECK(p.order() == 2);
        }
        CHECK(a.chain_orthogonal);
        CHECK(a.reflection_fixed);
    }
}

TEST_CASE("compare_packets passes on the named fixtures") {
    Fixture adj = a1_adjoint(Lattice::standard(1));
    PacketPipeline padj = build_pipeline(adj.p);
    ComparisonReport r_adj = compare_packets(padj);
    CHECK(r_adj.pass);
    CHECK(r_adj.rows.size() == 2);

    Fixture sc = a1_simply_connected();
    PacketPipeline psc = build_pipeline(sc.p);
    ComparisonReport rsc = compare_packets(psc);
    CHECK(rsc.pass);
    CHECK(rsc.rows.size() == 1);

    Fixture adj2 = a1_adjoint(Lattice::from_generators({rv({1}, 2)}, 1));
    PacketPipeline padj2 = build_pipeline(adj2.p);
    ComparisonReport radj2 = compare_packets(padj2);
    CHECK(radj2.pass);
    CHECK(radj2.qj_t1_factors == std::vector<Int>{Int(4)});
    CHECK(radj2.rows.size() == 2);

    Fixture c2 = c2_singular();
    PacketPipeline pc2 = build_pipeline(c2.p);
    ComparisonReport rc2 = compare_packets(pc2);
    CHECK(rc2.pass);
    CHECK(rc2.chain_roots.size() == 1);
    CHECK(rc2.rows.size() == 2);
}

TEST_CASE("torus-only datum: every strong form is admissible") {
    auto d = std::make_shared<BasedRootDatum>(1, std::vector<Vec>{}, std::vector<Vec>{});
    InvolutionState st(*d, -IntMatrix::identity(1), {});
    DualParameter p = validate_parameter(*d, st, rv({0}), {}, Lattice::standard(1),
                                         IntMatrix::identity(1));
    p.datum = d.get();
    PacketPipeline pl = build_pipeline(p);
    CHECK(pl.chain.roots.empty());
    CHECK(pl.t1.generator_roots.empty());
    ComparisonReport r = compare_packets(pl);
    CHECK(r.pass);
    CHECK(Int(r.rows.size()) == pl.t1.qj.group.order());
}

TEST_CASE("chain independence: random replays agree on the c2 fixture") {
    Fixture f = c2_singular();
    PacketPipeline base = build_pipeline(f.p);
    ComparisonReport rbase = compare_packets(base);
    for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
        Sampler s(seed);
        auto chooser = [&](const std::vector<std::size_t>& cands) {
            return cands[static_cast<std::size_t>(
                s.pick(0, static_cast<long>(cands.size()) - 1))];
        };
        PacketPipeline pl = build_pipeline(f.p, chooser);
        ComparisonReport r = compare_packets(pl);
        CHECK(r.pass == rbase.pass);
        CHECK(r.group_one_factors == rbase.group_one_factors);
        CHECK(r.admissible_dt == rbase.admissible_dt);
        REQUIRE(r.rows.size() == rbase.rows.size());
        for (std::size_t i = 0; i < r.rows.size(); ++i) {
            CHECK(r.rows[i].pass() == rbase.rows[i].pass());
            CHECK(r.rows[i].lambda1_t1 == rbase.rows[i].lambda1_t1);
        }
    }
}

TEST_CASE("zeta transport: a unimodular change of basis relabels the input") {
    Fixture base = c2_singular();
    PacketPipeline pb = build_pipeline(base.p);
    ComparisonReport rb = compare_packets(pb);
    // the same parameter with the J lattice handed over in zeta-coordinates
    IntMatrix z(2, 2);
    z(0, 0) = 1;
    z(0, 1) = 1;
    z(1, 0) = 0;
    z(1, 1) = 1;
    IntMatrix zinv = inverse_unimodular(z);
    std::vector<RationalVector> user_basis;
    for (std::size_t i = 0; i < 2; ++i) {
        RationalVector b = so5_center_lattice().basis_vector(i);
        user_basis.push_back(RationalVector::from_qvec(zinv.apply(b.to_qvec())));
    }
    auto d = so5();
    std::size_t e2 = idx_of(*d, {0, 1});
    InvolutionState st(*d, IntMatrix::identity(2),
                       {e2, idx_of(*d, {1, 1}), idx_of(*d, {1, -1})});
    DualParameter p = validate_parameter(*d, st, rv({0, 0}), {e2},
                                         Lattice::from_generators(user_basis, 2), z);
    p.datum = d.get();
    PacketPipeline pl = build_pipeline(p);
    ComparisonReport r = compare_packets(pl);
    CHECK(r.pass == rb.pass);
    CHECK(r.qj_t1_factors == rb.qj_t1_factors);
    CHECK(r.rows.size() == rb.rows.size());
}

TEST_CASE("randomized parameters: sizes match and rows pass") {
    Sampler s(9001);
    for (int trial = 0; trial < 25; ++trial) {
        auto sp = random_parameter(s);
        PacketPipeline pl = build_pipeline(sp->p);
        ComparisonReport r = compare_packets(pl);
        if (!r.pass) {
            MESSAGE("failure: ", r.failure);
        }
        CHECK(r.pass);
        CHECK(r.admissible_t1 == r.admissible_dt);
    }
}
