#pragma once

#include <chrono>

#include <json.hpp>

#include "lpacket/oracle.hpp"
#include "lpacket/sampling.hpp"

namespace lpacket {

using json = nlohmann::json;

// Parsed input document.  Torus-mode documents carry rank and theta only;
// root-datum documents add the datum, gradings, lambda, delta_phi, J, zeta.
struct InputDocument {
    std::size_t rank = 0;
    IntMatrix theta;
    bool has_datum = false;
    std::vector<Vec> simple_roots, simple_coroots;
    std::vector<std::size_t> noncompact_imaginary;
    RationalVector lambda;
    std::vector<std::size_t> delta_phi;
    bool has_j = false;
    std::vector<RationalVector> j_basis;
    IntMatrix zeta;
    bool has_zeta = false;
    Int denominator_bound = 0;  // 0 = unset
    json echo;
};

struct SchemaError : std::invalid_argument {
    explicit SchemaError(const std::string& msg) : std::invalid_argument("schema: " + msg) {}
};

namespace detail {

inline IntMatrix parse_matrix(const json& j, const std::string& field, std::size_t rows,
                              std::size_t cols) {
    if (!j.is_array()) throw SchemaError(field + " must be an array of rows");
    if (rows != 0 && j.size() != rows) throw SchemaError(field + " has wrong row count");
    IntMatrix m(j.size(), cols);
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw SchemaError(field + " row " + std::to_string(i) + " has wrong length");
        for (std::size_t k = 0; k < cols; ++k) {
            if (!j[i][k].is_number_integer())
                throw SchemaError(field + " entries must be integers");
            m(i, k) = Int(j[i][k].get<long>());
        }
    }
    return m;
}

inline RationalVector parse_rational_vector(const json& j, const std::string& field,
                                            std::size_t n) {
    if (!j.is_object() || !j.contains("num") || !j.contains("den"))
        throw SchemaError(field + " must be {\"num\": [...], \"den\": k}");
    if (!j["den"].is_number_integer() || j["den"].get<long>() <= 0)
        throw SchemaError(field + ".den must be a positive integer");
    const json& num = j["num"];
    if (!num.is_array() || num.size() != n) throw SchemaError(field + ".num has wrong length");
    Vec v(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!num[i].is_number_integer()) throw SchemaError(field + ".num entries must be integers");
        v[i] = Int(num[i].get<long>());
    }
    return RationalVector(v, Int(j["den"].get<long>()));
}

inline json rational_vector_json(const RationalVector& v) {
    json num = json::array();
    for (const auto& x : v.num) num.push_back(x.get_si());
    return json{{"num", num}, {"den", v.den.get_si()}};
}

inline json factors_json(const std::vector<Int>& f) {
    json a = json::array();
    for (const auto& x : f) a.push_back(x.get_si());
    return a;
}

inline std::string factors_str(const std::vector<Int>& f) {
    if (f.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) s += " x ";
        s += "Z/" + f[i].get_str();
    }
    return s;
}

}  // namespace detail

inline InputDocument parse_input(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError("document must be a JSON object");
    InputDocument doc;
    doc.echo = j;
    if (!j.contains("rank") || !j["rank"].is_number_integer() || j["rank"].get<long>() < 1)
        throw SchemaError("rank must be a positive integer");
    doc.rank = static_cast<std::size_t>(j["rank"].get<long>());
    if (!j.contains("theta")) throw SchemaError("theta is required");
    doc.theta = detail::parse_matrix(j["theta"], "theta", doc.rank, doc.rank);

    if (j.contains("simple_roots") != j.contains("simple_coroots"))
        throw SchemaError("simple_roots and simple_coroots must appear together");
    if (j.contains("simple_roots")) {
        doc.has_datum = true;
        IntMatrix r = detail::parse_matrix(j["simple_roots"], "simple_roots", 0, doc.rank);
        IntMatrix c = detail::parse_matrix(j["simple_coroots"], "simple_coroots", 0, doc.rank);
        if (r.rows != c.rows) throw SchemaError("simple root and coroot counts differ");
        for (std::size_t i = 0; i < r.rows; ++i) {
            doc.simple_roots.push_back(r.row(i));
            doc.simple_coroots.push_back(c.row(i));
        }
    }
    if (j.contains("noncompact_imaginary")) {
        if (!doc.has_datum) throw SchemaError("noncompact_imaginary requires a root datum");
        for (const auto& x : j["noncompact_imaginary"]) {
            if (!x.is_number_integer() || x.get<long>() < 0)
                throw SchemaError("noncompact_imaginary entries must be root indices");
            doc.noncompact_imaginary.push_back(static_cast<std::size_t>(x.get<long>()));
        }
    }
    doc.lambda = RationalVector(doc.rank);
    if (j.contains("lambda")) doc.lambda = detail::parse_rational_vector(j["lambda"], "lambda", doc.rank);
    if (j.contains("delta_phi")) {
        if (!doc.has_datum) throw SchemaError("delta_phi requires a root datum");
        for (const auto& x : j["delta_phi"]) {
            if (!x.is_number_integer() || x.get<long>() < 0)
                throw SchemaError("delta_phi entries must be root indices");
            doc.delta_phi.push_back(static_cast<std::size_t>(x.get<long>()));
        }
    }
    if (j.contains("J_overlattice")) {
        doc.has_j = true;
        const json& jj = j["J_overlattice"];
        if (!jj.is_object() || !jj.contains("num") || !jj.contains("den"))
            throw SchemaError("J_overlattice must be {\"num\": [[...]], \"den\": k}");
        if (!jj["den"].is_number_integer() || jj["den"].get<long>() <= 0)
            throw SchemaError("J_overlattice.den must be a positive integer");
        Int den(jj["den"].get<long>());
        IntMatrix rows = detail::parse_matrix(jj["num"], "J_overlattice.num", 0, doc.rank);
        for (std::size_t i = 0; i < rows.rows; ++i)
            doc.j_basis.emplace_back(rows.row(i), den);
    }
    doc.zeta = IntMatrix::identity(doc.rank);
    if (j.contains("zeta")) {
        doc.has_zeta = true;
        doc.zeta = detail::parse_matrix(j["zeta"], "zeta", doc.rank, doc.rank);
    }
    if (j.contains("denominator_bound")) {
        if (!j["denominator_bound"].is_number_integer() || j["denominator_bound"].get<long>() < 1)
            throw SchemaError("denominator_bound must be a positive integer");
        doc.denominator_bound = Int(j["denominator_bound"].get<long>());
    }
    return doc;
}

inline json serialize_input(const InputDocument& doc) { return doc.echo; }

// Problem assembled from a document.
struct Problem {
    InputDocument doc;
    TorusWithInvolution torus;             // always available (sigma = theta)
    OverlatticeJ j;                        // defaults to pure
    std::shared_ptr<BasedRootDatum> datum; // set in datum mode
    DualParameter param;                   // valid when datum mode

    bool datum_mode() const { return static_cast<bool>(datum); }
};

inline Problem build_problem(const InputDocument& doc) {
    Problem pr;
    pr.doc = doc;
    pr.torus = TorusWithInvolution(doc.rank, doc.theta);
    Lattice jl = Lattice::standard(doc.rank);
    if (doc.has_j) jl = Lattice::from_generators(doc.j_basis, doc.rank);
    if (!doc.has_datum) {
        pr.j = OverlatticeJ(pr.torus, jl);
        return pr;
    }
    pr.datum = std::make_shared<BasedRootDatum>(doc.rank, doc.simple_roots, doc.simple_coroots);
    std::set<std::size_t> nonc(doc.noncompact_imaginary.begin(), doc.noncompact_imaginary.end());
    InvolutionState state(*pr.datum, doc.theta, nonc);
    pr.param = validate_parameter(*pr.datum, state, doc.lambda, doc.delta_phi, jl, doc.zeta);
    pr.param.datum = pr.datum.get();
    TorusWithInvolution t0(doc.rank, doc.theta);
    pr.j = OverlatticeJ(t0, pr.param.j_lattice);
    return pr;
}

inline Int default_denominator_bound(const Problem& pr) {
    if (pr.doc.denominator_bound != 0) return pr.doc.denominator_bound;
    Int jorder = pr.j.index(pr.torus);
    return 2 * lcm(Int(4), jorder);
}

// ---- report rendering ----

inline json report_json(const ComparisonReport& r, const InputDocument& doc) {
    json out;
    out["parameter"] = serialize_input(doc);
    auto idxs = [](const std::vector<std::size_t>& v) {
        json a = json::array();
        for (auto x : v) a.push_back(x);
        return a;
    };
    out["group_two"] = {{"factors", detail::factors_json(r.group_two_factors)},
                        {"generator_roots", idxs(r.gen_roots_t1)},
                        {"qj_factors", detail::factors_json(r.qj_t1_factors)},
                        {"admissible", r.admissible_t1}};
    out["group_one"] = {{"factors", detail::factors_json(r.group_one_factors)},
                        {"generator_roots", idxs(r.gen_roots_dt)},
                        {"qj_factors", detail::factors_json(r.qj_dt_factors)},
                        {"admissible", r.admissible_dt}};
    out["transform_roots"] = idxs(r.transform_roots);
    out["chain_roots"] = idxs(r.chain_roots);
    out["dl_roots"] = idxs(r.dl_roots);
    out["checks"] = {{"sizes_equal", r.sizes_equal},
                     {"routes_agree", r.routes_agree},
                     {"transport_bijective", r.transport_bijective}};
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"tau", row.tau_index},
                        {"lambda1", detail::rational_vector_json(row.lambda1_t1)},
                        {"lambda1_dt", detail::rational_vector_json(row.lambda1_dt)},
                        {"same_delta", row.same_delta},
                        {"chain_orthogonal", row.chain_orthogonal},
                        {"reflection_fixed", row.reflection_fixed}});
    }
    out["rows"] = rows;
    out["verdict"] = r.pass ? "pass" : "fail";
    if (!r.failure.empty()) out["failure"] = r.failure;
    return out;
}

inline std::string report_text(const ComparisonReport& r) {
    std::ostringstream os;
    auto idxs = [](const std::vector<std::size_t>& v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(v[i]);
        }
        return s + "]";
    };
    os << "dL roots:        " << idxs(r.dl_roots) << "\n";
    os << "transform roots: " << idxs(r.transform_roots) << "\n";
    os << "chain roots:     " << idxs(r.chain_roots) << " (length " << r.chain_roots.size()
       << ")\n";
    os << "group_two:       " << detail::factors_str(r.group_two_factors) << "  gens "
       << idxs(r.gen_roots_t1) << "  Q_J " << detail::factors_str(r.qj_t1_factors)
       << "  admissible " << r.admissible_t1 << "\n";
    os << "group_one:       " << detail::factors_str(r.group_one_factors) << "  gens "
       << idxs(r.gen_roots_dt) << "  Q_J " << detail::factors_str(r.qj_dt_factors)
       << "  admissible " << r.admissible_dt << "\n";
    os << "checks:          sizes_equal=" << (r.sizes_equal ? "yes" : "no")
       << " routes_agree=" << (r.routes_agree ? "yes" : "no")
       << " transport_bijective=" << (r.transport_bijective ? "yes" : "no") << "\n";
    for (const auto& row : r.rows) {
        os << "tau " << row.tau_index << ": lambda1 " << row.lambda1_t1.str() << "  "
           << (row.pass() ? "pass" : "FAIL");
        if (!row.same_delta) os << " (abv " << row.lambda1_dt.str() << ")";
        os << "\n";
    }
    os << "verdict: " << (r.pass ? "pass" : "fail") << "\n";
    if (!r.failure.empty()) os << "failure: " << r.failure << "\n";
    return os.str();
}

// ---- command dispatch ----

struct CommandResult {
    std::string text;
    json data;
    int exit_code = 0;
};

inline CommandResult cmd_forms(const Problem& pr) {
    CommandResult res;
    LatticeQuotient pure = pure_real_forms(pr.torus);
    std::ostringstream os;
    os << "pure: " << detail::factors_str(pure.group.factors) << "\n";
    res.data["pure"] = detail::factors_json(pure.group.factors);
    LatticeQuotient tj = type_J_forms(pr.torus, pr.j);
    Int idx = pr.j.index(pr.torus);
    if (idx > 1) {
        os << "type-J (|J| = " << idx.get_str()
           << "): " << detail::factors_str(tj.group.factors) << "\n";
    }
    res.data["type_j"] = detail::factors_json(tj.group.factors);
    res.data["j_order"] = idx.get_si();
    res.text = os.str();
    return res;
}

inline CommandResult cmd_pi0(const Problem& pr) {
    CommandResult res;
    Pi0Fixed p = pi0_fixed(pr.torus);
    res.text = "pi0: " + detail::factors_str(p.quo.group.factors) + "\n";
    res.data["pi0"] = detail::factors_json(p.quo.group.factors);
    return res;
}

inline CommandResult cmd_cayley(const Problem& pr) {
    if (!pr.datum_mode()) throw SchemaError("cayley requires a root datum");
    CommandResult res;
    std::ostringstream os;
    const BasedRootDatum& d = *pr.datum;
    const InvolutionState& st = pr.param.initial;
    auto dump_state = [&](const InvolutionState& s, const std::string& head) {
        os << head << "\n";
        json jroots = json::array();
        for (std::size_t i = 0; i < d.nroots(); ++i) {
            RootKind k = s.classify(i);
            os << "  root " << i << " " << RationalVector(d.roots[i], Int(1)).str() << " "
               << kind_name(k);
            json jr = {{"index", i}, {"kind", kind_name(k)}};
            if (k == RootKind::imaginary) {
                os << (s.is_noncompact(i) ? " noncompact" : " compact");
                jr["noncompact"] = s.is_noncompact(i);
            }
            os << "\n";
            jroots.push_back(jr);
        }
        return jroots;
    };
    res.data["initial"] = dump_state(st, "initial involution:");
    if (!pr.param.delta_phi.empty()) {
        SingularTransform sh = singular_transform(pr.param);
        res.data["after_transform"] = dump_state(sh.state, "after the transform:");
        json steps = json::array();
        for (const auto& s : sh.steps) {
            os << "  step root " << s.root_index << " point "
               << s.alpha_minus_one_point.v.str() << "\n";
            steps.push_back({{"root", s.root_index},
                             {"kind", "imaginary-to-real"},
                             {"point", detail::rational_vector_json(s.alpha_minus_one_point.v)}});
        }
        res.data["steps"] = steps;
    }
    res.text = os.str();
    return res;
}

inline CommandResult cmd_dl(const Problem& pr) {
    if (!pr.datum_mode()) throw SchemaError("dl requires a root datum");
    CommandResult res;
    std::vector<std::size_t> dl = build_dL(pr.param);
    std::ostringstream os;
    os << "dL roots:";
    json a = json::array();
    for (std::size_t i : dl) {
        os << " " << i;
        a.push_back(i);
    }
    os << "\n";
    res.text = os.str();
    res.data["dl_roots"] = a;
    return res;
}

inline CommandResult cmd_packet_compare(const Problem& pr) {
    if (!pr.datum_mode()) throw SchemaError("packet-compare requires a root datum");
    CommandResult res;
    auto t0 = std::chrono::steady_clock::now();
    PacketPipeline pl = build_pipeline(pr.param);
    ComparisonReport rep = compare_packets(pl);
    auto dt = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0);
    std::ostringstream os;
    os << report_text(rep) << "time: " << static_cast<long>(dt.count()) << " ms\n";
    res.text = os.str();
    // timing stays out of the JSON report so identical inputs give
    // byte-identical output
    res.data = report_json(rep, pr.doc);
    res.exit_code = rep.pass ? 0 : 1;
    return res;
}

inline CommandResult cmd_oracle(const Problem& pr) {
    CommandResult res;
    Int n = default_denominator_bound(pr);
    std::ostringstream os;
    json checks = json::array();
    bool all = true;
    auto record = [&](const std::string& name, bool pass, const std::string& witness) {
        os << (pass ? "pass" : "FAIL") << "  " << name;
        if (!pass && !witness.empty()) os << "  [" << witness << "]";
        os << "\n";
        checks.push_back({{"name", name}, {"pass", pass}, {"witness", witness}});
        all = all && pass;
    };

    // torus-level checks against coset enumeration
    {
        LatticeQuotient pure = pure_real_forms(pr.torus);
        OverlatticeJ triv = OverlatticeJ::pure(pr.torus);
        std::vector<Int> brute = oracle_real_form_factors(pr.torus, triv, n);
        record("pure forms match enumeration", brute == pure.group.factors, "");
        LatticeQuotient tj = type_J_forms(pr.torus, pr.j);
        std::vector<Int> brute_j = oracle_real_form_factors(pr.torus, pr.j, n);
        record("type-J forms match enumeration", brute_j == tj.group.factors, "");
        Pi0Fixed p = pi0_fixed(TorusWithInvolution(pr.torus.rank, pr.torus.sigma.transpose()));
        std::vector<Int> brute_pi0 = oracle_pi0_factors(pr.torus.sigma.transpose(), n);
        record("pi0 matches enumeration", brute_pi0 == p.quo.group.factors, "");
        TorsionAntifixedCertificate fact = torsion_equals_antifixed(pr.torus, pr.j);
        record("torsion equals antifixed classes", fact.holds, "");
    }
    if (pr.datum_mode()) {
        PacketPipeline pl = build_pipeline(pr.param);
        OracleCertificate pair1 = verify_cover_pairing(pr.param, pl.sh.state, n);
        record("cover pairing at T_1", pair1.pass, pair1.witness);
        OracleCertificate pair2 = verify_cover_pairing(pr.param, pl.chain.final_state, n);
        record("cover pairing at dT", pair2.pass, pair2.witness);
        InvolutionState cur = pl.sh.state;
        for (std::size_t step = 0; step < pl.chain.roots.size(); ++step) {
            std::size_t idx = pl.chain.roots[step];
            OracleCertificate lem = verify_toral_quotients(pr.param, cur, idx, n);
            record("toral-quotient clauses at chain root " + std::to_string(idx), lem.pass, lem.witness);
            cur = cayley_imaginary(cur, idx).first;
        }
        OracleCertificate diag = verify_diagram(pl, n);
        record("transform-square diagram chase", diag.pass, diag.witness);
    }
    os << "certificate: " << (all ? "pass" : "fail") << " (" << checks.size() << " checks, N = "
       << n.get_str() << ")\n";
    res.text = os.str();
    res.data["checks"] = checks;
    res.data["denominator_bound"] = n.get_si();
    res.data["verdict"] = all ? "pass" : "fail";
    res.exit_code = all ? 0 : 1;
    return res;
}

inline CommandResult run_command(const std::string& name, const InputDocument& doc) {
    Problem pr = build_problem(doc);
    if (name == "forms") return cmd_forms(pr);
    if (name == "pi0") return cmd_pi0(pr);
    if (name == "cayley") return cmd_cayley(pr);
    if (name == "dl") return cmd_dl(pr);
    if (name == "packet-compare") return cmd_packet_compare(pr);
    if (name == "oracle") return cmd_oracle(pr);
    throw SchemaError("unknown command: " + name);
}

}  // namespace lpacket
