#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "lpacket/io.hpp"

using namespace lpacket;

namespace {

std::string fixture_path(const std::string& name) {
    namespace fs = std::filesystem;
    for (fs::path base : {fs::path("fixtures"), fs::path("../fixtures"), fs::path("../../fixtures")})
        if (fs::exists(base / name)) return (base / name).string();
    return ("fixtures/" + name);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("minimal torus document parses into torus mode") {
    InputDocument doc = parse_input(R"({"rank": 1, "theta": [[-1]]})");
    CHECK(doc.rank == 1);
    CHECK_FALSE(doc.has_datum);
    Problem pr = build_problem(doc);
    CHECK_FALSE(pr.datum_mode());
    CHECK(pr.torus.sigma(0, 0) == -1);
}

TEST_CASE("fixture files parse into full parameters") {
    for (const std::string name :
         {"a1_simply_connected.json", "a1_adjoint.json", "a1_adjoint_mu2.json", "a1xa1.json",
          "c2_singular.json", "c2_dl.json"}) {
        InputDocument doc = parse_input(slurp(fixture_path(name)));
        Problem pr = build_problem(doc);
        CHECK(pr.datum_mode());
    }
    for (const std::string name :
         {"torus_compact_rank1.json", "torus_split_rank1.json", "torus_swap_rank2.json"}) {
        InputDocument doc = parse_input(slurp(fixture_path(name)));
        Problem pr = build_problem(doc);
        CHECK_FALSE(pr.datum_mode());
    }
}

TEST_CASE("schema violations carry distinct messages") {
    CHECK_THROWS_AS(parse_input("{"), SchemaError);
    CHECK_THROWS_AS(parse_input(R"({"theta": [[1]]})"), SchemaError);
    CHECK_THROWS_AS(parse_input(R"({"rank": 1})"), SchemaError);
    // simple_roots without simple_coroots
    CHECK_THROWS_AS(parse_input(R"({"rank": 1, "theta": [[1]], "simple_roots": [[2]]})"),
                    SchemaError);
    CHECK_THROWS_AS(parse_input(R"({"rank": 1, "theta": [[1, 0]]})"), SchemaError);
    CHECK_THROWS_AS(parse_input(R"({"rank": 1, "theta": [[1]], "lambda": {"num": [1]}})"),
                    SchemaError);
    CHECK_THROWS_AS(
        parse_input(R"({"rank": 1, "theta": [[1]], "lambda": {"num": [1], "den": 0}})"),
        SchemaError);
    CHECK_THROWS_AS(
        parse_input(R"({"rank": 1, "theta": [[1]], "denominator_bound": 0})"), SchemaError);
    // delta_phi in torus mode
    CHECK_THROWS_AS(parse_input(R"({"rank": 1, "theta": [[1]], "delta_phi": [0]})"),
                    SchemaError);
}

TEST_CASE("forms command output") {
    InputDocument doc = parse_input(slurp(fixture_path("torus_compact_rank1.json")));
    CommandResult res = run_command("forms", doc);
    CHECK(res.text.find("pure: Z/2") == 0);
    CHECK(res.text.find("type-J (|J| = 2): Z/4") != std::string::npos);
    CHECK(res.exit_code == 0);
    InputDocument split = parse_input(slurp(fixture_path("torus_split_rank1.json")));
    CHECK(run_command("forms", split).text == "pure: 1\n");
}

TEST_CASE("pi0 command output") {
    InputDocument doc = parse_input(R"({"rank": 1, "theta": [[-1]]})");
    CHECK(run_command("pi0", doc).text == "pi0: Z/2\n");
    InputDocument swp = parse_input(slurp(fixture_path("torus_swap_rank2.json")));
    CHECK(run_command("pi0", swp).text == "pi0: 1\n");
}

TEST_CASE("dl command lists the singular Levi") {
    InputDocument doc = parse_input(slurp(fixture_path("c2_dl.json")));
    CommandResult res = run_command("dl", doc);
    CHECK(res.text == "dL roots: 0 7\n");
}

TEST_CASE("cayley command reports classifications and steps") {
    InputDocument doc = parse_input(slurp(fixture_path("a1_adjoint.json")));
    CommandResult res = run_command("cayley", doc);
    CHECK(res.text.find("imaginary noncompact") != std::string::npos);
    CHECK(res.text.find("after the transform:") != std::string::npos);
    CHECK(res.data.contains("after_transform"));
}

TEST_CASE("packet-compare runs on every datum fixture and passes") {
    for (const std::string name :
         {"a1_simply_connected.json", "a1_adjoint.json", "a1_adjoint_mu2.json", "a1xa1.json",
          "c2_singular.json", "c2_dl.json"}) {
        InputDocument doc = parse_input(slurp(fixture_path(name)));
        CommandResult res = run_command("packet-compare", doc);
        CHECK(res.exit_code == 0);
        CHECK(res.data["verdict"] == "pass");
    }
}

TEST_CASE("packet-compare row counts on the reference fixtures") {
    InputDocument adj = parse_input(slurp(fixture_path("a1_adjoint.json")));
    CommandResult r_adj = run_command("packet-compare", adj);
    CHECK(r_adj.data["rows"].size() == 2);
    InputDocument sc = parse_input(slurp(fixture_path("a1_simply_connected.json")));
    CommandResult rsc = run_command("packet-compare", sc);
    CHECK(rsc.data["rows"].size() == 1);
}

TEST_CASE("oracle command certifies the fixtures") {
    for (const std::string name :
         {"torus_compact_rank1.json", "a1_adjoint_mu2.json", "c2_singular.json"}) {
        InputDocument doc = parse_input(slurp(fixture_path(name)));
        CommandResult res = run_command("oracle", doc);
        CHECK(res.exit_code == 0);
        CHECK(res.data["verdict"] == "pass");
    }
}

TEST_CASE("unknown command is rejected") {
    InputDocument doc = parse_input(R"({"rank": 1, "theta": [[1]]})");
    CHECK_THROWS_AS(run_command("frobnicate", doc), SchemaError);
}

TEST_CASE("json reports are byte-identical across runs") {
    for (const std::string name : {"a1_adjoint_mu2.json", "c2_singular.json"}) {
        InputDocument doc = parse_input(slurp(fixture_path(name)));
        std::string a = run_command("packet-compare", doc).data.dump(2);
        std::string b = run_command("packet-compare", doc).data.dump(2);
        CHECK(a == b);
        InputDocument doc2 = parse_input(slurp(fixture_path(name)));
        std::string c = run_command("packet-compare", doc2).data.dump(2);
        CHECK(a == c);
    }
}

TEST_CASE("round trip: parsed fixtures echo their documents") {
    for (const std::string name : {"a1_adjoint.json", "c2_singular.json"}) {
        std::string text = slurp(fixture_path(name));
        InputDocument doc = parse_input(text);
        json echoed = serialize_input(doc);
        InputDocument again = parse_input(echoed.dump());
        CHECK(serialize_input(again) == echoed);
    }
}
