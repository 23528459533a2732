#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "lpacket/io.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact computations with real-form classes, component groups and "
                 "Cayley-transform chains for tori and root data with involution"};
    app.require_subcommand(1);

    std::string input;
    bool as_json = false;
    long denominator_bound = 0;
    long seed = 0;

    const std::vector<std::string> names = {"forms", "pi0", "cayley", "dl",
                                            "packet-compare", "oracle"};
    const std::vector<std::string> descs = {
        "pure and type-J real-form class groups of a torus",
        "component group of the fixed subgroup of the dual torus",
        "root classification, gradings and Cayley transform steps",
        "roots of the Levi attached to lambda",
        "build both packet index sets and compare their strong real forms",
        "independent brute-force verification at a denominator bound"};
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < names.size(); ++i) {
        CLI::App* sub = app.add_subcommand(names[i], descs[i]);
        sub->add_option("--input", input, "input JSON document")->required();
        sub->add_flag("--json", as_json, "emit the machine-readable report");
        sub->add_option("--denominator-bound", denominator_bound,
                        "oracle denominator bound (overrides the document)");
        sub->add_option("--seed", seed, "seed for randomized property replays");
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    std::string cmd;
    for (std::size_t i = 0; i < subs.size(); ++i)
        if (subs[i]->parsed()) cmd = names[i];

    try {
        lpacket::InputDocument doc = lpacket::parse_input(read_file(input));
        if (denominator_bound > 0) doc.denominator_bound = lpacket::Int(denominator_bound);
        lpacket::CommandResult res = lpacket::run_command(cmd, doc);
        if (as_json)
            std::cout << res.data.dump(2) << "\n";
        else
            std::cout << res.text;
        return res.exit_code;
    } catch (const lpacket::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const lpacket::ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
