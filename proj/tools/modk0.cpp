#include "modk0/workspace.hpp"

#include <fstream>
#include <iostream>

#include "CLI11.hpp"

int main(int argc, char** argv) {
    CLI::App app{"exact Grothendieck rings of module theories"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string workspace_path;
    std::string backend_spec;
    std::string json_path;
    std::uint64_t seed = 0;
    std::size_t cases = 0;
    std::size_t budget = 0;
    app.add_option("--workspace,-w", workspace_path, "workspace JSON file");
    auto* backend_opt = app.add_option("--backend", backend_spec,
                                       "affine-q | integer-z | zp:<p> | zp-sum:<p>,<k>");
    auto* seed_opt = app.add_option("--seed", seed, "seed for the randomized suites");
    auto* cases_opt = app.add_option("--cases", cases, "cases per randomized suite");
    auto* budget_opt = app.add_option("--budget", budget, "refinement budget");
    app.add_option("--json", json_path, "write the structured report here");

    std::string arg;
    auto* k0 = app.add_subcommand("k0", "print the K0 presentation");
    auto* ev = app.add_subcommand("ev", "evaluate a named expression");
    ev->add_option("name", arg)->required();
    auto* dec = app.add_subcommand("decompose", "cell decomposition of a named expression");
    dec->add_option("name", arg)->required();
    auto* lam = app.add_subcommand("lambda", "connected components of a named expression");
    lam->add_option("name", arg)->required();
    auto* hom = app.add_subcommand("homology", "integral homology of a complex file");
    hom->add_option("file", arg)->required();
    auto* chk = app.add_subcommand("check", "run a property suite (or 'all')");
    chk->add_option("suite", arg)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        modk0::Workspace ws;
        if (!workspace_path.empty()) ws = modk0::Workspace::from_file(workspace_path);
        if (backend_opt->count()) ws.set_backend(backend_spec);
        if (seed_opt->count()) ws.suite().seed = seed;
        if (cases_opt->count()) ws.suite().cases = cases;
        if (budget_opt->count()) ws.suite().budget = budget;

        std::string command;
        if (k0->parsed()) command = "k0";
        if (ev->parsed()) command = "ev";
        if (dec->parsed()) command = "decompose";
        if (lam->parsed()) command = "lambda";
        if (hom->parsed()) command = "homology";
        if (chk->parsed()) command = "check";

        modk0::Report rep = modk0::run_command(ws, command, arg.empty()
                                                                 ? std::vector<std::string>{}
                                                                 : std::vector<std::string>{arg});
        std::cout << rep.text;
        if (!json_path.empty()) {
            std::ofstream out(json_path);
            out << rep.json.dump(2) << "\n";
        }
        return rep.ok ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
