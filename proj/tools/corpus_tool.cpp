// Maintains corpus/<name>/expected.json files: `check` re-derives every
// expectation with the exhaustive oracle and diffs, `regen` rewrites them.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ponplace/corpus.hpp"
#include "ponplace/serialize.hpp"

#include <filesystem>

int main(int argc, char** argv) {
    CLI::App app{"corpus expectation checker/regenerator"};
    app.require_subcommand(1);
    std::string dir = "corpus";

    auto* check = app.add_subcommand("check", "verify every entry against the oracle");
    check->add_option("dir", dir, "corpus directory");
    auto* regen = app.add_subcommand("regen", "rewrite expected.json from the oracle");
    regen->add_option("dir", dir, "corpus directory");

    CLI11_PARSE(app, argc, argv);
    namespace fs = std::filesystem;

    try {
        if (*check) {
            bool all = true;
            for (const auto& r : ponplace::run_corpus(dir)) {
                std::cout << (r.pass ? "PASS " : "FAIL ") << r.name;
                if (!r.pass) std::cout << " (" << r.diff << ")";
                std::cout << "\n";
                all &= r.pass;
            }
            return all ? 0 : 1;
        }
        if (*regen) {
            for (const auto& entry : fs::directory_iterator(dir)) {
                if (!entry.is_directory()) continue;
                fs::path inst_path = entry.path() / "instance.json";
                if (!fs::exists(inst_path)) continue;
                auto inst = ponplace::load_instance(ponplace::read_file(inst_path.string()));
                ponplace::write_file((entry.path() / "expected.json").string(),
                                     ponplace::regenerate_expected(inst));
                std::cout << "regenerated " << entry.path().filename().string() << "\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
