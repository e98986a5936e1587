#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hamca_tools/acceptance.hpp"
#include "hamca_tools/experiments.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Exact Hamiltonian cellular automata: experiments and acceptance checks"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run the experiment described by a JSON config");
    run->add_option("config", config_path, "Experiment config (JSON)")->required();

    std::uint64_t seed = hamca::tools::kDefaultSeed;
    std::string out_dir;
    auto* verify = app.add_subcommand("verify-all", "Run the acceptance suite and print a pass/fail table");
    verify->add_option("--seed", seed, "Seed for the random property checks");
    verify->add_option("--out", out_dir, "Write one report per criterion under this directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : hamca::tools::kExitConfigError;
    }

    if (*run) {
        return hamca::tools::run_config_file(config_path, std::cerr).exit_code;
    }
    std::optional<std::filesystem::path> out;
    if (!out_dir.empty()) {
        out = out_dir;
    }
    return hamca::tools::verify_all(seed, out, std::cout);
}
