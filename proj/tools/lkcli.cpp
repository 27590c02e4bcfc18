#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "lk/cli.hpp"
#include "lk/common.hpp"

int main(int argc, char** argv) {
    CLI::App app{"coefficient, word-expansion and determinant toolkit for the controlled "
                 "subordination equation"};
    app.name("lkcli");

    std::string command;
    std::string config_path;
    std::string out_override;
    std::uint64_t seed = 0;
    int refine = 0;

    app.add_option("command", command, "one of: solve signature grunsky faber tau bridge verify")
        ->required()
        ->check(CLI::IsMember({"solve", "signature", "grunsky", "faber", "tau", "bridge",
                               "verify"}));
    app.add_option("--config", config_path, "JSON config file (defaults apply when omitted)")
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_override, "output directory (overrides config and LK_OUT_DIR)");
    CLI::Option* seed_opt = app.add_option("--seed", seed, "override the verify RNG seed");
    CLI::Option* refine_opt =
        app.add_option("--refine", refine, "quadrature sub-steps per driver segment")
            ->check(CLI::Range(1, 64));

    CLI11_PARSE(app, argc, argv);

    try {
        lk::cli::RunConfig cfg;
        if (!config_path.empty()) cfg = lk::cli::parse_config_file(config_path);
        if (seed_opt->count() > 0) cfg.seed = seed;
        if (refine_opt->count() > 0) cfg.refine = refine;
        if (!out_override.empty())
            cfg.out_dir = out_override;
        else if (const char* env = std::getenv("LK_OUT_DIR"); env != nullptr && *env != '\0')
            cfg.out_dir = env;
        return lk::cli::run_command(command, cfg);
    } catch (const lk::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const lk::ConsistencyError& e) {
        std::cerr << "consistency failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
