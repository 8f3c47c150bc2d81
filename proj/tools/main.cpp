#include "conical/runner.hpp"

#include "CLI11.hpp"

#include <string>

int main(int argc, char** argv) {
    CLI::App app{"conical - conformal metrics with conical singularities on the punctured disk"};
    app.require_subcommand(1);

    conical::RunOptions options;
    const char* const commands[] = {"analyze", "solve", "pullback", "potential", "spectrum"};
    const char* const descriptions[] = {
        "fit the singular order and verify the limit/decomposition identities",
        "solve the curvature equation with Dirichlet data",
        "pull a metric back under z -> z^m and check the transformation rules",
        "evaluate Newton/Green potentials of a density",
        "Laurent coefficients of circle samples and their Parseval energy"};

    for (std::size_t c = 0; c < 5; ++c) {
        CLI::App* sub = app.add_subcommand(commands[c], descriptions[c]);
        sub->add_option("--config", options.config_path, "JSON run configuration")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", options.out_dir, "output directory (default .)");
        sub->add_option("--refine", options.refine,
                        "run a refinement study over this many doubled grids");
        sub->callback([&options, c, commands] { options.expected_command = commands[c]; });
    }

    CLI11_PARSE(app, argc, argv);
    return conical::run_command(options);
}
