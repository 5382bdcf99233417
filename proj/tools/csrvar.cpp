// csrvar: scenario-driven front end for the sub-Riemannian variational toolkit.

#include <CLI11.hpp>
#include <string>

#include "csr/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Sub-Riemannian prescribed-mean-curvature toolkit"};
    app.require_subcommand(1);

    std::string scenario, out = ".";
    int seed = -1;
    std::string grid;

    const char* commands[] = {"area",  "volume",           "variation-check",
                              "trace", "solve",            "solve-constrained",
                              "regularity", "geometry-check", "surface-variation"};
    for (const char* name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--scenario", scenario, "scenario file (key = value)")->required();
        sub->add_option("--out", out, "output directory");
        sub->add_option("--seed", seed, "override the scenario seed");
        sub->add_option("--grid", grid, "override the grid, e.g. 65x65");
    }

    CLI11_PARSE(app, argc, argv);

    csr::CliOverrides overrides;
    if (seed >= 0) overrides.seed = seed;
    if (!grid.empty()) {
        const std::size_t x = grid.find('x');
        if (x == std::string::npos) {
            std::fprintf(stderr, "error: --grid expects NXxNT, e.g. 65x65\n");
            return 1;
        }
        try {
            overrides.nx = std::stoi(grid.substr(0, x));
            overrides.nt = std::stoi(grid.substr(x + 1));
        } catch (const std::exception&) {
            std::fprintf(stderr, "error: --grid expects NXxNT, e.g. 65x65\n");
            return 1;
        }
    }
    return csr::run(app.get_subcommands().front()->get_name(), scenario, out, overrides);
}
