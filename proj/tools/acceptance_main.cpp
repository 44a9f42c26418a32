#include "acceptance.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria 1-10 with pinned tolerances"};
    emsim::acceptance::Options opts;
    std::vector<int> only;
    app.add_flag("--fast", opts.fast, "relax integrator steps 4x");
    app.add_flag("-v,--verbose", opts.verbose, "experiment progress on stderr");
    app.add_option("--only", only, "criterion numbers to run")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);
    opts.only.insert(only.begin(), only.end());
    try {
        return emsim::acceptance::run(opts, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
