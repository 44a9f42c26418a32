#include "acceptance.hpp"
#include "emsim/errors.hpp"
#include "emsim/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw emsim::ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pulse-level simulator of resonator qubits coupled through a transmon"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "list registered experiments");

    auto* run = app.add_subcommand("run", "run an experiment and write <out>/<experiment>.csv");
    std::string experiment, config_path, out_dir;
    bool fast = false;
    int workers = -1;
    run->add_option("experiment", experiment, "experiment name")->required();
    run->add_option("--config", config_path, "flat key = value config file");
    run->add_option("--out", out_dir, "output directory (default: run.output_dir or .)");
    run->add_flag("--fast", fast, "coarse grids and 4x relaxed steps");
    run->add_option("--workers", workers, "worker threads (0: all execution units)")->check(CLI::NonNegativeNumber);
    bool quiet = false;
    run->add_flag("-q,--quiet", quiet, "no progress lines");

    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    emsim::acceptance::Options vopts;
    verify->add_flag("--fast", vopts.fast, "relax integrator steps 4x");
    verify->add_flag("-v,--verbose", vopts.verbose, "experiment progress on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*list) {
            for (const auto& e : emsim::experiment_registry()) std::cout << e.name << "\t" << e.description << "\n";
            return 0;
        }
        if (*verify) return emsim::acceptance::run(vopts, std::cout);

        emsim::ExperimentConfig cfg =
            emsim::validate_config(config_path.empty() ? std::string() : read_file(config_path), experiment, fast);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (workers >= 0) cfg.workers = workers;
        emsim::ProgressSink sink;
        if (!quiet) sink = [](const std::string& line) { std::cerr << line << "\n"; };
        const emsim::ResultTable t = emsim::run_experiment(cfg, sink);
        const std::string path = emsim::write_table(t, cfg);
        std::cerr << "wrote " << path << " (" << t.rows.size() << " rows, " << t.wall_clock_s << " s wall clock)\n";
        return 0;
    } catch (const emsim::InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const emsim::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
