// runner.hpp: Named experiments, flat configuration files and CSV result tables

#pragma once

#include "emsim/dynamics.hpp"
#include "emsim/model.hpp"
#include "emsim/pulses.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace emsim {

inline constexpr const char* kArtifactVersion = "emsim 1.0.0";

struct SweepAxis {
    std::string name;
    std::vector<double> values;  // finite, strictly increasing
};

// A resolved setting and where its value came from, echoed into the output metadata.
struct Provenance {
    std::string key;
    std::string value;
    std::string source;
};

struct ExperimentConfig {
    std::string experiment;
    SystemParams system;
    GateOptions gate;
    IntegratorConfig integrator;
    int n_max = 4;
    int workers = 0;  // 0: all available execution units
    bool fast = false;
    std::vector<SweepAxis> sweeps;
    std::map<std::string, double> params;
    std::string output_dir = ".";
    std::vector<Provenance> provenance;

    const std::vector<double>& sweep(const std::string& axis) const;
    double param(const std::string& name) const;
};

// Parses "namespace.key = value" lines ('#' starts a comment). The experiment comes from
// the `experiment` key or the argument; when both are given they must agree. Defaults are
// taken from the experiment's registry entry; `fast` selects its coarse grids and a 4x step
// relaxation. Throws ConfigError with line and column on any bad entry.
ExperimentConfig validate_config(const std::string& text, const std::string& experiment = "",
                                 bool fast = false);

struct ResultTable {
    std::vector<std::string> headers;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;
    double wall_clock_s = 0.0;  // reported separately so that the CSV is byte-deterministic

    void add_row(std::vector<double> row);
    // Throws InvalidInput unless headers are unique and every row has one value per header.
    void validate() const;
    std::size_t column(const std::string& header) const;
    std::vector<double> values(const std::string& header) const;
    // '#'-prefixed metadata block, header line, rows with 12 significant digits.
    std::string to_csv() const;
};

struct ExperimentInfo {
    std::string name;
    std::string description;
};

std::vector<ExperimentInfo> experiment_registry();

using ProgressSink = std::function<void(const std::string&)>;

ResultTable run_experiment(const ExperimentConfig& cfg, const ProgressSink& progress = {});

// Writes <output_dir>/<experiment>.csv and returns its path.
std::string write_table(const ResultTable& table, const ExperimentConfig& cfg);

// requested > 0 is taken as is; otherwise hardware concurrency. EMSIM_MAX_WORKERS caps both.
int worker_count(int requested);

// f(0) .. f(n - 1) on up to `workers` threads; results in input order. The first exception
// thrown by any task is rethrown after all workers stop.
template <class F>
auto parallel_map(std::size_t n, int workers, F f) -> std::vector<decltype(f(std::size_t{0}))> {
    using R = decltype(f(std::size_t{0}));
    std::vector<R> out(n);
    const std::size_t w = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t i; !failed && (i = next++) < n;) {
            try {
                out[i] = f(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < w; ++k) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return out;
}

}  // namespace emsim
