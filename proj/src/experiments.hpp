// experiments.hpp: Registry entries behind run_experiment (internal)

#pragma once

#include "emsim/runner.hpp"

#include <functional>
#include <string>
#include <vector>

namespace emsim::detail {

struct SweepDefault {
    std::string name;
    std::vector<double> full, fast;
    double min = -1e300;  // inclusive lower bound on values
    std::string source;
};

struct ParamDefault {
    std::string name;
    double value = 0.0;
    double min = -1e300, max = 1e300;
    std::string source;
};

struct ExperimentDef {
    std::string name;
    std::string description;
    std::vector<SweepDefault> sweeps;
    std::vector<ParamDefault> params;
    // Settings that differ from the global defaults for this experiment: key, value, source.
    std::vector<Provenance> overrides;
    std::function<ResultTable(const ExperimentConfig&, const ProgressSink&)> run;
};

const std::vector<ExperimentDef>& experiment_defs();
const ExperimentDef* find_experiment(const std::string& name);

}  // namespace emsim::detail
