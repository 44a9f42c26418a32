#include "emsim/runner.hpp"

#include "emsim/errors.hpp"
#include "experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace emsim {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Thrown by setters; rewrapped with the position of the offending value.
struct BadValue {
    std::string what;
};

double parse_number(const std::string& raw) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(raw, &used);
    } catch (const std::exception&) {
        throw BadValue{"'" + raw + "' is not a number"};
    }
    if (used != raw.size()) throw BadValue{"'" + raw + "' is not a number"};
    if (!std::isfinite(v)) throw BadValue{"value must be finite"};
    return v;
}

double parse_at_least(const std::string& raw, double lo, bool strict) {
    const double v = parse_number(raw);
    if (strict ? !(v > lo) : !(v >= lo)) throw BadValue{"value must be " + std::string(strict ? "> " : ">= ") + fmt(lo)};
    return v;
}

int parse_int(const std::string& raw, int lo, int hi) {
    const double v = parse_number(raw);
    if (v != std::floor(v)) throw BadValue{"value must be an integer"};
    if (v < lo || v > hi) throw BadValue{"value must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]"};
    return static_cast<int>(v);
}

bool parse_bool(const std::string& raw) {
    if (raw == "true" || raw == "1") return true;
    if (raw == "false" || raw == "0") return false;
    throw BadValue{"expected true or false"};
}

struct Setting {
    std::string key;
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
    std::string source;
};

template <class Get>
Setting number(std::string key, Get field, double lo, bool strict, std::string source) {
    return {std::move(key),
            [=](ExperimentConfig& c, const std::string& raw) { field(c) = parse_at_least(raw, lo, strict); },
            [=](const ExperimentConfig& c) {
                ExperimentConfig copy = c;
                return fmt(field(copy));
            }, std::move(source)};
}

const std::vector<Setting>& settings() {
    static const std::vector<Setting> s = [] {
        const std::string realistic = "published realistic parameter set";
        std::vector<Setting> v;
        auto sys = [](double SystemParams::*m) { return [m](ExperimentConfig& c) -> double& { return c.system.*m; }; };
        v.push_back(number("system.omega1_mhz", sys(&SystemParams::omega1_mhz), 0.0, true, realistic + ", omega_1/2pi = 85 MHz (idle)"));
        v.push_back(number("system.omega2_mhz", sys(&SystemParams::omega2_mhz), 0.0, true, realistic + ", omega_2/2pi = 75 MHz (idle)"));
        v.push_back(number("system.Omega_mhz", sys(&SystemParams::Omega_mhz), 0.0, true, realistic + ", Omega/2pi = 10 GHz (idle)"));
        v.push_back(number("system.beta1_mhz", [](ExperimentConfig& c) -> double& { return c.system.nl1.strength_mhz; }, 0.0, false,
                           realistic + ", Kerr beta/2pi = 3 MHz"));
        v.push_back(number("system.beta2_mhz", [](ExperimentConfig& c) -> double& { return c.system.nl2.strength_mhz; }, 0.0, false,
                           realistic + ", Kerr beta/2pi = 3 MHz"));
        v.push_back(number("system.g1_mhz", sys(&SystemParams::g1_mhz), 0.0, false, realistic + ", g/2pi = 6 MHz"));
        v.push_back(number("system.g2_mhz", sys(&SystemParams::g2_mhz), 0.0, false, realistic + ", g/2pi = 6 MHz"));
        v.push_back(number("system.gamma1_hz", sys(&SystemParams::gamma1_hz), 0.0, false, realistic + ", gamma_NR/2pi = 50 Hz"));
        v.push_back(number("system.gamma2_hz", sys(&SystemParams::gamma2_hz), 0.0, false, realistic + ", gamma_NR/2pi = 50 Hz"));
        v.push_back(number("system.gamma1d_hz", sys(&SystemParams::gamma1d_hz), 0.0, false, "artifact default; swept per experiment"));
        v.push_back(number("system.gamma2d_hz", sys(&SystemParams::gamma2d_hz), 0.0, false, "artifact default; swept per experiment"));
        v.push_back(number("system.gammaTR_hz", sys(&SystemParams::gammaTR_hz), 0.0, false, realistic + ", gamma_TR/2pi = 100 kHz"));
        v.push_back(number("system.gammaTRd_hz", sys(&SystemParams::gammaTRd_hz), 0.0, false,
                           "published realistic transmon dephasing, gamma_TR,d/2pi = 100 kHz"));

        auto gate = [](double GateOptions::*m) { return [m](ExperimentConfig& c) -> double& { return c.gate.*m; }; };
        v.push_back(number("gate.drive_amplitude_mhz", gate(&GateOptions::drive_amplitude_mhz), 0.0, true,
                           "published Gaussian peak amplitude 0.3 MHz"));
        v.push_back({"gate.envelope",
                     [](ExperimentConfig& c, const std::string& raw) {
                         if (raw == "gaussian") c.gate.envelope = EnvelopeKind::Gaussian;
                         else if (raw == "square") c.gate.envelope = EnvelopeKind::Square;
                         else throw BadValue{"expected gaussian or square"};
                     },
                     [](const ExperimentConfig& c) { return std::string(c.gate.envelope == EnvelopeKind::Gaussian ? "gaussian" : "square"); },
                     "published: Gaussian tuning pulses"});
        v.push_back(number("gate.gaussian_truncation", gate(&GateOptions::gaussian_truncation), 0.0, true, "artifact default"));
        v.push_back(number("gate.rz_shift_mhz", gate(&GateOptions::rz_shift_mhz), 0.0, true, "artifact default"));
        v.push_back({"gate.transmon_shift_mhz",
                     [](ExperimentConfig& c, const std::string& raw) { c.gate.transmon_shift_mhz = parse_number(raw); },
                     [](const ExperimentConfig& c) { return fmt(c.gate.transmon_shift_mhz); },
                     "published: Omega/2pi tuned from 10 GHz down to 2.5 GHz for two-qubit gates"});

        v.push_back({"integrator.frame",
                     [](ExperimentConfig& c, const std::string& raw) {
                         if (raw == "lab") c.integrator.frame = Frame::Lab;
                         else if (raw == "interaction") c.integrator.frame = Frame::Interaction;
                         else if (raw == "dressed") c.integrator.frame = Frame::Dressed;
                         else throw BadValue{"expected lab, interaction or dressed"};
                     },
                     [](const ExperimentConfig& c) {
                         return std::string(c.integrator.frame == Frame::Lab ? "lab"
                                            : c.integrator.frame == Frame::Interaction ? "interaction" : "dressed");
                     },
                     "artifact default"});
        auto integ = [](double IntegratorConfig::*m) { return [m](ExperimentConfig& c) -> double& { return c.integrator.*m; }; };
        v.push_back(number("integrator.step", integ(&IntegratorConfig::step), 0.0, false, "artifact default (0: automatic)"));
        v.push_back(number("integrator.step_relax", integ(&IntegratorConfig::step_relax), 1.0, false, "artifact default"));
        v.push_back(number("integrator.samples_per_period", integ(&IntegratorConfig::samples_per_period), 4.0, false, "artifact default"));
        v.push_back(number("integrator.drive_samples_per_period", integ(&IntegratorConfig::drive_samples_per_period), 4.0, false,
                           "artifact default"));
        v.push_back(number("integrator.secular_cutoff_mhz", integ(&IntegratorConfig::secular_cutoff_mhz), 0.0, true, "artifact default"));

        v.push_back({"run.n_max", [](ExperimentConfig& c, const std::string& raw) { c.n_max = parse_int(raw, 2, 9); },
                     [](const ExperimentConfig& c) { return std::to_string(c.n_max); }, "artifact default (dimension 50)"});
        v.push_back({"run.workers", [](ExperimentConfig& c, const std::string& raw) { c.workers = parse_int(raw, 0, 4096); },
                     [](const ExperimentConfig& c) { return std::to_string(c.workers); }, "artifact default (0: all execution units)"});
        v.push_back({"run.fast", [](ExperimentConfig& c, const std::string& raw) { c.fast = parse_bool(raw); },
                     [](const ExperimentConfig& c) { return std::string(c.fast ? "true" : "false"); }, "artifact default"});
        v.push_back({"run.output_dir", [](ExperimentConfig& c, const std::string& raw) { c.output_dir = raw; },
                     [](const ExperimentConfig& c) { return c.output_dir; }, "artifact default"});
        return v;
    }();
    return s;
}

const Setting* find_setting(const std::string& key) {
    for (const auto& s : settings()) {
        if (s.key == key) return &s;
    }
    return nullptr;
}

std::string registry_list() {
    std::string out;
    for (const auto& d : detail::experiment_defs()) out += (out.empty() ? "" : ", ") + d.name;
    return out;
}

struct Entry {
    std::string key, value;
    int line = 0, key_col = 0, value_col = 0;
};

std::vector<double> parse_list(const std::string& raw, double lo) {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw BadValue{"empty list element"};
        const double v = parse_number(item);
        if (v < lo) throw BadValue{"sweep value " + fmt(v) + " below " + fmt(lo)};
        if (!out.empty() && !(v > out.back())) throw BadValue{"sweep values must be strictly increasing"};
        out.push_back(v);
    }
    if (out.empty()) throw BadValue{"empty sweep"};
    return out;
}

void set_sweep(ExperimentConfig& c, const std::string& name, std::vector<double> values) {
    for (auto& a : c.sweeps) {
        if (a.name == name) {
            a.values = std::move(values);
            return;
        }
    }
    c.sweeps.push_back({name, std::move(values)});
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (double x : v) out += (out.empty() ? "" : ",") + fmt(x);
    return out;
}

}  // namespace

const std::vector<double>& ExperimentConfig::sweep(const std::string& axis) const {
    for (const auto& a : sweeps) {
        if (a.name == axis) return a.values;
    }
    throw InvalidInput("experiment " + experiment + " has no sweep axis " + axis);
}

double ExperimentConfig::param(const std::string& name) const {
    const auto it = params.find(name);
    if (it == params.end()) throw InvalidInput("experiment " + experiment + " has no parameter " + name);
    return it->second;
}

ExperimentConfig validate_config(const std::string& text, const std::string& experiment, bool fast) {
    std::vector<Entry> entries;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    for (int line = 1; std::getline(in, raw); ++line) {
        const std::string content = raw.substr(0, raw.find('#'));
        if (trim(content).empty()) continue;
        const auto eq = content.find('=');
        const int first = static_cast<int>(content.find_first_not_of(" \t")) + 1;
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line, first);
        Entry e;
        e.key = trim(content.substr(0, eq));
        e.value = trim(content.substr(eq + 1));
        e.line = line;
        e.key_col = first;
        const auto vpos = content.find_first_not_of(" \t", eq + 1);
        e.value_col = static_cast<int>(vpos == std::string::npos ? eq + 1 : vpos) + 1;
        if (e.key.empty()) throw ConfigError("missing key", line, first);
        if (e.value.empty()) throw ConfigError("missing value for " + e.key, line, e.value_col);
        if (!seen.insert(e.key).second) throw ConfigError("duplicate key " + e.key, line, first);
        entries.push_back(e);
    }

    std::string name = experiment;
    for (const auto& e : entries) {
        if (e.key == "experiment") {
            if (!name.empty() && name != e.value) {
                throw ConfigError("config names experiment " + e.value + " but " + name + " was requested", e.line, e.value_col);
            }
            name = e.value;
        }
        if (e.key == "run.fast") {
            try {
                fast = fast || parse_bool(e.value);
            } catch (const BadValue& b) {
                throw ConfigError(b.what, e.line, e.value_col);
            }
        }
    }
    if (name.empty()) throw ConfigError("no experiment given; registry: " + registry_list());
    const detail::ExperimentDef* def = detail::find_experiment(name);
    if (!def) throw ConfigError("unknown experiment '" + name + "'; registry: " + registry_list());

    ExperimentConfig c;
    c.experiment = name;
    c.fast = fast;
    std::map<std::string, std::string> source;
    for (const auto& s : settings()) source[s.key] = s.source;
    if (fast) {
        c.integrator.step_relax = 4.0;
        source["integrator.step_relax"] = "fast mode";
        source["run.fast"] = "requested";
    }
    for (const auto& o : def->overrides) {
        find_setting(o.key)->set(c, o.value);
        source[o.key] = o.source;
    }
    for (const auto& s : def->sweeps) {
        set_sweep(c, s.name, fast ? s.fast : s.full);
        source["sweep." + s.name] = s.source + (fast ? " (fast grid)" : "");
    }
    for (const auto& p : def->params) {
        c.params[p.name] = p.value;
        source["param." + p.name] = p.source;
    }

    for (const auto& e : entries) {
        if (e.key == "experiment") continue;
        const std::string from = "config line " + std::to_string(e.line);
        try {
            if (e.key.rfind("sweep.", 0) == 0) {
                const std::string axis = e.key.substr(6);
                const auto it = std::find_if(def->sweeps.begin(), def->sweeps.end(), [&](const auto& s) { return s.name == axis; });
                if (it == def->sweeps.end()) throw ConfigError("unknown sweep axis '" + axis + "' for " + name, e.line, e.key_col);
                set_sweep(c, axis, parse_list(e.value, it->min));
            } else if (e.key.rfind("param.", 0) == 0) {
                const std::string pname = e.key.substr(6);
                const auto it = std::find_if(def->params.begin(), def->params.end(), [&](const auto& p) { return p.name == pname; });
                if (it == def->params.end()) throw ConfigError("unknown parameter '" + pname + "' for " + name, e.line, e.key_col);
                const double v = parse_number(e.value);
                if (v < it->min || v > it->max) {
                    throw BadValue{"value must lie in [" + fmt(it->min) + ", " + fmt(it->max) + "]"};
                }
                c.params[pname] = v;
            } else {
                const Setting* s = find_setting(e.key);
                if (!s) throw ConfigError("unknown key '" + e.key + "'", e.line, e.key_col);
                s->set(c, e.value);
            }
        } catch (const BadValue& b) {
            throw ConfigError(e.key + ": " + b.what, e.line, e.value_col);
        }
        source[e.key] = from;
    }

    try {
        c.system.validate();
        c.integrator.validate();
        if (!(c.system.Omega_mhz + c.gate.transmon_shift_mhz > 0.0)) {
            throw InvalidInput("gate.transmon_shift_mhz must leave a positive transmon frequency");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }

    c.provenance.push_back({"experiment", name, "requested"});
    for (const auto& s : settings()) {
        if (s.key != "run.output_dir") c.provenance.push_back({s.key, s.get(c), source[s.key]});
    }
    for (const auto& a : c.sweeps) c.provenance.push_back({"sweep." + a.name, join(a.values), source["sweep." + a.name]});
    for (const auto& [k, v] : c.params) c.provenance.push_back({"param." + k, fmt(v), source["param." + k]});
    return c;
}

void ResultTable::add_row(std::vector<double> row) {
    if (row.size() != headers.size()) {
        throw InvalidInput("ResultTable: row has " + std::to_string(row.size()) + " values for " +
                           std::to_string(headers.size()) + " columns");
    }
    rows.push_back(std::move(row));
}

void ResultTable::validate() const {
    std::set<std::string> unique(headers.begin(), headers.end());
    if (unique.size() != headers.size()) throw InvalidInput("ResultTable: duplicate header");
    for (const auto& r : rows) {
        if (r.size() != headers.size()) throw InvalidInput("ResultTable: ragged row");
    }
}

std::size_t ResultTable::column(const std::string& header) const {
    const auto it = std::find(headers.begin(), headers.end(), header);
    if (it == headers.end()) throw InvalidInput("ResultTable: no column " + header);
    return static_cast<std::size_t>(it - headers.begin());
}

std::vector<double> ResultTable::values(const std::string& header) const {
    const std::size_t k = column(header);
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r[k]);
    return out;
}

std::string ResultTable::to_csv() const {
    validate();
    std::string out;
    for (const auto& [k, v] : metadata) out += "# " + k + " = " + v + "\n";
    for (std::size_t i = 0; i < headers.size(); ++i) out += (i ? "," : "") + headers[i];
    out += "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + fmt(r[i]);
        out += "\n";
    }
    return out;
}

std::vector<ExperimentInfo> experiment_registry() {
    std::vector<ExperimentInfo> out;
    for (const auto& d : detail::experiment_defs()) out.push_back({d.name, d.description});
    return out;
}

ResultTable run_experiment(const ExperimentConfig& cfg, const ProgressSink& progress) {
    const detail::ExperimentDef* def = detail::find_experiment(cfg.experiment);
    if (!def) throw ConfigError("unknown experiment '" + cfg.experiment + "'; registry: " + registry_list());
    const auto t0 = std::chrono::steady_clock::now();
    ResultTable t = def->run(cfg, progress);
    t.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::vector<std::pair<std::string, std::string>> meta{{"artifact", kArtifactVersion},
                                                          {"experiment", cfg.experiment + " : " + def->description}};
    for (const auto& p : cfg.provenance) {
        if (p.key != "experiment") meta.emplace_back(p.key, p.value + "  [" + p.source + "]");
    }
    meta.insert(meta.end(), t.metadata.begin(), t.metadata.end());
    t.metadata = std::move(meta);
    t.validate();
    return t;
}

std::string write_table(const ResultTable& table, const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.output_dir);
    const std::string path = (std::filesystem::path(cfg.output_dir) / (cfg.experiment + ".csv")).string();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidInput("cannot write " + path);
    f << table.to_csv();
    return path;
}

int worker_count(int requested) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    n = std::max(n, 1);
    if (const char* cap = std::getenv("EMSIM_MAX_WORKERS")) {
        const int c = std::atoi(cap);
        if (c > 0) n = std::min(n, c);
    }
    return n;
}

}  // namespace emsim
