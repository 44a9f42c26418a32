#include "experiments.hpp"

#include "emsim/analysis.hpp"
#include "emsim/compiler.hpp"
#include "emsim/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>

namespace emsim::detail {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v;
    for (int k = 0; k < n; ++k) v.push_back(n == 1 ? a : a + (b - a) * k / (n - 1));
    return v;
}

std::vector<double> logspace(double a, double b, int n) {
    std::vector<double> v;
    for (double e : linspace(std::log10(a), std::log10(b), n)) v.push_back(std::pow(10.0, e));
    return v;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

FidelityRun fidelity_run(const ExperimentConfig& c) {
    FidelityRun r;
    r.n_max = c.n_max;
    r.integrator = c.integrator;
    return r;
}

int workers(const ExperimentConfig& c) { return worker_count(c.workers); }

// Serializes progress lines from concurrent workers.
struct Progress {
    const ProgressSink& sink;
    std::mutex m;

    void operator()(const std::string& line) {
        if (!sink) return;
        std::lock_guard lock(m);
        sink(line);
    }
};

int native_sign(double gamma) { return gamma < 0.0 ? -1 : 1; }

// Effective XY coupling of the two-qubit window, MHz.
double window_gamma(const ExperimentConfig& c) {
    return plan_xy_window(c.system, c.gate.transmon_shift_mhz, 1.0).Gamma_mhz;
}

ResultTable fig2(const ExperimentConfig& c, const ProgressSink&) {
    const auto& g = c.sweep("g_mhz");
    const int n_max = static_cast<int>(c.param("n_max"));
    auto rows = parallel_map(g.size(), workers(c), [&](std::size_t i) {
        RabiParams rp{c.param("omega_mhz"), c.param("Omega_mhz"), g[i]};
        const SpectrumReport s = rabi_spectrum(rp, n_max);
        return std::vector<double>{g[i], s.delta_mhz, perturbative_delta(rp), s.p[0], s.p[1], s.p[2],
                                   s.leakage[0], s.leakage[1], s.leakage[2], double(s.n_max_used)};
    });
    ResultTable t;
    t.headers = {"g_mhz", "delta_mhz", "delta_pert_mhz", "p0", "p1", "p2", "sc_exc0", "sc_exc1", "sc_exc2", "n_max_used"};
    for (auto& r : rows) t.add_row(std::move(r));
    return t;
}

PulseSchedule fig3_schedule(const ExperimentConfig& c, const SystemParams& p, bool two_qubit, Matrix& target) {
    const GateSpec g = two_qubit ? GateSpec::sqrt_iswap() : GateSpec::rx(1, kPi / 2);
    target = gate_unitary(g, native_sign(window_gamma(c)));
    return schedule_gate(g, p, c.gate);
}

ResultTable fig3(const ExperimentConfig& c, const ProgressSink& sink, bool two_qubit) {
    const auto& nr = c.sweep("gamma_nr_d_hz");
    const auto& tr = c.sweep("gamma_tr_d_hz");
    Progress progress{sink, {}};
    const std::size_t n = nr.size() * tr.size();
    auto rows = parallel_map(n, workers(c), [&](std::size_t i) {
        SystemParams p = c.system;
        p.gamma1d_hz = p.gamma2d_hz = nr[i / tr.size()];
        p.gammaTRd_hz = tr[i % tr.size()];
        Matrix target;
        const PulseSchedule s = fig3_schedule(c, p, two_qubit, target);
        const FidelityReport rep = gate_fidelity_experiment(p, s, target, standard_input_states(), fidelity_run(c));
        progress(c.experiment + ": point " + std::to_string(i + 1) + "/" + std::to_string(n) + " mean fidelity " + num(rep.mean));
        return std::vector<double>{p.gamma1d_hz, p.gammaTRd_hz, rep.mean, rep.min, rep.max_leakage, rep.duration};
    });
    ResultTable t;
    t.headers = {"gamma_nr_d_hz", "gamma_tr_d_hz", "fidelity_mean", "fidelity_min", "max_leakage", "duration_us"};
    for (auto& r : rows) t.add_row(std::move(r));
    t.metadata.emplace_back("gate", two_qubit ? "sqrt(iSWAP)" : "Rx(pi/2) on qubit 1");
    t.metadata.emplace_back("input_set", "standard-9");
    return t;
}

ResultTable fig4(const ExperimentConfig& c, const ProgressSink& sink) {
    const auto& delta = c.sweep("delta_mhz");
    Progress progress{sink, {}};
    const GateSpec g = GateSpec::rx(1, kPi);
    const Matrix target = gate_unitary(g, native_sign(window_gamma(c)));
    const std::size_t n = 2 * delta.size();
    auto reps = parallel_map(n, workers(c), [&](std::size_t i) {
        SystemParams p = c.system;
        p.nl1 = p.nl2 = NonlinearityModel::kerr(delta[i / 2] / 2.0);
        GateOptions o = c.gate;
        o.envelope = i % 2 ? EnvelopeKind::Square : EnvelopeKind::Gaussian;
        FidelityRun run = fidelity_run(c);
        run.leakage_samples = static_cast<int>(c.param("leakage_samples"));
        const FidelityReport rep = gate_fidelity_experiment(p, schedule_gate(g, p, o), target, standard_input_states(), run);
        progress("fig4: delta " + num(delta[i / 2]) + " MHz " + (i % 2 ? "square" : "gaussian") + " mean fidelity " + num(rep.mean));
        return rep;
    });
    ResultTable t;
    t.headers = {"delta_mhz",       "beta_mhz",           "gauss_fidelity_mean", "gauss_fidelity_min", "gauss_max_leakage",
                 "gauss_duration_us", "square_fidelity_mean", "square_fidelity_min", "square_max_leakage", "square_duration_us"};
    for (std::size_t k = 0; k < delta.size(); ++k) {
        const auto& a = reps[2 * k];
        const auto& b = reps[2 * k + 1];
        t.add_row({delta[k], delta[k] / 2.0, a.mean, a.min, a.max_leakage, a.duration, b.mean, b.min, b.max_leakage, b.duration});
    }
    return t;
}

ResultTable fig5a(const ExperimentConfig& c, const ProgressSink& sink) {
    const auto& gd = c.sweep("gamma_nr_d_hz");
    const int points = static_cast<int>(c.param("points"));
    const double G = window_gamma(c);
    const double D = c.param("d_over_gamma") * G, E = c.param("e_over_gamma") * G;
    // <S_z> = cos(2 E t): the axis spans half a tunneling period.
    const double t_half = kPi / (2.0 * angular(std::abs(E)));
    Vector psi0 = Vector::Zero(4);
    psi0(0) = 1.0;
    Progress progress{sink, {}};
    const std::size_t n = gd.size() * points;
    auto rows = parallel_map(n, workers(c), [&](std::size_t i) {
        SystemParams p = c.system;
        p.gamma1d_hz = p.gamma2d_hz = gd[i / points];
        const double t = t_half * double(i % points + 1) / points;
        const TrotterPlan plan = trotterize(map_spin1(D, E), t, 1, native_sign(G));
        const Vector target = reference_unitary(plan) * psi0;
        const SequenceResult r = run_sequence(p, schedule_sequence(plan.gates, p, c.gate), psi0, target, fidelity_run(c));
        const ObservablePoint ideal = spin_observables(Matrix(target * target.adjoint()));
        progress("fig5a: gamma_nr_d " + num(p.gamma1d_hz) + " Hz, t = " + num(t) + " us, fidelity " + num(r.fidelity));
        return std::vector<double>{p.gamma1d_hz, t, r.observables.sz, ideal.sz, r.observables.sx, r.fidelity,
                                   r.duration, r.observables.discarded};
    });
    ResultTable t;
    t.headers = {"gamma_nr_d_hz", "t_us", "sz", "sz_exact", "sx", "fidelity", "duration_us", "discarded"};
    for (auto& r : rows) t.add_row(std::move(r));
    t.metadata.emplace_back("D_mhz", num(D));
    t.metadata.emplace_back("E_mhz", num(E));
    t.metadata.emplace_back("initial_state", "|00> (S_z = +1)");
    return t;
}

ResultTable fig5b(const ExperimentConfig& c, const ProgressSink& sink) {
    const auto& gd = c.sweep("gamma_nr_d_hz");
    const int N = static_cast<int>(c.param("n_steps"));
    const double t_max = c.param("t_max_us");
    const double G = window_gamma(c);
    const auto spec = SpinHamiltonianSpec::tim(c.param("lambda_over_gamma") * G, c.param("b_over_gamma") * G);
    const TrotterPlan plan = trotterize(spec, t_max, N, native_sign(G));
    std::vector<double> ends;
    const PulseSchedule schedule = schedule_sequence(plan.gates, c.system, c.gate, &ends);
    std::vector<double> marks;
    for (std::size_t e : plan.step_end) marks.push_back(ends[e - 1]);
    const Vector psi0 = Vector::Constant(4, 0.5);  // |++>

    Progress progress{sink, {}};
    auto runs = parallel_map(gd.size(), workers(c), [&](std::size_t i) {
        SystemParams p = c.system;
        p.gamma1d_hz = p.gamma2d_hz = gd[i];
        FidelityRun run = fidelity_run(c);
        run.record_times = marks;
        run.progress_marks = marks;
        run.progress = [&, i](std::size_t k) {
            progress("fig5b: gamma_nr_d " + num(gd[i]) + " Hz, Trotter step " + std::to_string(k + 1) + "/" + std::to_string(N) +
                     " (" + num(marks[k]) + " of " + num(schedule.duration()) + " us)");
        };
        return run_sequence(p, schedule, psi0, reference_unitary(plan) * psi0, run);
    });

    ResultTable t;
    t.headers = {"gamma_nr_d_hz", "step", "t_us", "elapsed_us", "sx", "sx_trotter", "sz", "sz_trotter",
                 "fidelity", "two_qubit_windows", "single_qubit_windows"};
    for (std::size_t i = 0; i < gd.size(); ++i) {
        const ObservablePoint o0 = spin_observables(Matrix(psi0 * psi0.adjoint()));
        t.add_row({gd[i], 0.0, 0.0, 0.0, o0.sx, o0.sx, o0.sz, o0.sz, 1.0, 0.0, 0.0});
        for (int k = 0; k < N; ++k) {
            const Vector ideal = plan.prefix_reference[k] * psi0;
            const Matrix& rho = runs[i].recorded[k];
            const ObservablePoint o = spin_observables(rho, ops::SubsystemLayout::standard(c.n_max));
            const ObservablePoint oi = spin_observables(Matrix(ideal * ideal.adjoint()));
            TrotterPlan prefix = plan;
            prefix.gates.resize(plan.step_end[k]);
            t.add_row({gd[i], double(k + 1), plan.tau * (k + 1), marks[k], o.sx, oi.sx, o.sz, oi.sz,
                       fidelity(rho, embed_computational(ideal, ops::SubsystemLayout::standard(c.n_max))),
                       double(prefix.two_qubit_count()), double(prefix.single_qubit_count())});
        }
    }
    t.metadata.emplace_back("lambda_mhz", num(c.param("lambda_over_gamma") * G));
    t.metadata.emplace_back("b_mhz", num(c.param("b_over_gamma") * G));
    t.metadata.emplace_back("initial_state", "|++> (S_x = +1)");
    t.metadata.emplace_back("total_duration_us", num(schedule.duration()));
    return t;
}

ResultTable fig6(const ExperimentConfig& c, const ProgressSink&) {
    const auto& u = c.sweep("u_over_omega");
    const double omega = c.param("omega_mhz");
    const int n_max = static_cast<int>(c.param("n_max"));
    auto rows = parallel_map(u.size(), workers(c), [&](std::size_t i) {
        const double U = u[i] * omega;
        return std::vector<double>{u[i], nonlinear_shift(NonlinearityModel::kerr(U), omega, n_max) / omega,
                                   nonlinear_shift(NonlinearityModel::quartic(U), omega, n_max) / omega};
    });
    ResultTable t;
    t.headers = {"u_over_omega", "delta_kerr_over_omega", "delta_quartic_over_omega"};
    for (auto& r : rows) t.add_row(std::move(r));
    return t;
}

ResultTable fig7(const ExperimentConfig& c, const ProgressSink&) {
    const auto& g = c.sweep("g_mhz");
    const int n_max = static_cast<int>(c.param("n_max"));
    const int samples = static_cast<int>(c.param("samples"));
    // White spectra in plain 1/s (converted to 1/us): S(0) = gamma_d, S(w > 0) = gamma.
    const double nr = c.param("gamma_nr_hz") * 1e-6, nr_d = c.param("gamma_nr_d_hz") * 1e-6;
    const double sc = c.param("gamma_sc_hz") * 1e-6, sc_d = c.param("gamma_sc_d_hz") * 1e-6;
    auto rows = parallel_map(g.size(), workers(c), [&](std::size_t i) {
        const RabiParams rp{c.param("omega_mhz"), c.param("Omega_mhz"), g[i]};
        const Matrix h = build_rabi_hamiltonian(rp, n_max);
        const auto layout = ops::SubsystemLayout::rabi(n_max);
        const Matrix b = ops::embed(ops::annihilation_operator(n_max + 1), ops::Subsystem::NR, layout);
        const Matrix sx = ops::embed(ops::pauli(ops::Axis::X), ops::Subsystem::SC, layout);
        const Matrix sz = ops::embed(ops::pauli(ops::Axis::Z), ops::Subsystem::SC, layout);
        const std::vector<NoiseCoupling> couplings{{b + b.adjoint(), nr_d, nr, "nr_x"},
                                                   {b.adjoint() * b, nr_d, nr, "nr_n"},
                                                   {sx, sc_d, sc, "sc_x"},
                                                   {sz, sc_d, sc, "sc_z"}};
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        if (es.info() != Eigen::Success) throw NumericError("fig7: eigendecomposition failed");
        const Matrix V = es.eigenvectors();
        const Vector psi = (V.col(0) + V.col(1)) / std::sqrt(2.0);
        const Matrix rho0 = psi * psi.adjoint();

        // Each time is fitted on a window of ten estimated decay times; the first pass uses
        // the uncoupled values.
        auto measure = [&](double t_end, bool coherence) {
            std::vector<double> grid, y;
            for (int k = 0; k <= samples; ++k) grid.push_back(t_end * k / samples);
            const Trajectory tr = bloch_redfield_evolve(h, couplings, rho0, grid);
            for (const auto& r : tr.states) {
                const Matrix e = V.adjoint() * r * V;
                y.push_back(coherence ? std::abs(e(0, 1)) : e(1, 1).real());
            }
            return extract_decay_time(grid, y);
        };
        double T1 = 1.0 / nr, T2 = 2.0 / (nr + nr_d);
        for (int pass = 0; pass < 2; ++pass) {
            T1 = measure(10.0 * T1, false);
            T2 = measure(10.0 * T2, true);
        }
        return std::vector<double>{g[i], T1 * 1e-3, T2 * 1e-3, T1 * 1e-3 / c.param("T1_sc_ms"), T2 / c.param("T2_sc_us")};
    });
    ResultTable t;
    t.headers = {"g_mhz", "T1_ms", "T2_ms", "T1_over_T1sc", "T2_over_T2sc"};
    for (auto& r : rows) t.add_row(std::move(r));
    return t;
}

ResultTable table_a(const ExperimentConfig& c, const ProgressSink&) {
    const auto& omega = c.sweep("omega_mhz");
    const double delta = c.param("delta_mhz");
    const int n_max = static_cast<int>(c.param("n_max"));
    auto rows = parallel_map(omega.size(), workers(c), [&](std::size_t i) {
        const double U = calibrate_quartic(omega[i], delta, n_max);
        const SpectrumReport r = dressed_basis_report(NonlinearityModel::quartic(U), omega[i], n_max);
        return std::vector<double>{omega[i], U, nonlinear_shift(NonlinearityModel::quartic(U), omega[i], n_max),
                                   r.fidelity[0], r.fidelity[1], r.fidelity[2], r.fidelity[3],
                                   std::abs(r.X(0, 1)), std::abs(r.X(1, 2)), std::abs(r.X(0, 2))};
    });
    ResultTable t;
    t.headers = {"omega_mhz", "u_mhz", "delta_mhz", "fidelity_n0", "fidelity_n1", "fidelity_n2", "fidelity_n3", "X01", "X12", "X02"};
    for (auto& r : rows) t.add_row(std::move(r));
    return t;
}

ResultTable thermal(const ExperimentConfig& c, const ProgressSink& sink) {
    const auto& chi = c.sweep("chi_hz");
    const double nbar = c.param("nbar");
    Progress progress{sink, {}};
    const std::array<GateSpec, 2> gates{GateSpec::rx(1, kPi / 2), GateSpec::sqrt_iswap()};
    const int s = native_sign(window_gamma(c));
    // Work items: for each gate the bath-free reference, then one run per chi.
    const std::size_t per_gate = chi.size() + 1;
    auto means = parallel_map(2 * per_gate, workers(c), [&](std::size_t i) {
        const GateSpec& g = gates[i / per_gate];
        const std::size_t k = i % per_gate;
        FidelityRun run = fidelity_run(c);
        if (k > 0) run.bath1 = run.bath2 = ThermalBathSpec{chi[k - 1], nbar};
        const double m = gate_fidelity_experiment(c.system, schedule_gate(g, c.system, c.gate), gate_unitary(g, s),
                                                  standard_input_states(), run).mean;
        progress("thermal: " + to_string(g) + (k ? ", chi " + num(chi[k - 1]) + " Hz" : ", no bath") + " mean fidelity " + num(m));
        return m;
    });
    ResultTable t;
    t.headers = {"chi_hz", "nbar", "rx_fidelity_ref", "rx_fidelity", "rx_delta", "iswap_fidelity_ref", "iswap_fidelity", "iswap_delta"};
    for (std::size_t k = 0; k < chi.size(); ++k) {
        const double rx0 = means[0], rx = means[k + 1], sw0 = means[per_gate], sw = means[per_gate + k + 1];
        t.add_row({chi[k], nbar, rx0, rx, rx0 - rx, sw0, sw, sw0 - sw});
    }
    t.metadata.emplace_back("bath", "chi (nbar + 1) D(b_i) + chi nbar D(b_i†) on both resonators, added to all other terms");
    return t;
}

const std::string kNoDiss = "no dissipation for this experiment";

std::vector<Provenance> no_dissipation() {
    return {{"system.gamma1_hz", "0", kNoDiss},
            {"system.gamma2_hz", "0", kNoDiss},
            {"system.gammaTR_hz", "0", kNoDiss},
            {"system.gammaTRd_hz", "0", kNoDiss}};
}

const std::vector<Provenance> kDigitalDrive{{"gate.drive_amplitude_mhz", "0.5", "artifact choice for concatenated sequences (shorter pulses)"}};

}  // namespace

const std::vector<ExperimentDef>& experiment_defs() {
    static const std::vector<ExperimentDef> defs = [] {
        std::vector<ExperimentDef> d;
        d.push_back({"fig2",
                     "Rabi-model nonlinear shift, perturbative shift, Fock weights and SC excitation vs g",
                     {{"g_mhz", linspace(0.0, 50.0, 21), {0.0, 10.0, 50.0}, 0.0, "artifact grid; coupling range of the nonlinearity study"}},
                     {{"omega_mhz", 100.0, 1e-9, 1e9, "published: omega_NR/2pi = 100 MHz"},
                      {"Omega_mhz", 500.0, 1e-9, 1e9, "published: Omega_SC/2pi = 500 MHz"},
                      {"n_max", 20.0, 5.0, 80.0, "artifact default; raised until delta converges to 1%"}},
                     {},
                     fig2});
        for (int k = 0; k < 2; ++k) {
            const bool two = k == 1;
            d.push_back({two ? "fig3b" : "fig3a",
                         two ? "sqrt(iSWAP) fidelity vs NR and transmon pure-dephasing rates"
                             : "Rx(pi/2) fidelity vs NR and transmon pure-dephasing rates",
                         {{"gamma_nr_d_hz", logspace(10.0, 1e5, 8), {1e2, 1e3, 1e4}, 0.0, "artifact 8-point log grid over the visible axis"},
                          {"gamma_tr_d_hz", logspace(1e4, 1e6, 8), {1e4, 1e5, 1e6}, 0.0, "artifact 8-point log grid over the visible axis"}},
                         {},
                         {},
                         [two](const ExperimentConfig& c, const ProgressSink& s) { return fig3(c, s, two); }});
        }
        d.push_back({"fig4",
                     "Rx(pi) fidelity vs single-phonon shift delta, Gaussian and square envelopes, no dissipation",
                     {{"delta_mhz", {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0}, {0.5, 1.0, 3.0, 6.0}, 1e-6,
                       "artifact grid spanning the published delta axis"}},
                     {{"leakage_samples", 40.0, 0.0, 1e4, "artifact default"}},
                     no_dissipation(),
                     fig4});
        d.push_back({"fig5a",
                     "Digital simulation of an S = 1 spin tunneling: <S_z> vs t",
                     {{"gamma_nr_d_hz", {0.0, 1000.0}, {0.0, 1000.0}, 0.0, "published: infinite and finite T2 (gamma_NR,d/2pi = 1 kHz)"}},
                     {{"points", 8.0, 1.0, 100.0, "artifact default"},
                      {"d_over_gamma", 1.0, -1e3, 1e3, "artifact choice D = Gamma"},
                      {"e_over_gamma", 0.5, -1e3, 1e3, "artifact choice E = Gamma / 2"}},
                     kDigitalDrive,
                     fig5a});
        d.push_back({"fig5b",
                     "Digital simulation of the transverse-field Ising model (N = 10): <S_x> vs t",
                     {{"gamma_nr_d_hz", {100.0, 1000.0}, {100.0, 1000.0}, 0.0, "published: gamma_NR,d/2pi = 100 Hz and 1 kHz"}},
                     {{"n_steps", 10.0, 1.0, 1000.0, "published: N = 10"},
                      {"t_max_us", 50.0, 1e-6, 1e4, "artifact choice; total sequence about 150 us as published"},
                      {"lambda_over_gamma", 1.0, -1e3, 1e3, "artifact choice Lambda = Gamma"},
                      {"b_over_gamma", 0.5, -1e3, 1e3, "artifact choice b = Gamma / 2"}},
                     kDigitalDrive,
                     fig5b});
        d.push_back({"fig6",
                     "delta / omega vs U / omega for the Kerr and quartic nonlinearities",
                     {{"u_over_omega", linspace(0.0, 0.1, 21), {0.0, 0.05, 0.1}, 0.0, "artifact grid"}},
                     {{"omega_mhz", 85.0, 1e-9, 1e9, "published: omega_1/2pi = 85 MHz"},
                      {"n_max", 10.0, 3.0, 200.0, "published: n_max = 10"}},
                     {},
                     fig6});
        d.push_back({"fig7",
                     "Bloch-Redfield T1 and T2 of the coupled resonator and SC element vs g",
                     {{"g_mhz", linspace(0.0, 50.0, 11), {0.0, 25.0, 50.0}, 0.0, "artifact grid"}},
                     {{"omega_mhz", 100.0, 1e-9, 1e9, "published: omega_NR = 100 MHz"},
                      {"Omega_mhz", 500.0, 1e-9, 1e9, "published: Omega_SC = 500 MHz"},
                      {"gamma_nr_hz", 50.0, 0.0, 1e9, "published: gamma_NR = 50 Hz"},
                      {"gamma_nr_d_hz", 200.0, 0.0, 1e9, "published: gamma_NR,d = 200 Hz"},
                      {"gamma_sc_hz", 1e3, 0.0, 1e9, "published: gamma_SC = 1 kHz"},
                      {"gamma_sc_d_hz", 5e4, 0.0, 1e9, "published: gamma_SC,d = 50 kHz"},
                      {"T1_sc_ms", 1.0, 1e-12, 1e12, "published normalization T1,SC = 1 ms"},
                      {"T2_sc_us", 10.0, 1e-12, 1e12, "published normalization T2,SC = 10 us"},
                      {"n_max", 20.0, 2.0, 200.0, "artifact default"},
                      {"samples", 400.0, 40.0, 1e6, "artifact default"}},
                     {},
                     fig7});
        d.push_back({"tableA",
                     "Quartic-model eigenvector fidelities and b matrix elements, delta-matched to the Kerr model",
                     {{"omega_mhz", {75.0, 85.0}, {75.0, 85.0}, 1e-9, "published: omega_2 and omega_1"}},
                     {{"delta_mhz", 6.0, 1e-9, 1e9, "delta of the Kerr model with beta/2pi = 3 MHz"},
                      {"n_max", 10.0, 3.0, 200.0, "published: n_max = 10"}},
                     {},
                     table_a});
        d.push_back({"thermal",
                     "Gate-fidelity change from a thermal bath on both resonators vs chi",
                     {{"chi_hz", {50.0, 1000.0}, {50.0, 1000.0}, 0.0, "published: chi/2pi = 50 Hz and the pessimistic 1 kHz"}},
                     {{"nbar", 0.1, 0.0, 100.0, "published: nbar = 0.1"}},
                     {},
                     thermal});
        return d;
    }();
    return defs;
}

const ExperimentDef* find_experiment(const std::string& name) {
    for (const auto& d : experiment_defs()) {
        if (d.name == name) return &d;
    }
    return nullptr;
}

}  // namespace emsim::detail
