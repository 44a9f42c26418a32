#include "emsim/analysis.hpp"

#include "emsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace emsim {

double fidelity(const Matrix& rho, const Vector& psi) {
    if (rho.rows() != psi.size() || rho.cols() != psi.size()) throw DimensionError("fidelity: dimension mismatch");
    if (std::abs(psi.norm() - 1.0) > 1e-8) throw InvalidInput("fidelity: state is not normalized");
    const double overlap = (psi.adjoint() * rho * psi)(0, 0).real();
    return std::sqrt(std::clamp(overlap, 0.0, 1.0));
}

std::vector<InputState> standard_input_states() {
    const double r = 1.0 / std::sqrt(2.0);
    auto basis = [](int i) {
        Vector v = Vector::Zero(4);
        v(i) = 1.0;
        return v;
    };
    std::vector<InputState> out;
    out.push_back({"00", basis(0)});
    out.push_back({"01", basis(1)});
    out.push_back({"10", basis(2)});
    out.push_back({"11", basis(3)});
    out.push_back({"+0", r * (basis(0) + basis(2))});
    out.push_back({"-0", r * (basis(0) - basis(2))});
    out.push_back({"0+", r * (basis(0) + basis(1))});
    out.push_back({"0-", r * (basis(0) - basis(1))});
    out.push_back({"bell", r * (basis(0) + basis(3))});
    return out;
}

std::vector<int> computational_indices(const ops::SubsystemLayout& layout) {
    const auto s1 = layout.slot_of(ops::Subsystem::NR1);
    const auto s2 = layout.slot_of(ops::Subsystem::NR2);
    const auto st = layout.slot_of(ops::Subsystem::Transmon);
    std::vector<int> idx;
    for (int q1 = 0; q1 < 2; ++q1) {
        for (int q2 = 0; q2 < 2; ++q2) {
            std::vector<int> lv(layout.size(), 0);
            lv[s1] = q1;
            lv[s2] = q2;
            lv[st] = ops::kTransmonGround;
            idx.push_back(layout.index(lv));
        }
    }
    return idx;
}

Vector embed_computational(const Vector& psi4, const ops::SubsystemLayout& layout) {
    if (psi4.size() != 4) throw DimensionError("embed_computational: expected 4 amplitudes");
    Vector v = Vector::Zero(layout.total_dim());
    const auto idx = computational_indices(layout);
    for (int k = 0; k < 4; ++k) v(idx[k]) = psi4(k);
    return v;
}

Matrix to_rotating_frame(const Matrix& rho, const SystemParams& p, const ops::SubsystemLayout& layout,
                         double t) {
    const auto s1 = layout.slot_of(ops::Subsystem::NR1);
    const auto s2 = layout.slot_of(ops::Subsystem::NR2);
    const auto st = layout.slot_of(ops::Subsystem::Transmon);
    const int d = layout.total_dim();
    if (rho.rows() != d) throw DimensionError("to_rotating_frame: dimension mismatch");
    Vector phase(d);
    for (int i = 0; i < d; ++i) {
        const auto lv = layout.levels(i);
        const double sz = lv[st] == ops::kTransmonExcited ? 1.0 : -1.0;
        const double e = angular(p.omega1_mhz) * lv[s1] + angular(p.omega2_mhz) * lv[s2] +
                         0.5 * angular(p.Omega_mhz) * sz;
        phase(i) = std::exp(kI * e * t);
    }
    return phase.asDiagonal() * rho * phase.conjugate().asDiagonal();
}

ObservablePoint spin_observables(const Matrix& rho, const std::optional<ops::SubsystemLayout>& layout) {
    Matrix block;
    ObservablePoint out;
    if (layout) {
        const auto idx = computational_indices(*layout);
        block.resize(4, 4);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) block(a, b) = rho(idx[a], idx[b]);
    } else {
        if (rho.rows() != 4 || rho.cols() != 4) throw DimensionError("spin_observables: expected 4x4");
        block = rho;
    }
    const double tr = block.trace().real();
    out.discarded = std::max(0.0, 1.0 - tr);
    if (tr > 0.0) block /= tr;
    auto s = [](ops::Axis a, int q) {
        const Matrix p = ops::pauli(a);
        return q == 1 ? ops::kron(p, ops::identity(2)) : ops::kron(ops::identity(2), p);
    };
    const Matrix sz = 0.5 * (s(ops::Axis::Z, 1) + s(ops::Axis::Z, 2));
    const Matrix sx = 0.5 * (s(ops::Axis::X, 1) + s(ops::Axis::X, 2));
    out.sz = (block * sz).trace().real();
    out.sx = (block * sx).trace().real();
    for (int k = 0; k < 4; ++k) out.populations.push_back(block(k, k).real());
    return out;
}

double leakage(const Matrix& rho, const ops::SubsystemLayout& layout) {
    const auto s1 = layout.slot_of(ops::Subsystem::NR1);
    const auto s2 = layout.slot_of(ops::Subsystem::NR2);
    const auto st = layout.slot_of(ops::Subsystem::Transmon);
    double sum = 0.0;
    for (int i = 0; i < layout.total_dim(); ++i) {
        const auto lv = layout.levels(i);
        if (lv[s1] >= 2 || lv[s2] >= 2 || lv[st] == ops::kTransmonExcited) sum += rho(i, i).real();
    }
    return std::max(0.0, sum);
}

double leakage_trace(const Trajectory& traj, const ops::SubsystemLayout& layout) {
    double m = 0.0;
    for (const auto& r : traj.states) m = std::max(m, leakage(r, layout));
    return m;
}

LindbladSpec system_dissipators(const SystemParams& p, const ops::SubsystemLayout& layout,
                                const std::optional<ThermalBathSpec>& bath1,
                                const std::optional<ThermalBathSpec>& bath2) {
    p.validate();
    const OperatorSet o(layout);
    LindbladSpec spec;
    auto add = [&](const Matrix& op, double hz, const char* label) {
        if (hz > 0.0) spec.add(op, angular_rate_hz(hz), label);
    };
    add(o.b1, p.gamma1_hz, "nr1_decay");
    add(o.b2, p.gamma2_hz, "nr2_decay");
    add(o.n1, p.gamma1d_hz, "nr1_dephasing");
    add(o.n2, p.gamma2d_hz, "nr2_dephasing");
    add(o.sm, p.gammaTR_hz, "tr_decay");
    add(o.sz, p.gammaTRd_hz, "tr_dephasing");
    if (bath1) spec.append(thermal_dissipators(*bath1, o.b1));
    if (bath2) spec.append(thermal_dissipators(*bath2, o.b2));
    return spec;
}

SequenceResult run_sequence(const SystemParams& p, const PulseSchedule& schedule, const Vector& psi0,
                            const Vector& target, const FidelityRun& run) {
    if (psi0.size() != 4 || target.size() != 4) throw DimensionError("run_sequence: states must have 4 amplitudes");
    const auto layout = ops::SubsystemLayout::standard(run.n_max);
    const ControlledHamiltonian h = render_hamiltonian(schedule, p, layout);
    const LindbladSpec diss = system_dissipators(p, layout, run.bath1, run.bath2);
    const double T = schedule.duration();
    std::vector<double> grid{0.0};
    for (int k = 1; k <= run.leakage_samples; ++k) grid.push_back(T * k / (run.leakage_samples + 1));
    for (double t : run.record_times) {
        if (!(t >= 0.0 && t <= T)) throw InvalidInput("run_sequence: record time outside the schedule");
        grid.push_back(t);
    }
    if (T > 0.0) grid.push_back(T);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    Observer obs;
    std::size_t next = 0;
    if (run.progress && !run.progress_marks.empty()) {
        obs = [&](double t, const Matrix&) {
            while (next < run.progress_marks.size() && t >= run.progress_marks[next] - 1e-9) run.progress(next++);
        };
    }
    const Vector v0 = embed_computational(psi0, layout);
    IntegratorConfig cfg = run.integrator;
    if (obs) cfg.stride = std::max(cfg.stride, 256);  // the observer converts to the lab frame
    const Trajectory traj = lindblad_evolve(h, diss, v0 * v0.adjoint(), grid, cfg, obs);
    if (run.progress) {
        while (next < run.progress_marks.size()) run.progress(next++);
    }
    SequenceResult r;
    r.duration = T;
    r.max_trace_drift = traj.max_trace_drift;
    r.rho = to_rotating_frame(traj.states.back(), p, layout, T);
    r.fidelity = fidelity(r.rho, embed_computational(target.normalized(), layout));
    r.observables = spin_observables(r.rho, layout);
    r.max_leakage = leakage_trace(traj, layout);
    for (double t : run.record_times) {
        const auto k = std::lower_bound(grid.begin(), grid.end(), t) - grid.begin();
        r.recorded.push_back(to_rotating_frame(traj.states[k], p, layout, t));
    }
    return r;
}

FidelityReport gate_fidelity_experiment(const SystemParams& p, const PulseSchedule& schedule,
                                        const Matrix& target, const std::vector<InputState>& inputs,
                                        const FidelityRun& run) {
    if (target.rows() != 4 || target.cols() != 4) throw DimensionError("gate_fidelity_experiment: target must be 4x4");
    if (inputs.empty()) throw InvalidInput("gate_fidelity_experiment: no input states");
    FidelityReport rep;
    rep.duration = schedule.duration();
    for (const auto& in : inputs) {
        const SequenceResult r = run_sequence(p, schedule, in.psi, target * in.psi, run);
        rep.labels.push_back(in.label);
        rep.fidelities.push_back(r.fidelity);
        rep.max_leakage = std::max(rep.max_leakage, r.max_leakage);
    }
    rep.mean = std::accumulate(rep.fidelities.begin(), rep.fidelities.end(), 0.0) / rep.fidelities.size();
    rep.min = *std::min_element(rep.fidelities.begin(), rep.fidelities.end());
    return rep;
}

}  // namespace emsim
