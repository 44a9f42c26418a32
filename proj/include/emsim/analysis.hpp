// analysis.hpp: Fidelities, spin observables and leakage of simulated trajectories

#pragma once

#include "emsim/dynamics.hpp"
#include "emsim/model.hpp"
#include "emsim/pulses.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace emsim {

// sqrt(<psi|rho|psi>), clamped to [0, 1]. Throws InvalidInput for | |psi| - 1 | > 1e-8.
double fidelity(const Matrix& rho, const Vector& psi);

struct InputState {
    std::string label;
    Vector psi;  // 4 amplitudes in the basis 2 q1 + q2
};

// |00>, |01>, |10>, |11>, (|0> +- |1>)/sqrt2 on each qubit with the other in |0>,
// and (|00> + |11>)/sqrt2.
std::vector<InputState> standard_input_states();

// Computational state embedded with the transmon in its ground state.
Vector embed_computational(const Vector& psi4, const ops::SubsystemLayout& layout);
// Global basis indices of |q1 q2> with the transmon in its ground state.
std::vector<int> computational_indices(const ops::SubsystemLayout& layout);

// e^{i H_ref t} rho e^{-i H_ref t} with H_ref = omega1 n1 + omega2 n2 + Omega sigma_z / 2.
Matrix to_rotating_frame(const Matrix& rho, const SystemParams& params,
                         const ops::SubsystemLayout& layout, double t);

struct ObservablePoint {
    double sz = 0.0;  // Tr[rho (s_z1 + s_z2)]
    double sx = 0.0;  // Tr[rho (s_x1 + s_x2)]
    std::vector<double> populations;  // |00>, |01>, |10>, |11>
    double discarded = 0.0;           // weight outside the computational block
};

// rho is either 4x4 or a full-layout matrix, which is projected onto the computational block
// and renormalized.
ObservablePoint spin_observables(const Matrix& rho, const std::optional<ops::SubsystemLayout>& layout = {});

// Population with n1 >= 2, n2 >= 2 or the transmon excited.
double leakage(const Matrix& rho, const ops::SubsystemLayout& layout);
double leakage_trace(const Trajectory& traj, const ops::SubsystemLayout& layout);

// gamma_i D(b_i) + gamma_id D(n_i) + gammaTR D(sigma_-) + gammaTRd D(sigma_z), plus thermal terms.
LindbladSpec system_dissipators(const SystemParams& params, const ops::SubsystemLayout& layout,
                                const std::optional<ThermalBathSpec>& bath1 = {},
                                const std::optional<ThermalBathSpec>& bath2 = {});

struct FidelityRun {
    int n_max = 4;
    IntegratorConfig integrator;
    int leakage_samples = 0;  // extra grid points for leakage tracking (0: endpoints only)
    std::vector<double> record_times;  // states kept in SequenceResult::recorded (us, in [0, T])
    std::optional<ThermalBathSpec> bath1, bath2;
    // Called once the simulation passes each mark (us), with the mark index.
    std::vector<double> progress_marks;
    std::function<void(std::size_t)> progress;
};

struct SequenceResult {
    Matrix rho;  // final state in the bare rotating frame, full layout
    double fidelity = 0.0;
    ObservablePoint observables;
    double duration = 0.0;
    double max_leakage = 0.0;
    double max_trace_drift = 0.0;
    std::vector<Matrix> recorded;  // bare rotating frame, one per record time
};

// Evolves |psi0> (embedded) under the schedule and master equation and scores it against
// |target> in the frame rotating with the bare qubit and transmon frequencies.
SequenceResult run_sequence(const SystemParams& params, const PulseSchedule& schedule,
                            const Vector& psi0, const Vector& target, const FidelityRun& run = {});

struct FidelityReport {
    std::vector<std::string> labels;
    std::vector<double> fidelities;
    double mean = 0.0;
    double min = 0.0;
    double max_leakage = 0.0;
    double duration = 0.0;
    std::string input_set = "standard-9";
};

FidelityReport gate_fidelity_experiment(const SystemParams& params, const PulseSchedule& schedule,
                                        const Matrix& target, const std::vector<InputState>& inputs,
                                        const FidelityRun& run = {});

}  // namespace emsim
