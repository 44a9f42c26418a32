// compiler.hpp: Trotterization of two-spin Hamiltonians into native gate sequences

#pragma once

#include "emsim/operators.hpp"
#include "emsim/pulses.hpp"

#include <string>
#include <vector>

namespace emsim {

// Spin operators s_a = sigma_a / 2 with spin up = qubit |0>. Coefficients in MHz.
struct OneBodyTerm {
    int qubit;
    ops::Axis axis;
    double coeff_mhz;  // coeff * s_axis^qubit
};

struct TwoBodyTerm {
    enum class Form {
        Product,   // s_a^1 s_b^2
        Exchange,  // s_a^1 s_a^2 + s_b^1 s_b^2 (a = x, b = y is the XY form)
        XYMinus,   // s_x^1 s_x^2 - s_y^1 s_y^2
    };
    Form form;
    ops::Axis a;
    ops::Axis b;
    double coeff_mhz;
};

struct SpinHamiltonianSpec {
    std::vector<OneBodyTerm> one_body;
    std::vector<TwoBodyTerm> two_body;

    bool empty() const noexcept { return one_body.empty() && two_body.empty(); }
    void validate() const;
    // Ordered term list as 4x4 Hermitian matrices (rad/us), in the Trotter order.
    std::vector<Matrix> term_matrices() const;
    Matrix matrix() const;

    // Lambda s_x^1 s_x^2 + b (s_z^1 + s_z^2)
    static SpinHamiltonianSpec tim(double lambda_mhz, double b_mhz);
};

// 2D s_z^1 s_z^2 + 2E (s_x^1 s_x^2 - s_y^1 s_y^2)
SpinHamiltonianSpec map_spin1(double d_mhz, double e_mhz);
// D S_z^2 + E (S_x^2 - S_y^2) for a single S = 1 spin, rad/us.
Matrix spin1_hamiltonian(double d_mhz, double e_mhz);

struct GateRecord {
    GateSpec gate;
    bool parallel = false;  // runs in the same window as the previous record
};

using GateSequence = std::vector<GateRecord>;

// Ideal 4x4 unitaries in the basis index 2 q1 + q2. native_sign = sign(Gamma) fixes
// XYEvolve(theta) = exp(-i s theta (XX + YY) / 2).
Matrix gate_unitary(const GateSpec& g, int native_sign);
Matrix sequence_unitary(const GateSequence& seq, int native_sign);

// Pauli-level target exp(-i J P t) with P = XX+YY (Exchange x,y), XX-YY, sigma_a sigma_b,
// or sigma_a sigma_a + sigma_b sigma_b, up to a global sign.
GateSequence compile_two_body(TwoBodyTerm::Form form, ops::Axis a, ops::Axis b, double j_mhz,
                              double t, int native_sign);
Matrix two_body_pauli(TwoBodyTerm::Form form, ops::Axis a, ops::Axis b);

struct TrotterPlan {
    int n_steps = 1;
    double t = 0.0;
    double tau = 0.0;
    int native_sign = -1;
    GateSequence gates;
    std::vector<std::size_t> step_end;    // gates[0, step_end[k]) completes step k
    std::vector<Matrix> prefix_reference;  // ideal product after each step

    int two_qubit_count() const;
    int single_qubit_count() const;
    std::string serialize() const;
};

TrotterPlan trotterize(const SpinHamiltonianSpec& spec, double t, int n_steps, int native_sign);

// Exact first-order Trotter product prod_k exp(-i H_k tau), N times.
Matrix trotter_exact(const SpinHamiltonianSpec& spec, double t, int n_steps);

Matrix reference_unitary(const TrotterPlan& plan);

// Pulse schedule for a gate sequence. XY windows start on multiples of xy_alignment().
// gate_ends, when given, receives the end time of each record's window.
PulseSchedule schedule_sequence(const GateSequence& seq, const SystemParams& params,
                                const GateOptions& opts, std::vector<double>* gate_ends = nullptr);

// Ideal two-qubit operators used throughout (basis index 2 q1 + q2).
Matrix pauli2(ops::Axis a, int qubit);
Matrix rotation(ops::Axis a, int qubit, double angle);

}  // namespace emsim
